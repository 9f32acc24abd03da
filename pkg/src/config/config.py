import copy
import json
import os
try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from typing import Any, Dict, Optional

import jsonschema
import yaml

from src.config.schema import CONFIG_SCHEMA, ENV_MAPPINGS, SYNTH_FILE_KEYS
from src.util.errors import ConfigError
from src.util.logging import Logger


def _get_nested_value(config: Dict[str, Any], path: str) -> Any:
    """Get a nested value from a dictionary using dot notation."""
    value = config
    for key in path.split("."):
        if not isinstance(value, dict):
            return None
        value = value.get(key)
        if value is None:
            return None
    return value


def _set_nested_value(config: Dict[str, Any], path: str, value: Any) -> None:
    """Set a nested value in a dictionary using dot notation."""
    *parents, final_key = path.split(".")
    current = config
    for key in parents:
        if not isinstance(current.get(key), dict):
            current[key] = {}
        current = current[key]
    current[final_key] = value


def _convert_value(value: str, value_type: Optional[str]) -> Any:
    """Convert string value to the specified type."""
    if value_type == "bool":
        return value.lower() in ("true", "1", "yes", "y", "on")
    if value_type == "int":
        return int(value)
    if value_type == "float":
        return float(value)
    if value_type == "list":
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> None:
    """Merge override into base, descending into nested sections"""
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _deep_merge(base[key], value)
        else:
            base[key] = value


def _nest_flat_keys(loaded: Dict[str, Any]) -> Dict[str, Any]:
    """Move flat SynthConfig keys into their sections; they win over the same file's sections"""
    moved: Dict[str, Any] = {}
    for key, path in SYNTH_FILE_KEYS.items():
        if key in loaded:
            _set_nested_value(moved, path, loaded.pop(key))
    _deep_merge(loaded, moved)
    return loaded


def _read_config_file(config_path: str) -> Dict[str, Any]:
    with open(config_path, "rb") as f:
        raw = f.read()

    if config_path.endswith(".toml"):
        try:
            return _nest_flat_keys(tomllib.loads(raw.decode("utf-8")))
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"Failed to parse config file {config_path} as TOML: {e}")

    content = raw.decode("utf-8")
    try:
        loaded = yaml.safe_load(content)
    except yaml.YAMLError:
        try:
            loaded = json.loads(content)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Failed to parse config file {config_path} as YAML or JSON: {e}")
    if loaded is None:
        return {}
    if not isinstance(loaded, dict):
        raise ConfigError(f"Config file {config_path} must contain a mapping at top level")
    return _nest_flat_keys(loaded)


def validate_config(config: Dict[str, Any]) -> None:
    """Validate a merged configuration against CONFIG_SCHEMA"""
    try:
        jsonschema.validate(instance=config, schema=CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        location = ".".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"Invalid configuration at {location}: {e.message}")


def load_config(config_path: Optional[str] = None, environ: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
    """Load configuration from defaults, an optional file and the environment"""
    logger = Logger("Config")
    environ = os.environ if environ is None else environ

    config = copy.deepcopy(DEFAULT_CONFIG)

    if config_path:
        if not os.path.exists(config_path):
            raise ConfigError(f"Config file not found: {config_path}")
        _deep_merge(config, _read_config_file(config_path))
        logger.info("Loaded config file", extra_data={"path": config_path})

    for path, env_info in ENV_MAPPINGS.items():
        env_var = env_info if isinstance(env_info, str) else env_info["env"]
        env_type = env_info.get("type") if isinstance(env_info, dict) else None

        value = environ.get(env_var)
        if value is None or value == "":
            continue
        try:
            converted = _convert_value(value, env_type)
        except ValueError:
            raise ConfigError(f"Environment variable {env_var} must be of type {env_type}, got {value!r}")
        logger.debug(f"Applying {env_var}", extra_data={"path": path})
        _set_nested_value(config, path, converted)

    validate_config(config)
    return config


class Config:
    """Configuration singleton"""

    _instance = None
    _config = None
    _path: Optional[str] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Config, cls).__new__(cls)
            cls._instance.initialize()
        return cls._instance

    def initialize(self):
        """Initialize the configuration"""
        if Config._config is None:
            Config._config = load_config(os.environ.get("BANDEXT_CONFIG") or None)

    @classmethod
    def load(cls, config_path: Optional[str] = None) -> "Config":
        """Replace the active configuration with one loaded from config_path"""
        cls._config = load_config(config_path)
        cls._path = config_path
        return cls()

    @classmethod
    def reset(cls) -> None:
        """Forget the active configuration"""
        cls._config = None
        cls._instance = None
        cls._path = None

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value"""
        if not Config._config:
            return default
        value = _get_nested_value(Config._config, key)
        return value if value is not None else default

    def set(self, key: str, value: Any) -> None:
        """Override a single value (flags take precedence over file and environment)"""
        _set_nested_value(Config._config, key, value)

    def section(self, key: str) -> Dict[str, Any]:
        return copy.deepcopy(self.get(key, {}))

    def as_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(Config._config or {})

    @property
    def seed(self) -> int:
        return int(self.get("seed"))

    @property
    def output_dir(self) -> str:
        return self.get("output_dir", "./runs")

    @property
    def source_path(self) -> Optional[str]:
        return Config._path


# Default configuration
DEFAULT_CONFIG = {
    "seed": 1234,
    "output_dir": "./runs",
    "log_level": "WARNING",
    "trace": {"n_samples": 512, "dt_ms": 2.0},
    "bands": {
        "seismic": "3-6-60-80",
        "broadband": "0-1-160-200",
        "low": "0-0-8-16",
        "mid": "3-6-60-80",
        "high": "60-80-120-160",
        "display": "0-50-250-500",
    },
    "spectrogram": {"window_len": 64, "hop": 16, "n_fft": 64},
    "synth": {
        "n_pairs": 12,
        "tie_mix": [9, 2, 1],
        "facies_mix": [1 / 3, 1 / 3, 1 / 3],
        "noise_rms_fraction": 0.05,
        "fair_noise_fraction": 1.0,
        "wavelet_peak_hz": 25.0,
        "description": "Synthetic seismic/log pairs",
    },
    "welltie": {"max_lag_ms": 20.0, "good_threshold": 0.70, "fair_threshold": 0.40},
    "selection": {"n_good": 3, "n_fair": 1, "n_poor": 0, "exclude_poor": True, "exclude_wells": []},
    "generator": {"noise_dim": 8, "encoder_channels": [16, 32, 64, 128], "decoder_channels": [64, 32, 16, 16]},
    "discriminator": {"channels": [16, 32, 64]},
    "train": {
        "lambda_l1": 100.0,
        "lr": 2e-4,
        "beta1": 0.5,
        "beta2": 0.999,
        "epochs": 2000,
        "batch_size": 4,
        "checkpoint_every": 200,
        "augment": True,
    },
    "inference": {"realizations": 100, "bins": 30, "histogram_samples": [64, 128, 256, 384, 448], "workers": 1},
    "qc": {"realizations": 20, "max_checkpoints": 5},
    "study": {"held_out_well": "", "realizations": 20, "policies": []},
}
