# Environment variable mappings for config values
ENV_MAPPINGS = {
    "seed": {"env": "BANDEXT_SEED", "type": "int"},
    "output_dir": "BANDEXT_OUT",
    "log_level": "BANDEXT_LOG_LEVEL",
    "inference.workers": {"env": "BANDEXT_WORKERS", "type": "int"},
    "inference.realizations": {"env": "BANDEXT_REALIZATIONS", "type": "int"},
}

BAND_PATTERN = r"^\s*[0-9.]+\s*-\s*[0-9.]+\s*-\s*[0-9.]+\s*-\s*[0-9.]+\s*$"

_band = {"type": "string", "pattern": BAND_PATTERN}
_positive_int = {"type": "integer", "minimum": 1}
_fraction = {"type": "number", "minimum": 0}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "output_dir": {"type": "string"},
        "log_level": {"type": "string", "enum": ["DEBUG", "INFO", "WARNING", "ERROR"]},
        "trace": {
            "type": "object",
            "properties": {"n_samples": _positive_int, "dt_ms": {"type": "number", "exclusiveMinimum": 0}},
            "required": ["n_samples", "dt_ms"],
        },
        "bands": {
            "type": "object",
            "properties": {
                "seismic": _band,
                "broadband": _band,
                "low": _band,
                "mid": _band,
                "high": _band,
                "display": _band,
            },
            "required": ["seismic", "broadband", "low", "mid", "high", "display"],
        },
        "spectrogram": {
            "type": "object",
            "properties": {"window_len": _positive_int, "hop": _positive_int, "n_fft": _positive_int},
            "required": ["window_len", "hop", "n_fft"],
        },
        "synth": {
            "type": "object",
            "properties": {
                "n_pairs": _positive_int,
                "tie_mix": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 3, "maxItems": 3},
                "facies_mix": {"type": "array", "items": _fraction, "minItems": 3, "maxItems": 3},
                "noise_rms_fraction": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                "fair_noise_fraction": _fraction,
                "wavelet_peak_hz": {"type": "number", "exclusiveMinimum": 0},
                "description": {"type": "string"},
            },
        },
        "welltie": {
            "type": "object",
            "properties": {
                "max_lag_ms": _fraction,
                "good_threshold": {"type": "number", "minimum": -1, "maximum": 1},
                "fair_threshold": {"type": "number", "minimum": -1, "maximum": 1},
            },
        },
        "selection": {
            "type": "object",
            "properties": {
                "n_good": {"type": "integer", "minimum": 0},
                "n_fair": {"type": "integer", "minimum": 0},
                "n_poor": {"type": "integer", "minimum": 0},
                "exclude_poor": {"type": "boolean"},
                "exclude_wells": {"type": "array", "items": {"type": "string"}},
            },
        },
        "generator": {
            "type": "object",
            "properties": {
                "noise_dim": _positive_int,
                "encoder_channels": {"type": "array", "items": _positive_int, "minItems": 1},
                "decoder_channels": {"type": "array", "items": _positive_int, "minItems": 1},
            },
        },
        "discriminator": {
            "type": "object",
            "properties": {"channels": {"type": "array", "items": _positive_int, "minItems": 1}},
        },
        "train": {
            "type": "object",
            "properties": {
                "lambda_l1": _fraction,
                "lr": {"type": "number", "exclusiveMinimum": 0},
                "beta1": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "beta2": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "epochs": _positive_int,
                "batch_size": _positive_int,
                "checkpoint_every": _positive_int,
                "augment": {"type": "boolean"},
            },
        },
        "inference": {
            "type": "object",
            "properties": {
                "realizations": _positive_int,
                "bins": _positive_int,
                "histogram_samples": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "workers": _positive_int,
            },
        },
        "qc": {
            "type": "object",
            "properties": {"realizations": _positive_int, "max_checkpoints": _positive_int},
        },
        "study": {
            "type": "object",
            "properties": {
                "held_out_well": {"type": "string"},
                "realizations": _positive_int,
                "policies": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "n_good": {"type": "integer", "minimum": 0},
                            "n_fair": {"type": "integer", "minimum": 0},
                            "n_poor": {"type": "integer", "minimum": 0},
                            "exclude_poor": {"type": "boolean"},
                            "exclude_wells": {"type": "array", "items": {"type": "string"}},
                            "seed": {"type": "integer", "minimum": 0},
                        },
                    },
                },
            },
        },
    },
    "required": ["seed", "trace", "bands", "spectrogram"],
}

# Flat SynthConfig keys accepted at the top level of a config file, mapped to their sections
SYNTH_FILE_KEYS = {
    "n_pairs": "synth.n_pairs",
    "tie_mix": "synth.tie_mix",
    "facies_mix": "synth.facies_mix",
    "noise_rms_fraction": "synth.noise_rms_fraction",
    "fair_noise_fraction": "synth.fair_noise_fraction",
    "wavelet_peak_hz": "synth.wavelet_peak_hz",
    "description": "synth.description",
    "seismic_band": "bands.seismic",
    "broadband_band": "bands.broadband",
    "n_samples": "trace.n_samples",
    "dt_ms": "trace.dt_ms",
}
