import copy
import json
import os

import numpy as np
import pytest

from src.cgan.networks import DiscriminatorSpec, GeneratorSpec
from src.cgan.trainer import TrainConfig
from src.config.config import DEFAULT_CONFIG, Config
from src.core.trace import Trace, TraceKind
from src.stages.registry import StageRegistry
from src.synth.dataset import gen_dataset
from src.synth.forward import SynthConfig
from tests.helpers.stubs import SMALL_DISCRIMINATOR, SMALL_GENERATOR

BANDEXT_ENV = ("BANDEXT_CONFIG", "BANDEXT_SEED", "BANDEXT_OUT", "BANDEXT_LOG_LEVEL", "BANDEXT_WORKERS", "BANDEXT_REALIZATIONS")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("BANDEXT_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set BANDEXT_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def setup_test_env(monkeypatch):
    """Reset singletons and keep the caller's environment out of the configuration"""
    for var in BANDEXT_ENV:
        monkeypatch.delenv(var, raising=False)
    Config.reset()
    StageRegistry._instance = None
    StageRegistry._initialized = False

    yield

    Config.reset()
    StageRegistry._instance = None
    StageRegistry._initialized = False


@pytest.fixture
def sine():
    """Factory for unit sinusoid traces"""

    def make(freq_hz=30.0, n=512, dt_ms=2.0, kind=TraceKind.SEISMIC, trace_id="sine", phase=0.0):
        t = np.arange(n) * dt_ms / 1000.0
        return Trace(id=trace_id, kind=kind, dt_ms=dt_ms, samples=np.sin(2 * np.pi * freq_hz * t + phase))

    return make


@pytest.fixture
def noise_trace():
    def make(seed=0, n=512, dt_ms=2.0, kind=TraceKind.SEISMIC, trace_id="noise"):
        return Trace(id=trace_id, kind=kind, dt_ms=dt_ms, samples=np.random.default_rng(seed).standard_normal(n))

    return make


@pytest.fixture
def synth_config():
    return SynthConfig(seed=7)


@pytest.fixture
def dataset(tmp_path, synth_config):
    """Default twelve-pair dataset on disk: (directory, manifest, pairs)"""
    directory = tmp_path / "data"
    manifest, pairs = gen_dataset(synth_config, directory)
    return directory, manifest, pairs


@pytest.fixture
def tiny_train_config():
    return TrainConfig(
        epochs=2,
        batch_size=2,
        checkpoint_every=1,
        augment=False,
        seed=11,
        generator=GeneratorSpec.from_config(SMALL_GENERATOR),
        discriminator=DiscriminatorSpec.from_config(SMALL_DISCRIMINATOR),
    )


@pytest.fixture
def small_config():
    """Full configuration dict with small networks and short runs"""
    config = copy.deepcopy(DEFAULT_CONFIG)
    config["seed"] = 5
    config["generator"] = copy.deepcopy(SMALL_GENERATOR)
    config["discriminator"] = copy.deepcopy(SMALL_DISCRIMINATOR)
    config["train"].update(epochs=2, checkpoint_every=1, batch_size=2, augment=False)
    config["inference"].update(realizations=3, histogram_samples=[0, 256])
    config["qc"].update(realizations=2, max_checkpoints=2)
    config["study"].update(realizations=2)
    return config


@pytest.fixture
def small_config_file(tmp_path, small_config):
    path = tmp_path / "bandext.json"
    path.write_text(json.dumps(small_config))
    return path
