import numpy as np
import pytest

from src.config.config import DEFAULT_CONFIG
from src.core.trace import TieClass, TraceKind, TracePair
from src.dsp.bands import TrapezoidBand
from src.synth.earth import FaciesKind, gen_earth_model, reflectivity_series
from src.synth.forward import (
    SynthConfig,
    degrade_tie,
    forward_model,
    peak_normalize,
    plan_degradation,
    synthetic_seismic,
    to_float32_grid,
)
from src.util.errors import BandError, ConfigError, DataError


@pytest.fixture
def reflectivity():
    model = gen_earth_model(FaciesKind.BLOCKY_SAND, seed=21)
    return reflectivity_series(model, 2.0, 512, trace_id="W01/reflectivity")


@pytest.fixture
def good_pair(reflectivity, synth_config):
    return forward_model(reflectivity, synth_config, seed=5, well_id="W01")


def test_forward_model_pair(good_pair):
    """Test ids, kinds, normalization and float32 grid of a fresh pair"""
    assert good_pair.tie_class == TieClass.GOOD
    assert good_pair.seismic.id == "W01/seismic"
    assert good_pair.log.id == "W01/log"
    assert good_pair.log.kind == TraceKind.LOG
    assert len(good_pair) == 512
    for trace in (good_pair.seismic, good_pair.log):
        assert np.max(np.abs(trace.samples)) == 1.0
        np.testing.assert_array_equal(trace.samples, trace.samples.astype(np.float32))


def test_forward_model_without_noise_is_the_filtered_convolution(reflectivity):
    cfg = SynthConfig(noise_rms_fraction=0.0)
    pair = forward_model(reflectivity, cfg, seed=1)
    expected = to_float32_grid(peak_normalize(synthetic_seismic(reflectivity.samples, 2.0, 25.0, cfg.seismic_band)))
    np.testing.assert_array_equal(pair.seismic.samples, expected)
    assert pair.well_id == "W01/reflectivity"


def test_forward_model_is_seeded(reflectivity, synth_config):
    a = forward_model(reflectivity, synth_config, seed=5)
    assert a == forward_model(reflectivity, synth_config, seed=5)
    assert a.seismic != forward_model(reflectivity, synth_config, seed=6).seismic


def test_peak_normalize_leaves_zero_alone():
    zeros = np.zeros(4)
    assert peak_normalize(zeros) is zeros
    np.testing.assert_array_equal(peak_normalize(np.array([1.0, -4.0])), [0.25, -1.0])


def test_degradation_plans():
    """Test shift ranges and that the flipped half carries most of the energy"""
    samples = np.random.default_rng(0).standard_normal(512)
    assert plan_degradation(TieClass.GOOD, 1, samples, 2.0).shift_samples == 0
    for seed in range(30):
        fair = plan_degradation(TieClass.FAIR, seed, samples, 2.0)
        assert 3 <= fair.shift_samples <= 6
        assert 6.0 <= fair.shift_ms(2.0) <= 12.0

        poor = plan_degradation(TieClass.POOR, seed, samples, 2.0)
        assert 8 <= poor.shift_samples <= 15
        assert poor.flip_stop - poor.flip_start == 256
        flipped = np.arange(poor.flip_start, poor.flip_stop) % 512
        assert np.sum(samples[flipped] ** 2) >= 0.5 * np.sum(samples**2)


def test_poor_degradation_flips_and_shifts(good_pair, synth_config):
    plan = plan_degradation(TieClass.POOR, 9, good_pair.seismic.samples, 2.0)
    poor = degrade_tie(good_pair, TieClass.POOR, seed=9, cfg=synth_config)

    expected = np.array(good_pair.seismic.samples)
    flipped = np.arange(plan.flip_start, plan.flip_stop) % 512
    expected[flipped] = -expected[flipped]
    np.testing.assert_array_equal(poor.seismic.samples, np.roll(expected, plan.shift_samples))
    assert poor.tie_class == TieClass.POOR
    assert poor.log == good_pair.log


def test_fair_degradation(good_pair, synth_config):
    fair = degrade_tie(good_pair, TieClass.FAIR, seed=4, cfg=synth_config)
    assert fair.tie_class == TieClass.FAIR
    assert fair.log == good_pair.log
    assert np.max(np.abs(fair.seismic.samples)) == 1.0
    assert fair.seismic != good_pair.seismic
    assert fair == degrade_tie(good_pair, TieClass.FAIR, seed=4, cfg=synth_config)
    # without cfg the defaults for the pair's grid are used
    assert degrade_tie(good_pair, TieClass.FAIR, seed=4) == fair


def test_good_degradation_is_identity(good_pair):
    assert degrade_tie(good_pair, TieClass.GOOD, seed=1) == good_pair


@pytest.mark.parametrize("target", list(TieClass))
def test_degrading_a_non_good_pair_is_an_error(good_pair, synth_config, target):
    """Test that only Good pairs can be degraded, whatever the target class"""
    poor = degrade_tie(good_pair, TieClass.POOR, seed=9, cfg=synth_config)
    with pytest.raises(DataError, match="poor"):
        degrade_tie(poor, target, seed=2, cfg=synth_config)

    unclassified = TracePair(well_id="W01", seismic=good_pair.seismic, log=good_pair.log)
    with pytest.raises(DataError, match="unclassified"):
        degrade_tie(unclassified, target, seed=2, cfg=synth_config)


def test_synth_config_defaults_match_configuration():
    cfg = SynthConfig.from_config(DEFAULT_CONFIG)
    assert cfg.n_pairs == 12
    assert cfg.tie_mix == (9, 2, 1)
    assert cfg.seismic_band == TrapezoidBand(3, 6, 60, 80)
    assert cfg.broadband_band == TrapezoidBand(0, 1, 160, 200)
    assert cfg.to_dict()["seismic_band"] == "3-6-60-80"


@pytest.mark.parametrize(
    "changes",
    [
        {"n_pairs": 0},
        {"tie_mix": (9, 2, 2)},
        {"tie_mix": (13, -1, 0)},
        {"facies_mix": (0.5, 0.5, 0.5)},
        {"noise_rms_fraction": 1.0},
        {"fair_noise_fraction": -0.1},
    ],
)
def test_synth_config_validation(changes):
    with pytest.raises(ConfigError):
        SynthConfig(**changes)


def test_synth_config_rejects_bands_above_nyquist():
    with pytest.raises(BandError):
        SynthConfig(broadband_band="0-50-250-500")
