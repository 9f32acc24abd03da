import numpy as np
import pytest

from src.core.trace import TieClass, Trace, TraceKind, TracePair
from src.dsp.bands import TrapezoidBand
from src.dsp.filters import bandpass_samples
from src.welltie.scoring import TieScore, TieThresholds, classify_tie, tie_score
from src.util.errors import TieError

SEISMIC_BAND = TrapezoidBand(3, 6, 60, 80)


def _pair(seismic, log, well_id="W01"):
    return TracePair(
        well_id=well_id,
        seismic=Trace(id=f"{well_id}/seismic", kind=TraceKind.SEISMIC, dt_ms=2.0, samples=seismic),
        log=Trace(id=f"{well_id}/log", kind=TraceKind.LOG, dt_ms=2.0, samples=log),
    )


@pytest.fixture
def log_samples():
    return np.random.default_rng(12).standard_normal(512)


def test_perfect_tie(log_samples):
    """Test a seismic trace equal to the band-limited log"""
    seismic = bandpass_samples(log_samples, 2.0, SEISMIC_BAND)
    score = tie_score(_pair(seismic, log_samples), SEISMIC_BAND)
    assert score.character_score == pytest.approx(1.0, abs=1e-9)
    assert score.amplitude_score == pytest.approx(1.0, abs=1e-9)
    assert score.best_lag_ms == 0.0
    assert classify_tie(score) == TieClass.GOOD


def test_late_seismic_gives_positive_lag(log_samples):
    seismic = np.roll(bandpass_samples(log_samples, 2.0, SEISMIC_BAND), 5)
    score = tie_score(_pair(seismic, log_samples), SEISMIC_BAND)
    assert score.best_lag_ms == 10.0
    assert score.character_score == pytest.approx(1.0, abs=1e-9)

    early = tie_score(_pair(np.roll(seismic, -8), log_samples), SEISMIC_BAND)
    assert early.best_lag_ms == -6.0


def test_shift_beyond_the_search_window_is_not_found(log_samples):
    seismic = np.roll(bandpass_samples(log_samples, 2.0, SEISMIC_BAND), 15)
    score = tie_score(_pair(seismic, log_samples), SEISMIC_BAND, max_lag_ms=20.0)
    assert abs(score.best_lag_ms) <= 20.0
    assert score.character_score < 0.5


def test_amplitude_score_is_an_rms_ratio(log_samples):
    seismic = 0.5 * bandpass_samples(log_samples, 2.0, SEISMIC_BAND)
    score = tie_score(_pair(seismic, log_samples), SEISMIC_BAND)
    assert score.amplitude_score == pytest.approx(0.5)
    assert score.character_score == pytest.approx(1.0, abs=1e-9)


def test_reversed_polarity_keeps_its_sign(log_samples):
    seismic = -bandpass_samples(log_samples, 2.0, SEISMIC_BAND)
    score = tie_score(_pair(seismic, log_samples), SEISMIC_BAND)
    assert score.character_score == pytest.approx(-1.0, abs=1e-9)
    assert classify_tie(score) == TieClass.POOR


def test_zero_energy_is_an_error(log_samples):
    with pytest.raises(TieError):
        tie_score(_pair(np.zeros(512), log_samples), SEISMIC_BAND)
    with pytest.raises(TieError):
        tie_score(_pair(log_samples, np.zeros(512)), SEISMIC_BAND)


@pytest.mark.parametrize(
    "character,expected",
    [
        (0.95, TieClass.GOOD),
        (0.70, TieClass.GOOD),
        (0.69, TieClass.FAIR),
        (0.40, TieClass.FAIR),
        (0.39, TieClass.POOR),
        (-0.9, TieClass.POOR),
    ],
)
def test_classify_thresholds(character, expected):
    assert classify_tie(TieScore(amplitude_score=1.0, character_score=character, best_lag_ms=0.0)) == expected


def test_custom_thresholds():
    thresholds = TieThresholds.from_config({"good_threshold": 0.9, "fair_threshold": 0.2})
    assert classify_tie(TieScore(1.0, 0.8, 0.0), thresholds) == TieClass.FAIR
    with pytest.raises(TieError):
        TieThresholds(good=0.3, fair=0.5)


def test_degraded_ties_score_below_good_ones(dataset):
    """Test that generated Poor pairs score lower than the Good ones on average"""
    _, manifest, pairs = dataset
    scores = {p.well_id: tie_score(p, SEISMIC_BAND).character_score for p in pairs}
    good = [scores[p.well_id] for p in pairs if p.tie_class == TieClass.GOOD]
    poor = [scores[p.well_id] for p in pairs if p.tie_class == TieClass.POOR]
    assert len(good) == 9 and len(poor) == 1
    assert np.mean(good) > poor[0]
