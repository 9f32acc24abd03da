"""Well-tie scoring on amplitude and character"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from src.core.trace import TieClass, TracePair
from src.dsp.bands import TrapezoidBand
from src.dsp.filters import bandpass_samples
from src.dsp.stats import circular_correlations, rms
from src.util.errors import TieError


@dataclass(frozen=True)
class TieScore:
    amplitude_score: float
    character_score: float
    best_lag_ms: float


@dataclass(frozen=True)
class TieThresholds:
    good: float = 0.70
    fair: float = 0.40

    def __post_init__(self):
        if not -1.0 <= self.fair <= self.good <= 1.0:
            raise TieError(f"Tie thresholds must satisfy -1 <= fair <= good <= 1, got fair={self.fair}, good={self.good}")

    @classmethod
    def from_config(cls, section: Dict[str, Any]) -> "TieThresholds":
        return cls(good=float(section.get("good_threshold", 0.70)), fair=float(section.get("fair_threshold", 0.40)))


def tie_score(pair: TracePair, seismic_band: TrapezoidBand, max_lag_ms: float = 20.0) -> TieScore:
    """Score how well the band-limited log matches the seismic

    The log is band-limited to the seismic band and circularly shifted over every lag
    within max_lag_ms; the character score is the correlation with the largest
    magnitude, keeping its sign. A positive lag means the seismic is late relative to
    the log.
    """
    seismic = pair.seismic.samples
    log_band = bandpass_samples(pair.log.samples, pair.dt_ms, seismic_band)
    if rms(seismic) == 0 or rms(log_band) == 0:
        raise TieError(f"Well {pair.well_id}: cannot score a tie with a zero-energy trace")

    max_lag = int(np.floor(max_lag_ms / pair.dt_ms + 1e-9))
    lags, corrs = circular_correlations(seismic, log_band, max_lag, error=TieError)
    best = int(np.argmax(np.abs(corrs)))
    lag = int(lags[best])

    aligned = np.roll(log_band, lag)
    rms_a, rms_b = rms(seismic), rms(aligned)
    return TieScore(
        amplitude_score=float(min(rms_a, rms_b) / max(rms_a, rms_b)),
        character_score=float(corrs[best]),
        best_lag_ms=lag * pair.dt_ms,
    )


def classify_tie(score: TieScore, thresholds: TieThresholds = TieThresholds()) -> TieClass:
    if score.character_score >= thresholds.good:
        return TieClass.GOOD
    if score.character_score >= thresholds.fair:
        return TieClass.FAIR
    return TieClass.POOR
