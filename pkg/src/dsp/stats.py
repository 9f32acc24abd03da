"""Trace statistics shared by well-tie scoring and QC"""

from typing import Type

import numpy as np

from src.util.errors import BandextError, MetricError

# Below this standard deviation a signal is treated as constant
ZERO_VARIANCE = 1e-300


def pearson(a, b, error: Type[BandextError] = MetricError) -> float:
    """Zero-lag Pearson correlation of two equal-length sequences"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise error(f"Cannot correlate sequences of shape {a.shape} and {b.shape}")
    da = a - a.mean()
    db = b - b.mean()
    na = np.sqrt(np.dot(da, da))
    nb = np.sqrt(np.dot(db, db))
    if na <= ZERO_VARIANCE or nb <= ZERO_VARIANCE:
        raise error("Correlation undefined for a zero-variance signal")
    return float(np.clip(np.dot(da, db) / (na * nb), -1.0, 1.0))


def rms(samples) -> float:
    samples = np.asarray(samples, dtype=np.float64)
    return float(np.sqrt(np.mean(samples**2)))


def circular_correlations(a, b, max_lag: int, error: Type[BandextError] = MetricError):
    """Pearson correlation of a against b rolled by each lag in [-max_lag, max_lag]

    Returns (lags, correlations) with lags ordered by |lag|, negative first, so that
    argmax over ties prefers the smallest shift.
    """
    lags = [0]
    for k in range(1, max_lag + 1):
        lags.extend((-k, k))
    corrs = np.array([pearson(a, np.roll(b, lag), error=error) for lag in lags])
    return np.array(lags), corrs
