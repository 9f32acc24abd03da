import numpy as np
from scipy import signal

from src.core.trace import Trace
from src.dsp.bands import TrapezoidBand
from src.dsp.filters import bandpass_samples
from src.util.errors import ResampleError

# Anti-alias ramp starts at this fraction of the new Nyquist
ANTI_ALIAS_START = 0.8


def resample_log(log: Trace, dt_target_ms: float, n_target: int) -> Trace:
    """Put a finely sampled log onto a coarser grid of n_target samples

    The log is linearly detrended, low-passed below the new Nyquist, re-trended and
    linearly interpolated onto t0 + k * dt_target. Targets past the end of the log take
    the last value.
    """
    if n_target < 1:
        raise ResampleError(f"Target length must be >= 1, got {n_target}")
    if dt_target_ms < log.dt_ms:
        raise ResampleError(f"Cannot upsample log from {log.dt_ms} ms to {dt_target_ms} ms")

    if dt_target_ms == log.dt_ms and n_target == len(log):
        return log.with_samples(np.array(log.samples))

    samples = log.samples
    if dt_target_ms > log.dt_ms and len(log) > 2:
        new_nyquist = 500.0 / dt_target_ms
        band = TrapezoidBand(0.0, 0.0, ANTI_ALIAS_START * new_nyquist, new_nyquist)
        residual = signal.detrend(samples, type="linear")
        trend = samples - residual
        samples = trend + bandpass_samples(residual, log.dt_ms, band)

    target_times = log.t0_ms + dt_target_ms * np.arange(n_target)
    resampled = np.interp(target_times, log.times_ms, samples)
    return log.with_samples(resampled, dt_ms=dt_target_ms)
