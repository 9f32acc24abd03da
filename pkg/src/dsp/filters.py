"""Zero-phase frequency-domain filtering"""

import numpy as np
from scipy import fft

from src.core.trace import Trace
from src.dsp.bands import TrapezoidBand


def bandpass_samples(samples: np.ndarray, dt_ms: float, band: TrapezoidBand) -> np.ndarray:
    """Apply a trapezoid gain to the real spectrum of samples (zero phase)"""
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.shape[-1]
    band.check_nyquist(500.0 / dt_ms)
    freqs = fft.rfftfreq(n, d=dt_ms / 1000.0)
    spectrum = fft.rfft(samples, axis=-1)
    spectrum *= band.gain(freqs)
    return fft.irfft(spectrum, n=n, axis=-1)


def bandpass_trapezoid(trace: Trace, band: TrapezoidBand) -> Trace:
    """Zero-phase trapezoid band-pass; output has the input's length and metadata"""
    return trace.with_samples(bandpass_samples(trace.samples, trace.dt_ms, band))
