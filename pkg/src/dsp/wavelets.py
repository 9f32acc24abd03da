import numpy as np

from src.core.trace import Trace, TraceKind
from src.util.errors import BandError


def ricker(f_peak: float, dt_ms: float, half_len: int) -> Trace:
    """Zero-phase Ricker wavelet of 2*half_len+1 samples centred on t=0

    w(t) = (1 - 2 pi^2 f^2 t^2) exp(-pi^2 f^2 t^2)
    """
    nyquist = 500.0 / dt_ms
    if not 0 < f_peak < nyquist:
        raise BandError(f"Ricker peak {f_peak:g} Hz must lie in (0, {nyquist:g}) Hz")
    if half_len < 1:
        raise BandError(f"Ricker half length must be >= 1 sample, got {half_len}")

    t = np.arange(-half_len, half_len + 1) * (dt_ms / 1000.0)
    arg = (np.pi * f_peak * t) ** 2
    w = (1.0 - 2.0 * arg) * np.exp(-arg)
    return Trace(id=f"ricker_{f_peak:g}hz", kind=TraceKind.SEISMIC, dt_ms=dt_ms, t0_ms=-half_len * dt_ms, samples=w)
