"""Spectral, wavelet and correlation metrics comparing generated and input traces"""

import enum
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy import fft

from src.core.trace import Trace
from src.dsp.bands import DisplayBand, TrapezoidBand, fit_band_to_nyquist
from src.dsp.filters import bandpass_trapezoid
from src.dsp.spectral import amplitude_spectrum
from src.dsp.stats import pearson
from src.util.errors import MetricError


@dataclass(frozen=True)
class QcBands:
    seismic: TrapezoidBand = TrapezoidBand(3, 6, 60, 80)
    low: TrapezoidBand = TrapezoidBand(0, 0, 8, 16)
    mid: TrapezoidBand = TrapezoidBand(3, 6, 60, 80)
    high: TrapezoidBand = TrapezoidBand(60, 80, 120, 160)
    display: TrapezoidBand = TrapezoidBand(0, 50, 250, 500)

    @classmethod
    def from_config(cls, section: Dict[str, Any]) -> "QcBands":
        defaults = cls()
        names = ("seismic", "low", "mid", "high", "display")
        return cls(**{name: TrapezoidBand.parse(section.get(name, getattr(defaults, name))) for name in names})

    def spectral(self) -> Dict[str, TrapezoidBand]:
        return {"low": self.low, "mid": self.mid, "high": self.high}

    def display_for(self, nyquist_hz: float) -> DisplayBand:
        return fit_band_to_nyquist(self.display, nyquist_hz)


@dataclass(frozen=True)
class SpectrumComparison:
    bands: Dict[str, TrapezoidBand]
    original_energy: Dict[str, float]
    generated_energy: Dict[str, float]
    ratios: Dict[str, Optional[float]]


def _check_aligned(a: Trace, b: Trace) -> None:
    if a.dt_ms != b.dt_ms or len(a) != len(b):
        raise MetricError(f"Traces {a.id} and {b.id} are not aligned ({len(a)} @ {a.dt_ms} ms vs {len(b)} @ {b.dt_ms} ms)")


def band_energy(trace: Trace, band: TrapezoidBand) -> float:
    """Trapezoid-weighted sum of squared amplitude spectrum"""
    spectrum = amplitude_spectrum(trace)
    return float(np.sum(band.gain(spectrum.freqs) * spectrum.amplitude**2))


def spectrum_report(
    original: Trace,
    generated: Trace,
    low: TrapezoidBand = TrapezoidBand(0, 0, 8, 16),
    high: TrapezoidBand = TrapezoidBand(60, 80, 120, 160),
    mid: Optional[TrapezoidBand] = TrapezoidBand(3, 6, 60, 80),
) -> SpectrumComparison:
    """Band energies of both traces and their generated/original ratios

    A band with no original energy gets ratio None rather than infinity.
    """
    _check_aligned(original, generated)
    bands = {"low": low}
    if mid is not None:
        bands["mid"] = mid
    bands["high"] = high

    original_energy, generated_energy, ratios = {}, {}, {}
    for name, band in bands.items():
        e_orig = band_energy(original, band)
        e_gen = band_energy(generated, band)
        original_energy[name] = e_orig
        generated_energy[name] = e_gen
        ratios[name] = e_gen / e_orig if e_orig > 0 else None
    return SpectrumComparison(bands=bands, original_energy=original_energy, generated_energy=generated_energy, ratios=ratios)


class AutocorrelationMethod(str, enum.Enum):
    DIRECT = "direct"
    SPECTRAL = "spectral"


def autocorrelation(samples: np.ndarray, method: AutocorrelationMethod = AutocorrelationMethod.DIRECT) -> np.ndarray:
    """Full autocorrelation for lags -(n-1)..(n-1)"""
    x = np.asarray(samples, dtype=np.float64)
    n = x.size
    if AutocorrelationMethod(method) == AutocorrelationMethod.DIRECT:
        return np.correlate(x, x, mode="full")
    size = fft.next_fast_len(2 * n - 1, real=True)
    spectrum = fft.rfft(x, n=size)
    circular = fft.irfft(spectrum * np.conj(spectrum), n=size)
    return np.concatenate([circular[size - (n - 1) :], circular[:n]])


def sidelobe_metric(trace: Trace, method: AutocorrelationMethod = AutocorrelationMethod.DIRECT) -> float:
    """Share of autocorrelation energy outside the main lobe

    The main lobe ends at the first positive lag where the normalized autocorrelation
    drops to zero or below; energy at lags beyond it counts as sidelobe. Lower is
    better and an impulse scores 0.
    """
    if not np.any(trace.samples):
        raise MetricError(f"Sidelobe metric undefined for zero trace {trace.id}")
    n = len(trace)
    a = autocorrelation(trace.samples, method)
    a = a / a[n - 1]
    positive = a[n - 1 :]
    crossings = np.flatnonzero(positive <= 0)
    tau0 = int(crossings[0]) if crossings.size else n
    lags = np.abs(np.arange(-(n - 1), n))
    energy = a**2
    return float(np.clip(energy[lags > tau0].sum() / energy.sum(), 0.0, 1.0))


def band_consistency(
    generated: Trace, original_seismic: Trace, seismic_band: TrapezoidBand = TrapezoidBand(3, 6, 60, 80)
) -> float:
    """Correlation of the generated trace, filtered back to the seismic band, with the input"""
    _check_aligned(generated, original_seismic)
    return pearson(bandpass_trapezoid(generated, seismic_band).samples, original_seismic.samples)


def blind_validation(generated: Trace, log: Trace) -> float:
    """Zero-lag correlation between generated broadband and the true log"""
    _check_aligned(generated, log)
    return pearson(generated.samples, log.samples)


def filtered_correlation(generated: Trace, log: Trace, band: Optional[TrapezoidBand]) -> Optional[float]:
    """Correlation after applying the same filter to both traces; None if degenerate"""
    _check_aligned(generated, log)
    if band is not None:
        generated = bandpass_trapezoid(generated, band)
        log = bandpass_trapezoid(log, band)
    try:
        return pearson(generated.samples, log.samples)
    except MetricError:
        return None
