"""Traces to network images and back

The condition image comes from the seismic divided by its RMS. The target image comes
from the log divided by its RMS inside the seismic band, floored at the broadband RMS
over MAX_TARGET_CREST so a log with little in-band energy cannot blow up. Both are
transformed by stft, stripped of their Nyquist row and divided by IMAGE_HEADROOM times
the window sum, giving (2, 32, 32) real/imaginary images for 512-sample traces with the
default geometry whose pixels stay well inside the range of tanh.

The inverse path restores the image scale, appends a zero Nyquist row, applies istft
and multiplies by the seismic RMS, so a generated trace carries the amplitude of the
seismic inside the seismic band.
"""

from typing import Optional, Tuple

import numpy as np

from src.core.trace import Trace, TraceKind, TracePair
from src.dsp.bands import TrapezoidBand
from src.dsp.filters import bandpass_trapezoid
from src.dsp.spectral import Spectrogram, SpectrogramGeometry, istft, stft
from src.dsp.stats import rms
from src.util.errors import GeometryError

IMAGE_HEADROOM = 2.0
MAX_TARGET_CREST = 2.5
DEFAULT_TARGET_BAND = TrapezoidBand(3, 6, 60, 80)


def condition_scale(trace: Trace) -> float:
    """RMS of the trace; 1 for an all-zero trace"""
    level = rms(trace.samples)
    return level if level > 0 else 1.0


def target_scale(trace: Trace, band: TrapezoidBand = DEFAULT_TARGET_BAND) -> float:
    """In-band RMS of a broadband trace, floored at rms / MAX_TARGET_CREST"""
    level = max(rms(bandpass_trapezoid(trace, band).samples), rms(trace.samples) / MAX_TARGET_CREST)
    return level if level > 0 else 1.0


def image_scale(geometry: SpectrogramGeometry) -> float:
    return IMAGE_HEADROOM * float(geometry.window().sum())


def trace_to_image(
    trace: Trace, geometry: SpectrogramGeometry, scale: Optional[float] = None
) -> Tuple[np.ndarray, Spectrogram, float]:
    """(image, spectrogram template, amplitude scale) for one trace

    The trace is divided by scale, its RMS unless one is given.
    """
    scale = condition_scale(trace) if scale is None else float(scale)
    normalized = trace.with_samples(trace.samples / scale)
    spec = stft(normalized, geometry.window_len, geometry.hop, geometry.n_fft)
    factor = image_scale(geometry)
    image = np.stack([spec.real_plane[:-1], spec.imag_plane[:-1]]) / factor
    return image, spec, scale


def image_to_trace(
    image: np.ndarray,
    template: Spectrogram,
    scale: float = 1.0,
    trace_id: str = "generated",
    kind: TraceKind = TraceKind.BROADBAND,
) -> Trace:
    """Invert trace_to_image for a network output image"""
    factor = image_scale(template.geometry)
    n_freqs, n_frames = template.shape
    if image.shape != (2, n_freqs - 1, n_frames):
        raise GeometryError(f"Image shape {image.shape} does not match spectrogram {(2, n_freqs - 1, n_frames)}")
    zero_row = np.zeros((1, n_frames))
    real_plane = np.vstack([image[0] * factor, zero_row])
    imag_plane = np.vstack([image[1] * factor, zero_row])
    trace = istft(template.with_planes(real_plane, imag_plane), trace_id=trace_id, kind=kind)
    return trace.with_samples(trace.samples * scale)


def pair_to_images(
    pair: TracePair, geometry: SpectrogramGeometry, band: TrapezoidBand = DEFAULT_TARGET_BAND
) -> Tuple[np.ndarray, np.ndarray]:
    """Condition image from the seismic, target image from the log scaled to unit RMS in band"""
    x, _, _ = trace_to_image(pair.seismic, geometry)
    y, _, _ = trace_to_image(pair.log, geometry, target_scale(pair.log, band))
    return x, y


def check_image_geometry(n_samples: int, geometry: SpectrogramGeometry, image_size: int) -> None:
    """Raise GeometryError unless traces of n_samples map to square image_size images"""
    frames = geometry.n_frames(n_samples)
    rows = geometry.n_freqs - 1
    if frames != image_size or rows != image_size:
        raise GeometryError(
            f"{n_samples}-sample traces give {rows} x {frames} images; the networks expect {image_size} x {image_size}"
        )
