"""Spectrograms and amplitude spectra"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import fft, signal

from src.core.trace import Trace, TraceKind
from src.util.errors import ReconstructionError, SpectrogramError


@dataclass(frozen=True)
class SpectrogramGeometry:
    window_len: int = 64
    hop: int = 16
    n_fft: int = 64

    def __post_init__(self):
        if not (1 <= self.hop <= self.window_len <= self.n_fft):
            raise SpectrogramError(
                f"Spectrogram geometry requires 1 <= hop <= window_len <= n_fft, "
                f"got hop={self.hop}, window_len={self.window_len}, n_fft={self.n_fft}"
            )

    @classmethod
    def from_config(cls, section: Dict[str, Any]) -> "SpectrogramGeometry":
        return cls(window_len=int(section["window_len"]), hop=int(section["hop"]), n_fft=int(section["n_fft"]))

    @property
    def n_freqs(self) -> int:
        return self.n_fft // 2 + 1

    def n_frames(self, n_samples: int) -> int:
        """Frame count for a trace: one frame per hop of signal"""
        return math.ceil(n_samples / self.hop)

    def padding(self, n_samples: int, n_frames: Optional[int] = None):
        """(pad_left, pad_right) so that exactly n_frames frames fit"""
        frames = self.n_frames(n_samples) if n_frames is None else n_frames
        padded = (frames - 1) * self.hop + self.window_len
        total = padded - n_samples
        if total < 0:
            raise SpectrogramError(f"{frames} frames of hop {self.hop} cannot cover {n_samples} samples")
        return total // 2, total - total // 2

    def window(self) -> np.ndarray:
        return hann_window(self.window_len)


def hann_window(window_len: int) -> np.ndarray:
    """Periodic Hann window"""
    return signal.get_window("hann", window_len, fftbins=True).astype(np.float64)


@dataclass(frozen=True, eq=False)
class Spectrogram:
    """Complex STFT held as real and imaginary planes of shape (F, T)"""

    real_plane: np.ndarray
    imag_plane: np.ndarray
    window_len: int
    hop: int
    n_fft: int
    original_len: int
    dt_ms: float
    pad_left: int
    pad_right: int

    def __post_init__(self):
        if self.real_plane.shape != self.imag_plane.shape:
            raise SpectrogramError("Real and imaginary planes differ in shape")
        n_freqs, n_frames = self.real_plane.shape
        if n_freqs != self.n_fft // 2 + 1:
            raise SpectrogramError(f"Expected {self.n_fft // 2 + 1} frequency rows, got {n_freqs}")
        padded = self.original_len + self.pad_left + self.pad_right
        if n_frames != (padded - self.window_len) // self.hop + 1:
            raise SpectrogramError(f"Frame count {n_frames} does not match padded length {padded}")

    @property
    def shape(self):
        return self.real_plane.shape

    @property
    def geometry(self) -> SpectrogramGeometry:
        return SpectrogramGeometry(window_len=self.window_len, hop=self.hop, n_fft=self.n_fft)

    @property
    def freqs_hz(self) -> np.ndarray:
        return fft.rfftfreq(self.n_fft, d=self.dt_ms / 1000.0)

    def complex(self) -> np.ndarray:
        return self.real_plane + 1j * self.imag_plane

    def with_planes(self, real_plane: np.ndarray, imag_plane: np.ndarray) -> "Spectrogram":
        return Spectrogram(
            real_plane=np.asarray(real_plane, dtype=np.float64),
            imag_plane=np.asarray(imag_plane, dtype=np.float64),
            window_len=self.window_len,
            hop=self.hop,
            n_fft=self.n_fft,
            original_len=self.original_len,
            dt_ms=self.dt_ms,
            pad_left=self.pad_left,
            pad_right=self.pad_right,
        )


def stft(trace: Trace, window_len: int = 64, hop: int = 16, n_fft: int = 64, n_frames: Optional[int] = None) -> Spectrogram:
    """Hann-windowed short-time Fourier transform

    The trace is zero-padded symmetrically so that one frame falls on every hop of
    signal (32 frames for 512 samples at hop 16).
    """
    geometry = SpectrogramGeometry(window_len=window_len, hop=hop, n_fft=n_fft)
    samples = trace.samples
    pad_left, pad_right = geometry.padding(len(samples), n_frames)
    padded = np.pad(samples, (pad_left, pad_right))
    if padded.size < window_len:
        raise SpectrogramError(f"Padded trace ({padded.size}) shorter than window ({window_len})")

    frames = sliding_window_view(padded, window_len)[::hop] * geometry.window()
    spectrum = fft.rfft(frames, n=n_fft, axis=1).T
    return Spectrogram(
        real_plane=np.ascontiguousarray(spectrum.real),
        imag_plane=np.ascontiguousarray(spectrum.imag),
        window_len=window_len,
        hop=hop,
        n_fft=n_fft,
        original_len=len(samples),
        dt_ms=trace.dt_ms,
        pad_left=pad_left,
        pad_right=pad_right,
    )


def window_energy(window_len: int, hop: int, n_frames: int) -> np.ndarray:
    """Overlap-added squared window over the padded axis"""
    win_sq = hann_window(window_len) ** 2
    total = np.zeros((n_frames - 1) * hop + window_len)
    for t in range(n_frames):
        total[t * hop : t * hop + window_len] += win_sq
    return total


def istft(spec: Spectrogram, trace_id: str = "istft", kind: TraceKind = TraceKind.BROADBAND) -> Trace:
    """Least-squares overlap-add inverse of stft, cropped to the original length"""
    n_freqs, n_frames = spec.shape
    window = hann_window(spec.window_len)
    frames = fft.irfft(spec.complex().T, n=spec.n_fft, axis=1)[:, : spec.window_len] * window

    padded_len = (n_frames - 1) * spec.hop + spec.window_len
    acc = np.zeros(padded_len)
    for t in range(n_frames):
        acc[t * spec.hop : t * spec.hop + spec.window_len] += frames[t]
    energy = window_energy(spec.window_len, spec.hop, n_frames)

    region = slice(spec.pad_left, spec.pad_left + spec.original_len)
    covered = energy[region]
    if np.any(covered <= 1e-12):
        first = int(np.argmax(covered <= 1e-12))
        raise ReconstructionError(f"Zero window energy at sample {first}; frames do not cover the trace")
    samples = acc[region] / covered
    return Trace(id=trace_id, kind=kind, dt_ms=spec.dt_ms, samples=samples)


@dataclass(frozen=True, eq=False)
class Spectrum:
    freqs: np.ndarray
    amplitude: np.ndarray

    def __len__(self) -> int:
        return int(self.freqs.size)


def amplitude_spectrum(trace: Trace) -> Spectrum:
    """Magnitude of the real FFT, frequencies from 0 to Nyquist"""
    freqs = fft.rfftfreq(len(trace), d=trace.dt_ms / 1000.0)
    amplitude = np.abs(fft.rfft(trace.samples))
    return Spectrum(freqs=freqs, amplitude=amplitude)
