"""Trapezoid (Ormsby-style) frequency bands"""

import re
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from src.util.errors import BandError

_BAND_RE = re.compile(r"^\s*([0-9.]+)\s*-\s*([0-9.]+)\s*-\s*([0-9.]+)\s*-\s*([0-9.]+)\s*$")

# Tolerance when comparing corners against Nyquist, in Hz
NYQUIST_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TrapezoidBand:
    """Four-corner amplitude band f1-f2-f3-f4 in Hz

    Gain is 0 below f1 and above f4, ramps linearly on [f1, f2] and [f3, f4], and is 1 on
    [f2, f3]. Equal corners give a step instead of a ramp.
    """

    f1: float
    f2: float
    f3: float
    f4: float

    def __post_init__(self):
        corners = (self.f1, self.f2, self.f3, self.f4)
        if not all(np.isfinite(c) for c in corners):
            raise BandError(f"Band corners must be finite: {corners}")
        if not (0 <= self.f1 <= self.f2 <= self.f3 <= self.f4):
            raise BandError(f"Band corners must satisfy 0 <= f1 <= f2 <= f3 <= f4, got {self}")
        if self.f4 <= 0:
            raise BandError(f"Band {self} passes no frequencies")
        for name in ("f1", "f2", "f3", "f4"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def __str__(self) -> str:
        return "-".join(_fmt(c) for c in self.corners)

    @property
    def corners(self) -> Tuple[float, float, float, float]:
        return (self.f1, self.f2, self.f3, self.f4)

    @classmethod
    def parse(cls, text: Union[str, "TrapezoidBand", tuple, list]) -> "TrapezoidBand":
        """Parse "f1-f2-f3-f4" text (e.g. "3-6-60-80")"""
        if isinstance(text, TrapezoidBand):
            return text
        if isinstance(text, (tuple, list)):
            if len(text) != 4:
                raise BandError(f"A band needs four corners, got {text!r}")
            return cls(*(float(c) for c in text))
        match = _BAND_RE.match(str(text))
        if not match:
            raise BandError(f"Cannot parse band {text!r}; expected f1-f2-f3-f4")
        return cls(*(float(g) for g in match.groups()))

    def check_nyquist(self, nyquist_hz: float) -> None:
        if self.f4 > nyquist_hz + NYQUIST_TOLERANCE:
            raise BandError(f"Band {self} exceeds Nyquist {nyquist_hz:g} Hz")

    def gain(self, freqs) -> np.ndarray:
        """Trapezoid gain at each frequency"""
        f = np.abs(np.asarray(freqs, dtype=np.float64))
        g = np.zeros_like(f)
        if self.f2 > self.f1:
            rising = (f >= self.f1) & (f < self.f2)
            g[rising] = (f[rising] - self.f1) / (self.f2 - self.f1)
        g[(f >= self.f2) & (f <= self.f3)] = 1.0
        if self.f4 > self.f3:
            falling = (f > self.f3) & (f < self.f4)
            g[falling] = (self.f4 - f[falling]) / (self.f4 - self.f3)
        return g

    def scaled(self, factor: float) -> "TrapezoidBand":
        return TrapezoidBand(*(c * factor for c in self.corners))

    def support_width(self) -> float:
        """Integral of the gain over frequency, in Hz"""
        return (self.f2 - self.f1) / 2 + (self.f3 - self.f2) + (self.f4 - self.f3) / 2


def _fmt(value: float) -> str:
    return f"{value:g}"


@dataclass(frozen=True)
class DisplayBand:
    """A requested band and the corners actually applied under a given Nyquist"""

    requested: TrapezoidBand
    applied: TrapezoidBand
    scale: float


def fit_band_to_nyquist(band: TrapezoidBand, nyquist_hz: float) -> DisplayBand:
    """Rescale a band by the Nyquist ratio when its top corner is above Nyquist

    Bands quoted for finely sampled data (e.g. 0-50-250-500 with a 500 Hz Nyquist) are
    compressed onto the available spectrum; bands that already fit are returned as-is.
    """
    if band.f4 <= nyquist_hz + NYQUIST_TOLERANCE:
        return DisplayBand(requested=band, applied=band, scale=1.0)
    scale = nyquist_hz / band.f4
    return DisplayBand(requested=band, applied=band.scaled(scale), scale=scale)
