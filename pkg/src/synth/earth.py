"""Layered earth models and their reflectivity"""

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.core.trace import Trace, TraceKind
from src.util.errors import ModelError

DEFAULT_DURATION_MS = 1024.0


class FaciesKind(str, enum.Enum):
    BLOCKY_SAND = "blocky_sand"
    THIN_BEDS = "thin_beds"
    SHALE = "shale"


# Layer thickness range per facies, ms
THICKNESS_MS = {
    FaciesKind.BLOCKY_SAND: (40.0, 150.0),
    FaciesKind.THIN_BEDS: (4.0, 16.0),
    FaciesKind.SHALE: (20.0, 60.0),
}

SAND_IMPEDANCE = (7000.0, 9500.0)
SHALE_IMPEDANCE = (5000.0, 6500.0)
# Shale-on-shale sequences vary by at most 5% around this impedance
BACKGROUND_SHALE = 6000.0
SHALE_CONTRAST = 0.05


@dataclass(frozen=True)
class EarthModel:
    """Ordered stack of (thickness_ms, impedance) layers starting at t=0"""

    layers: Tuple[Tuple[float, float], ...]
    facies: FaciesKind
    seed: int = 0

    def __post_init__(self):
        layers = tuple((float(t), float(z)) for t, z in self.layers)
        if len(layers) < 2:
            raise ModelError(f"An earth model needs at least 2 layers, got {len(layers)}")
        for thickness, impedance in layers:
            if thickness <= 0 or impedance <= 0:
                raise ModelError(f"Layer thickness and impedance must be positive, got ({thickness}, {impedance})")
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "facies", FaciesKind(self.facies))

    @property
    def total_thickness_ms(self) -> float:
        return float(sum(t for t, _ in self.layers))

    @property
    def thicknesses(self) -> np.ndarray:
        return np.array([t for t, _ in self.layers])

    @property
    def impedances(self) -> np.ndarray:
        return np.array([z for _, z in self.layers])

    def interface_times_ms(self) -> np.ndarray:
        """Top of every layer below the first"""
        return np.cumsum(self.thicknesses)[:-1]


def _draw_impedance(facies: FaciesKind, index: int, sand_first: bool, rng: np.random.Generator) -> float:
    if facies == FaciesKind.SHALE:
        return float(rng.uniform(BACKGROUND_SHALE * (1 - SHALE_CONTRAST), BACKGROUND_SHALE * (1 + SHALE_CONTRAST)))
    is_sand = (index % 2 == 0) == sand_first
    low, high = SAND_IMPEDANCE if is_sand else SHALE_IMPEDANCE
    return float(rng.uniform(low, high))


def gen_earth_model(facies: FaciesKind, seed: int, duration_ms: float = DEFAULT_DURATION_MS) -> EarthModel:
    """Draw layers until the stack spans duration_ms

    Sand/shale facies alternate sand and shale impedances; the shale facies draws
    every layer from a narrow band so contrasts stay low.
    """
    facies = FaciesKind(facies)
    rng = np.random.default_rng(seed)
    low, high = THICKNESS_MS[facies]
    sand_first = bool(rng.integers(0, 2))

    layers = []
    total = 0.0
    while total < duration_ms or len(layers) < 2:
        thickness = float(rng.uniform(low, high))
        layers.append((thickness, _draw_impedance(facies, len(layers), sand_first, rng)))
        total += thickness
    return EarthModel(layers=tuple(layers), facies=facies, seed=seed)


def reflectivity_series(model: EarthModel, dt_ms: float, n: int, trace_id: str = "reflectivity") -> Trace:
    """Normal-incidence reflection coefficients placed at the nearest sample

    r = (Z_below - Z_above) / (Z_below + Z_above)

    Interfaces that round to the same sample are merged into one, taken from the
    impedance above the first to the impedance below the last, so |r| < 1 holds.
    """
    if model.total_thickness_ms < n * dt_ms:
        raise ModelError(f"Model spans {model.total_thickness_ms:g} ms, trace needs {n * dt_ms:g} ms")

    r = np.zeros(n)
    z = model.impedances
    indices = np.rint(model.interface_times_ms() / dt_ms).astype(int)
    # interface k sits between layers k and k + 1; times are increasing so inside is a prefix
    inside = indices < n
    indices, above, below = indices[inside], z[:-1][inside], z[1:][inside]
    if indices.size:
        starts = np.r_[True, indices[1:] != indices[:-1]]
        ends = np.r_[indices[1:] != indices[:-1], True]
        top, bottom = above[starts], below[ends]
        r[indices[starts]] = (bottom - top) / (bottom + top)
    return Trace(id=trace_id, kind=TraceKind.LOG, dt_ms=dt_ms, samples=r)
