"""Generator realizations and their statistics for one trace"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from src.autodiff.tensor import Tensor, no_grad
from src.cgan.imaging import image_to_trace, trace_to_image
from src.core.trace import Trace, TraceKind
from src.dsp.spectral import SpectrogramGeometry
from src.util.errors import GeometryError, InferenceError


class ImageGenerator(Protocol):
    """Anything mapping (condition images, noise) to images, e.g. a frozen Generator"""

    @property
    def noise_dim(self) -> int: ...

    def __call__(self, x: Tensor, z: Tensor) -> Tensor: ...


def z_seed_for(seed: int, index: int) -> int:
    """Independent noise seed for realization index under a base seed"""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def well_seed(seed: int, well_id: str) -> int:
    """Per-well base seed derived from (seed, well id bytes)"""
    return int(np.random.SeedSequence([seed, *well_id.encode("utf-8")]).generate_state(1)[0])


def realize_trace(
    generator: ImageGenerator,
    seismic: Trace,
    z_seed: int,
    geometry: SpectrogramGeometry = SpectrogramGeometry(),
    n_samples: int = 512,
) -> Trace:
    """normalize -> stft -> G(x, z) -> istft -> denormalize"""
    if len(seismic) != n_samples:
        raise GeometryError(f"Trace {seismic.id} has {len(seismic)} samples, the generator was trained on {n_samples}")
    image, template, scale = trace_to_image(seismic, geometry)
    z = np.random.default_rng(z_seed).standard_normal((1, generator.noise_dim))
    with no_grad():
        out = generator(Tensor(image[None]), Tensor(z))
    trace = image_to_trace(out.data[0], template, scale, trace_id=f"{seismic.id}/broadband", kind=TraceKind.BROADBAND)
    return trace.with_samples(trace.samples, t0_ms=seismic.t0_ms)


@dataclass(frozen=True, eq=False)
class RealizationSet:
    trace_id: str
    realizations: np.ndarray
    checkpoint_indices: Tuple[int, ...]
    z_seeds: Tuple[int, ...]

    def __post_init__(self):
        if self.realizations.ndim != 2 or self.realizations.shape[0] < 1:
            raise InferenceError(f"Realizations must be an R x n matrix with R >= 1, got {self.realizations.shape}")
        if not np.all(np.isfinite(self.realizations)):
            raise InferenceError(f"Non-finite realization for trace {self.trace_id}")

    @property
    def n_realizations(self) -> int:
        return int(self.realizations.shape[0])

    def checkpoint_usage(self) -> Dict[int, int]:
        indices, counts = np.unique(self.checkpoint_indices, return_counts=True)
        return {int(i): int(c) for i, c in zip(indices, counts)}


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    mean: np.ndarray
    std: np.ndarray
    histograms: Dict[int, Tuple[np.ndarray, np.ndarray]]
    n_realizations: int
    dt_ms: float = 2.0
    trace_id: str = ""

    def mean_trace(self, t0_ms: float = 0.0) -> Trace:
        return Trace(
            id=self.trace_id or "ensemble_mean", kind=TraceKind.BROADBAND, dt_ms=self.dt_ms, samples=self.mean, t0_ms=t0_ms
        )


def summarize(
    realizations: RealizationSet, histogram_samples: Sequence[int] = (), bins: int = 30, dt_ms: float = 2.0
) -> EnsembleStats:
    """Per-sample mean, population std and histograms over the realization axis

    Histogram ranges are the per-sample min/max, so a constant sample puts every
    realization in a single bin.
    """
    values = realizations.realizations
    n = values.shape[1]
    histograms = {}
    for index in histogram_samples:
        if not 0 <= index < n:
            raise InferenceError(f"Histogram sample {index} outside trace of {n} samples")
        column = values[:, index]
        counts, edges = np.histogram(column, bins=bins, range=(column.min(), column.max()))
        histograms[int(index)] = (edges, counts)
    return EnsembleStats(
        mean=values.mean(axis=0),
        std=values.std(axis=0),
        histograms=histograms,
        n_realizations=realizations.n_realizations,
        dt_ms=dt_ms,
        trace_id=realizations.trace_id,
    )


def ensemble_stats(
    generators: Sequence[ImageGenerator],
    seismic: Trace,
    realizations: int,
    seed: int,
    histogram_samples: Sequence[int] = (),
    bins: int = 30,
    geometry: SpectrogramGeometry = SpectrogramGeometry(),
    n_samples: Optional[int] = None,
) -> Tuple[EnsembleStats, RealizationSet]:
    """R realizations cycling round-robin over generators with a fresh z each draw"""
    if not generators:
        raise InferenceError("Ensemble needs at least one checkpoint")
    if realizations < 1:
        raise InferenceError(f"Ensemble needs R >= 1, got {realizations}")
    n_samples = len(seismic) if n_samples is None else n_samples

    rows: List[np.ndarray] = []
    indices, seeds = [], []
    for r in range(realizations):
        k = r % len(generators)
        z_seed = z_seed_for(seed, r)
        rows.append(realize_trace(generators[k], seismic, z_seed, geometry, n_samples).samples)
        indices.append(k)
        seeds.append(z_seed)

    realization_set = RealizationSet(
        trace_id=f"{seismic.id}/broadband",
        realizations=np.vstack(rows),
        checkpoint_indices=tuple(indices),
        z_seeds=tuple(seeds),
    )
    return summarize(realization_set, histogram_samples, bins, seismic.dt_ms), realization_set
