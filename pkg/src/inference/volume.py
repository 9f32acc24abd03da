"""Ensemble-mean processing of whole volumes"""

import asyncio
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence, Union

import numpy as np
import pandas as pd

from src.core.trace import Trace, TraceKind, Volume, VolumeKey
from src.dsp.spectral import SpectrogramGeometry
from src.inference.realize import EnsembleStats, ImageGenerator, ensemble_stats
from src.util.errors import GeometryError, InferenceError
from src.util.logging import Logger
from src.util.tables import write_csv

PathLike = Union[str, os.PathLike]

# Progress is logged every this many traces
PROGRESS_EVERY = 64


def trace_seed(seed: int, key: VolumeKey) -> int:
    """Per-trace base seed derived from (seed, inline, xline)"""
    inline, xline = key
    return int(np.random.SeedSequence([seed, inline % 2**32, xline % 2**32]).generate_state(1)[0])


def _check_geometry(volume: Volume, n_samples: int) -> None:
    for key, trace in volume.traces.items():
        if len(trace) != n_samples:
            raise GeometryError(
                f"Trace at inline {key[0]}, xline {key[1]} has {len(trace)} samples, expected {n_samples}", key=key
            )


async def process_volume(
    generators: Sequence[ImageGenerator],
    volume: Volume,
    realizations: int,
    seed: int,
    workers: int = 1,
    geometry: SpectrogramGeometry = SpectrogramGeometry(),
    n_samples: int = 512,
) -> Volume:
    """Replace every trace by its ensemble mean, keeping (inline, xline) keys

    Traces are spread over a pool of worker threads; each trace's seeds depend only on
    its key, and results are gathered in key order, so output is independent of the
    worker count.
    """
    logger = Logger("Volume")
    if not generators:
        raise InferenceError("Volume processing needs at least one checkpoint")
    if workers < 1:
        raise InferenceError(f"workers must be >= 1, got {workers}")
    _check_geometry(volume, n_samples)

    keys = list(volume.traces)
    loop = asyncio.get_running_loop()

    def run_one(key: VolumeKey) -> Trace:
        stats, _ = ensemble_stats(
            generators, volume[key], realizations, trace_seed(seed, key), geometry=geometry, n_samples=n_samples
        )
        return stats.mean_trace(t0_ms=volume[key].t0_ms)

    results = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [loop.run_in_executor(pool, run_one, key) for key in keys]
        for done, future in enumerate(futures, start=1):
            results.append(await future)
            if done % PROGRESS_EVERY == 0 or done == len(futures):
                logger.info("Volume progress", extra_data={"done": done, "total": len(futures)})

    traces = {}
    for key, mean in zip(keys, results):
        traces[key] = Trace(
            id=f"il{key[0]}_xl{key[1]}/broadband",
            kind=TraceKind.BROADBAND,
            dt_ms=mean.dt_ms,
            samples=mean.samples,
            t0_ms=mean.t0_ms,
        )
    return Volume(dt_ms=volume.dt_ms, traces=traces)


def stats_frame(stats: EnsembleStats) -> pd.DataFrame:
    return pd.DataFrame({"sample_index": np.arange(stats.mean.size), "mean": stats.mean, "std": stats.std})


def histogram_frame(stats: EnsembleStats, sample_index: int) -> pd.DataFrame:
    edges, counts = stats.histograms[sample_index]
    return pd.DataFrame({"bin_left": edges[:-1], "bin_right": edges[1:], "count": counts})


def export_stats(stats: EnsembleStats, directory: PathLike, prefix: str = "stats") -> Path:
    """stats CSV (sample_index,mean,std) plus one histogram CSV per selected sample"""
    directory = Path(directory)
    write_csv(stats_frame(stats), directory / f"{prefix}.csv")
    for index in sorted(stats.histograms):
        write_csv(histogram_frame(stats, index), directory / f"{prefix}_hist_sample{index:04d}.csv")
    return directory
