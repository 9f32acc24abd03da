"""Volumes on disk: a directory of BXT1 files plus index.json"""

import json
import os
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from src.core.container import read_trace, write_trace
from src.core.trace import Volume
from src.util.errors import FormatError, GeometryError, WriteError

PathLike = Union[str, os.PathLike]

INDEX_NAME = "index.json"


def trace_filename(inline: int, xline: int) -> str:
    return f"il{inline:05d}_xl{xline:05d}.bxt"


def write_volume(volume: Volume, directory: PathLike) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for (inline, xline), trace in volume.traces.items():
        name = trace_filename(inline, xline)
        write_trace(trace, directory / name)
        entries.append({"inline": inline, "xline": xline, "path": name})

    index = {"dt_ms": volume.dt_ms, "traces": entries}
    try:
        with open(directory / INDEX_NAME, "w", encoding="utf-8", newline="\n") as f:
            f.write(json.dumps(index, indent=2) + "\n")
    except OSError as e:
        raise WriteError(str(directory / INDEX_NAME), e.strerror or str(e))
    return directory


def read_volume(directory: PathLike) -> Volume:
    directory = Path(directory)
    index_path = directory / INDEX_NAME
    if not index_path.is_file():
        raise FormatError(f"Volume index not found: {index_path}")
    with open(index_path, "r", encoding="utf-8") as f:
        index = json.load(f)

    traces = {}
    for entry in index.get("traces", []):
        key = (int(entry["inline"]), int(entry["xline"]))
        if key in traces:
            raise GeometryError(f"Duplicate trace key {key} in {index_path}", key=key)
        trace_path = directory / entry["path"]
        if not trace_path.is_file():
            raise FormatError(f"Volume trace missing: {trace_path}")
        traces[key] = read_trace(trace_path, trace_id=f"il{key[0]}_xl{key[1]}")
    return Volume(dt_ms=float(index["dt_ms"]), traces=traces)


def volume_frame(volume: Volume) -> pd.DataFrame:
    """Long-format table of every sample in the volume"""
    frames = []
    for (inline, xline), trace in volume.traces.items():
        n = len(trace)
        frames.append(
            pd.DataFrame(
                {
                    "inline": np.full(n, inline),
                    "xline": np.full(n, xline),
                    "sample_index": np.arange(n),
                    "time_ms": trace.times_ms,
                    "amplitude": trace.samples,
                }
            )
        )
    if not frames:
        return pd.DataFrame(columns=["inline", "xline", "sample_index", "time_ms", "amplitude"])
    return pd.concat(frames, ignore_index=True)


def export_volume_csv(volume: Volume, path: PathLike) -> None:
    """Write the volume as CSV for external slice plotting"""
    from src.util.tables import write_csv

    write_csv(volume_frame(volume), path)
