"""Input loading shared by several stages"""

from pathlib import Path
from typing import List, Optional, Tuple

from src.cgan.networks import Generator, GeneratorSpec
from src.cgan.trainer import CheckpointSet, load_checkpoint_set, load_generator
from src.core.container import read_trace
from src.core.manifest import DatasetManifest, PairRole, load_manifest
from src.core.trace import Trace, TracePair
from src.dsp.bands import TrapezoidBand
from src.dsp.spectral import SpectrogramGeometry
from src.stages.base import RunConfig
from src.util.errors import CheckpointError, FormatError, ManifestError


def manifest_pairs(run: RunConfig) -> Tuple[DatasetManifest, List[TracePair]]:
    return load_manifest(run.require("manifest", ManifestError))


def roles_of(manifest: DatasetManifest) -> dict:
    return {entry.well_id: entry.role for entry in manifest.pairs}


def pairs_with_role(manifest: DatasetManifest, pairs: List[TracePair], role: PairRole) -> List[TracePair]:
    roles = roles_of(manifest)
    return [p for p in pairs if roles.get(p.well_id) == role]


def trace_input(run: RunConfig, name: str = "input") -> Trace:
    path = run.require(name, FormatError)
    return read_trace(path, trace_id=Path(path).stem)


def band_param(run: RunConfig, default_key: str = "seismic") -> TrapezoidBand:
    """--band if given, otherwise the named band from the configuration"""
    return TrapezoidBand.parse(run.param("band") or run.config["bands"][default_key])


def checkpoint_generators(
    run: RunConfig, limit: Optional[int] = None
) -> Tuple[CheckpointSet, List[Generator], SpectrogramGeometry]:
    """Generators of the (latest limit) checkpoints, built from the specs stored in the checkpoints"""
    checkpoints = load_checkpoint_set(run.require("checkpoints", CheckpointError))
    loaded = checkpoints.load()
    if limit:
        loaded = loaded[-limit:]
    stored = loaded[-1].config
    spec = GeneratorSpec.from_config(stored.get("generator", run.section("generator")))
    geometry = SpectrogramGeometry.from_config(stored.get("spectrogram", run.section("spectrogram")))
    return checkpoints, [load_generator(ckpt, spec) for ckpt in loaded], geometry
