"""Dataset manifests: JSON index of seismic/log pairs"""

import enum
import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema

from src.core.container import read_trace
from src.core.trace import TieClass, TracePair, TraceKind
from src.util.errors import BandextError, FormatError, ManifestError, WriteError
from src.util.logging import Logger

PathLike = Union[str, os.PathLike]


class PairRole(str, enum.Enum):
    TRAIN = "train"
    VALIDATION = "validation"
    UNASSIGNED = "unassigned"


@dataclass(frozen=True)
class ManifestEntry:
    well_id: str
    seismic: str
    log: str
    tie_class: Optional[TieClass] = None
    role: PairRole = PairRole.UNASSIGNED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "well_id": self.well_id,
            "seismic": self.seismic,
            "log": self.log,
            "tie_class": self.tie_class.value if self.tie_class else None,
            "role": self.role.value,
        }


@dataclass(frozen=True)
class DatasetManifest:
    pairs: Tuple[ManifestEntry, ...]
    seed: int = 0
    description: str = ""
    base_dir: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs, key=lambda e: e.well_id)))

    @property
    def well_ids(self) -> List[str]:
        return [entry.well_id for entry in self.pairs]

    def entry(self, well_id: str) -> ManifestEntry:
        for entry in self.pairs:
            if entry.well_id == well_id:
                return entry
        raise ManifestError(f"Well {well_id!r} not in manifest")

    def with_roles(self, roles: Dict[str, PairRole]) -> "DatasetManifest":
        """Copy with roles reassigned for the given wells"""
        pairs = tuple(replace(e, role=roles.get(e.well_id, e.role)) for e in self.pairs)
        return replace(self, pairs=pairs)

    def with_tie_classes(self, classes: Dict[str, TieClass]) -> "DatasetManifest":
        """Copy with tie classes replaced for the given wells"""
        pairs = tuple(replace(e, tie_class=classes.get(e.well_id, e.tie_class)) for e in self.pairs)
        return replace(self, pairs=pairs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pairs": [entry.to_dict() for entry in self.pairs],
            "seed": self.seed,
            "description": self.description,
        }


MANIFEST_SCHEMA = {
    "type": "object",
    "properties": {
        "pairs": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "well_id": {"type": "string", "minLength": 1},
                    "seismic": {"type": "string"},
                    "log": {"type": "string"},
                    "tie_class": {"enum": [c.value for c in TieClass] + [None]},
                    "role": {"enum": [r.value for r in PairRole]},
                },
                "required": ["well_id", "seismic", "log"],
            },
        },
        "seed": {"type": "integer"},
        "description": {"type": "string"},
    },
    "required": ["pairs"],
}


def parse_manifest(data: Dict[str, Any], base_dir: Optional[str] = None) -> DatasetManifest:
    try:
        jsonschema.validate(instance=data, schema=MANIFEST_SCHEMA)
    except jsonschema.ValidationError as e:
        location = ".".join(str(p) for p in e.absolute_path) or "<root>"
        raise ManifestError(f"Invalid manifest at {location}: {e.message}")

    if not data["pairs"]:
        raise ManifestError("Manifest lists no pairs")

    entries = []
    seen = set()
    for item in data["pairs"]:
        well_id = item["well_id"]
        if well_id in seen:
            raise ManifestError(f"Duplicate well_id {well_id!r} in manifest")
        seen.add(well_id)
        tie = item.get("tie_class")
        entries.append(
            ManifestEntry(
                well_id=well_id,
                seismic=item["seismic"],
                log=item["log"],
                tie_class=TieClass(tie) if tie else None,
                role=PairRole(item.get("role", PairRole.UNASSIGNED.value)),
            )
        )
    return DatasetManifest(
        pairs=tuple(entries),
        seed=int(data.get("seed", 0)),
        description=data.get("description", ""),
        base_dir=base_dir,
    )


def _resolve(base_dir: Optional[str], path: str) -> Path:
    p = Path(path)
    if p.is_absolute() or base_dir is None:
        return p
    return Path(base_dir) / p


def load_pair(manifest: DatasetManifest, entry: ManifestEntry) -> TracePair:
    """Load one manifest entry, reconciling the log onto the seismic grid"""
    from src.dsp.resample import resample_log

    seismic_path = _resolve(manifest.base_dir, entry.seismic)
    log_path = _resolve(manifest.base_dir, entry.log)
    for path in (seismic_path, log_path):
        if not path.is_file():
            raise ManifestError(f"Well {entry.well_id}: trace file not found: {path}")

    try:
        seismic = read_trace(seismic_path, trace_id=f"{entry.well_id}/seismic")
        log = read_trace(log_path, trace_id=f"{entry.well_id}/log")
    except FormatError as e:
        raise ManifestError(f"Well {entry.well_id}: {e}")

    if seismic.kind != TraceKind.SEISMIC or log.kind != TraceKind.LOG:
        raise ManifestError(
            f"Well {entry.well_id}: expected seismic and log containers, got {seismic.kind.value}/{log.kind.value}"
        )

    if log.dt_ms != seismic.dt_ms or len(log) != len(seismic):
        try:
            log = resample_log(log, seismic.dt_ms, len(seismic))
        except BandextError as e:
            raise ManifestError(f"Well {entry.well_id}: cannot reconcile log with seismic grid: {e}")

    return TracePair(well_id=entry.well_id, seismic=seismic, log=log, tie_class=entry.tie_class)


def read_manifest(path: PathLike) -> DatasetManifest:
    """Parse a manifest file without loading its traces"""
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"Manifest not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ManifestError(f"Manifest {path} is not valid JSON: {e}")
    return parse_manifest(data, base_dir=str(path.parent))


def load_manifest(path: PathLike) -> Tuple[DatasetManifest, List[TracePair]]:
    """Read a manifest and load every pair it references, sorted by well_id"""
    logger = Logger("Manifest")
    manifest = read_manifest(path)
    pairs = [load_pair(manifest, entry) for entry in manifest.pairs]
    logger.info("Loaded manifest", extra_data={"path": str(path), "pairs": len(pairs)})
    return manifest, pairs


def write_manifest(manifest: DatasetManifest, path: PathLike) -> None:
    text = json.dumps(manifest.to_dict(), indent=2, sort_keys=False) + "\n"
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise WriteError(str(path), e.strerror or str(e))


def relocate(manifest: DatasetManifest, directory: PathLike) -> DatasetManifest:
    """Copy whose trace paths are relative to directory, for writing a manifest elsewhere"""
    directory = Path(directory)
    pairs = tuple(
        replace(
            e,
            seismic=os.path.relpath(_resolve(manifest.base_dir, e.seismic), directory),
            log=os.path.relpath(_resolve(manifest.base_dir, e.log), directory),
        )
        for e in manifest.pairs
    )
    return replace(manifest, pairs=pairs, base_dir=str(directory))
