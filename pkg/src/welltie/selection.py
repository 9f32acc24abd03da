"""Training-pair selection by tie class"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Sequence, Tuple, Union

import numpy as np

from src.core.manifest import DatasetManifest, ManifestEntry, PairRole
from src.core.trace import TieClass, TracePair
from src.util.errors import SelectionError

# Manifest entries and loaded pairs both carry well_id and tie_class
Selectable = Union[ManifestEntry, TracePair]


@dataclass(frozen=True)
class SelectionPolicy:
    n_good: int = 3
    n_fair: int = 1
    n_poor: int = 0
    exclude_poor: bool = True
    exclude_wells: Tuple[str, ...] = field(default_factory=tuple)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "exclude_wells", tuple(self.exclude_wells))
        if min(self.n_good, self.n_fair, self.n_poor) < 0:
            raise SelectionError(f"Selection counts must be non-negative: {self}")
        if self.n_good + self.n_fair + self.n_poor < 1:
            raise SelectionError("A selection policy must pick at least one training pair")
        if self.exclude_poor and self.n_poor > 0:
            raise SelectionError("n_poor > 0 conflicts with exclude_poor")

    @classmethod
    def from_config(cls, section: Dict[str, Any], seed: int = 0) -> "SelectionPolicy":
        return cls(
            n_good=int(section.get("n_good", 3)),
            n_fair=int(section.get("n_fair", 1)),
            n_poor=int(section.get("n_poor", 0)),
            exclude_poor=bool(section.get("exclude_poor", True)),
            exclude_wells=tuple(section.get("exclude_wells", ())),
            seed=seed,
        )

    def counts(self) -> Dict[TieClass, int]:
        return {TieClass.GOOD: self.n_good, TieClass.FAIR: self.n_fair, TieClass.POOR: self.n_poor}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_good": self.n_good,
            "n_fair": self.n_fair,
            "n_poor": self.n_poor,
            "exclude_poor": self.exclude_poor,
            "exclude_wells": list(self.exclude_wells),
            "seed": self.seed,
        }


class Selection(NamedTuple):
    train: List[Selectable]
    validation: List[Selectable]

    def roles(self) -> Dict[str, PairRole]:
        roles = {p.well_id: PairRole.TRAIN for p in self.train}
        roles.update({p.well_id: PairRole.VALIDATION for p in self.validation})
        return roles

    @property
    def train_ids(self) -> List[str]:
        return [p.well_id for p in self.train]


def select_training(dataset: Union[DatasetManifest, Sequence[Selectable]], policy: SelectionPolicy) -> Selection:
    """Seeded pick of n_good Good + n_fair Fair (+ n_poor Poor) pairs for training

    Takes a manifest, whose entries are selected without reading any trace, or a
    sequence of loaded pairs; the selection holds whichever was given.

    Candidates are taken in well_id order before the seeded draw, so the selection does
    not depend on the order pairs were loaded in. Every other pair is validation.
    """
    pairs = dataset.pairs if isinstance(dataset, DatasetManifest) else dataset
    by_id = {}
    for pair in pairs:
        if pair.tie_class is None:
            raise SelectionError(f"Well {pair.well_id} has no tie class; score it before selection")
        by_id[pair.well_id] = pair

    rng = np.random.default_rng(policy.seed)
    excluded = set(policy.exclude_wells)
    chosen = set()
    for tie, wanted in policy.counts().items():
        candidates = sorted(w for w, p in by_id.items() if p.tie_class == tie and w not in excluded)
        if wanted > len(candidates):
            raise SelectionError(f"Policy wants {wanted} {tie.value} pairs but only {len(candidates)} are available")
        if wanted:
            picks = rng.choice(len(candidates), size=wanted, replace=False)
            chosen.update(candidates[i] for i in picks)

    train = [by_id[w] for w in sorted(chosen)]
    validation = [by_id[w] for w in sorted(by_id) if w not in chosen]
    return Selection(train=train, validation=validation)


def apply_selection(manifest: DatasetManifest, selection: Selection) -> DatasetManifest:
    """Manifest copy with train/validation roles recorded"""
    return manifest.with_roles(selection.roles())
