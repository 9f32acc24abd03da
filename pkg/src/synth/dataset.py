"""Labeled synthetic datasets on disk"""

import os
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from src.core.container import write_trace
from src.core.manifest import DatasetManifest, ManifestEntry, PairRole, write_manifest
from src.core.trace import TieClass, TracePair
from src.synth.earth import FaciesKind, gen_earth_model, reflectivity_series
from src.synth.forward import SynthConfig, degrade_tie, forward_model
from src.util.logging import Logger

PathLike = Union[str, os.PathLike]

MANIFEST_NAME = "manifest.json"


def largest_remainder(proportions: Sequence[float], total: int) -> List[int]:
    """Integer counts summing to total, as close as possible to proportions * total"""
    quotas = np.asarray(proportions, dtype=np.float64) * total
    counts = np.floor(quotas).astype(int)
    remainders = quotas - counts
    # stable sort keeps the earlier facies first on equal remainders
    for index in np.argsort(-remainders, kind="stable")[: total - counts.sum()]:
        counts[index] += 1
    return [int(c) for c in counts]


def well_name(index: int, total: int) -> str:
    width = max(2, len(str(total)))
    return f"W{index + 1:0{width}d}"


def plan_dataset(cfg: SynthConfig) -> List[Tuple[str, FaciesKind, TieClass]]:
    """Well ids with their facies and tie class, fixed by cfg.seed"""
    rng = np.random.default_rng([cfg.seed, 0])
    facies = []
    for kind, count in zip(cfg.facies_order, largest_remainder(cfg.facies_mix, cfg.n_pairs)):
        facies.extend([kind] * count)
    ties = []
    for tie, count in zip((TieClass.GOOD, TieClass.FAIR, TieClass.POOR), cfg.tie_mix):
        ties.extend([tie] * count)
    facies = [facies[i] for i in rng.permutation(cfg.n_pairs)]
    ties = [ties[i] for i in rng.permutation(cfg.n_pairs)]
    return [(well_name(i, cfg.n_pairs), facies[i], ties[i]) for i in range(cfg.n_pairs)]


def generate_pair(cfg: SynthConfig, index: int, well_id: str, facies: FaciesKind, tie: TieClass) -> TracePair:
    model_seed, noise_seed, degrade_seed = (int(s) for s in np.random.SeedSequence([cfg.seed, index + 1]).generate_state(3))
    model = gen_earth_model(facies, model_seed, duration_ms=cfg.n_samples * cfg.dt_ms)
    reflectivity = reflectivity_series(model, cfg.dt_ms, cfg.n_samples, trace_id=f"{well_id}/reflectivity")
    pair = forward_model(reflectivity, cfg, noise_seed, well_id=well_id)
    return degrade_tie(pair, tie, degrade_seed, cfg)


def gen_dataset(cfg: SynthConfig, out_dir: PathLike) -> Tuple[DatasetManifest, List[TracePair]]:
    """Write cfg.n_pairs BXT1 pairs plus manifest.json under out_dir

    Everything is a pure function of cfg, so two runs produce byte-identical files.
    """
    logger = Logger("Synth")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    pairs = []
    for index, (well_id, facies, tie) in enumerate(plan_dataset(cfg)):
        pair = generate_pair(cfg, index, well_id, facies, tie)
        seismic_name = f"{well_id}_seismic.bxt"
        log_name = f"{well_id}_log.bxt"
        write_trace(pair.seismic, out_dir / seismic_name)
        write_trace(pair.log, out_dir / log_name)
        entries.append(
            ManifestEntry(well_id=well_id, seismic=seismic_name, log=log_name, tie_class=tie, role=PairRole.UNASSIGNED)
        )
        pairs.append(pair)
        logger.info("Generated pair", extra_data={"well": well_id, "facies": facies.value, "tie": tie.value})

    manifest = DatasetManifest(pairs=tuple(entries), seed=cfg.seed, description=cfg.description, base_dir=str(out_dir))
    write_manifest(manifest, out_dir / MANIFEST_NAME)
    logger.info("Dataset written", extra_data={"pairs": len(pairs), "path": str(out_dir)})
    return manifest, pairs


def facies_of(cfg: SynthConfig) -> dict:
    """well_id -> facies for a dataset generated from cfg"""
    return {well_id: facies for well_id, facies, _ in plan_dataset(cfg)}
