"""Training-combination study: how much the chosen training pairs change the output at one well"""

import itertools
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.cgan.trainer import TrainConfig, train
from src.core.trace import Trace, TracePair
from src.dsp.stats import rms
from src.inference.realize import ensemble_stats
from src.qc.metrics import blind_validation
from src.util.errors import MetricError, StudyError
from src.util.logging import Logger
from src.util.tables import write_csv
from src.welltie.selection import Selection, SelectionPolicy, select_training

PathLike = Union[str, os.PathLike]

STUDY_COLUMNS = ["kind", "policy_a", "policy_b", "value"]
STUDY_REPORT_NAME = "study_report.csv"


@dataclass
class StudyReport:
    held_out_well: str
    policies: List[SelectionPolicy]
    train_ids: List[List[str]]
    outputs: List[Trace]
    blind_scores: List[Optional[float]]
    pairwise_rms: Dict[Tuple[int, int], float]

    def frame(self) -> pd.DataFrame:
        rows = []
        for i, score in enumerate(self.blind_scores):
            rows.append({"kind": "blind_validation", "policy_a": i, "policy_b": None, "value": score})
        for (a, b), value in sorted(self.pairwise_rms.items()):
            rows.append({"kind": "pairwise_rms", "policy_a": a, "policy_b": b, "value": value})
        return pd.DataFrame(rows, columns=STUDY_COLUMNS).astype({"policy_b": "Int64"})

    def write(self, directory: PathLike) -> Path:
        return write_csv(self.frame(), Path(directory) / STUDY_REPORT_NAME)


def _held_out(pairs: Sequence[TracePair], held_out_well: str) -> TracePair:
    for pair in pairs:
        if pair.well_id == held_out_well:
            return pair
    raise StudyError(f"Held-out well {held_out_well} is not in the dataset")


def plan_study(pairs: Sequence[TracePair], policies: Sequence[SelectionPolicy], held_out_well: str) -> List[Selection]:
    """Resolve every policy's selection up front and reject any that trains on the held-out well"""
    if not policies:
        raise StudyError("The study needs at least one policy")
    _held_out(pairs, held_out_well)
    selections = []
    for index, policy in enumerate(policies):
        selection = select_training(pairs, policy)
        if held_out_well in selection.train_ids:
            raise StudyError(f"Policy {index} trains on held-out well {held_out_well}; add it to exclude_wells")
        selections.append(selection)
    return selections


def training_combination_study(
    pairs: Sequence[TracePair],
    policies: Sequence[SelectionPolicy],
    cfg: TrainConfig,
    held_out_well: str,
    out_dir: PathLike,
    realizations: int = 20,
    seed: Optional[int] = None,
    max_checkpoints: Optional[int] = None,
) -> StudyReport:
    """Train one model per policy under one seed and compare their outputs at the held-out well

    Policies run one after another. Each model's held-out output is the ensemble mean over
    its (latest max_checkpoints) checkpoints.
    """
    logger = Logger("Study")
    selections = plan_study(pairs, policies, held_out_well)
    held_out = _held_out(pairs, held_out_well)
    seed = cfg.seed if seed is None else seed
    out_dir = Path(out_dir)

    outputs, scores, train_ids = [], [], []
    for index, (policy, selection) in enumerate(zip(policies, selections)):
        logger.info("Training policy", extra_data={"policy": index, "train": ",".join(selection.train_ids)})
        checkpoints = train(selection.train, cfg, out_dir / f"policy{index:02d}")
        generators = checkpoints.generators(cfg.generator)
        if max_checkpoints:
            generators = generators[-max_checkpoints:]
        stats, _ = ensemble_stats(generators, held_out.seismic, realizations, seed, geometry=cfg.geometry)
        mean = stats.mean_trace(t0_ms=held_out.seismic.t0_ms)
        try:
            score = blind_validation(mean, held_out.log)
        except MetricError:
            score = None
        outputs.append(mean)
        scores.append(score)
        train_ids.append(selection.train_ids)
        logger.info("Policy done", extra_data={"policy": index, "blind_validation": score})

    pairwise = {
        (a, b): rms(outputs[a].samples - outputs[b].samples) for a, b in itertools.combinations(range(len(outputs)), 2)
    }
    report = StudyReport(
        held_out_well=held_out_well,
        policies=list(policies),
        train_ids=train_ids,
        outputs=outputs,
        blind_scores=scores,
        pairwise_rms=pairwise,
    )
    report.write(out_dir)
    return report


def mean_score(reports: Sequence[StudyReport], policy_index: int) -> float:
    """Average blind score of one policy over repeated studies (e.g. several seeds)"""
    values = [r.blind_scores[policy_index] for r in reports if r.blind_scores[policy_index] is not None]
    if not values:
        raise StudyError(f"Policy {policy_index} has no defined blind score")
    return float(np.mean(values))
