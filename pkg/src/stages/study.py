from typing import List

from src.cgan.trainer import TrainConfig
from src.qc.study import STUDY_REPORT_NAME, training_combination_study
from src.stages.base import BaseStage, RunConfig, StageArgument, StageSpec
from src.stages.common import manifest_pairs
from src.stages.result import StageResult
from src.util.errors import StudyError
from src.welltie.selection import SelectionPolicy


def study_policies(run: RunConfig, held_out_well: str) -> List[SelectionPolicy]:
    """Policies from study.policies, or two seeds of the selection policy with the held-out well excluded"""
    configured = run.section("study").get("policies") or []
    if configured:
        return [SelectionPolicy.from_config(p, seed=int(p.get("seed", run.seed + i))) for i, p in enumerate(configured)]

    base = run.section("selection")
    base["exclude_wells"] = sorted(set(base.get("exclude_wells", [])) | {held_out_well})
    return [SelectionPolicy.from_config(base, seed=run.seed + i) for i in range(2)]


class StudyStage(BaseStage):
    """Train one model per selection policy and compare their outputs at a held-out well"""

    spec = StageSpec(
        name="study",
        description="Training-combination sensitivity at a held-out well",
        help_text="""Compare models trained on different well combinations.

Every policy in study.policies (by default two seeds of the selection policy)
trains its own model with the same training seed; the held-out well must be outside
every training set. Writes study_report.csv with each model's blind correlation
and the pairwise RMS difference of the held-out outputs.

Example:
bandext study --manifest ties/manifest.json --held-out W05 --epochs 50 --out study/""",
        arguments=[
            StageArgument(name="manifest", description="Tie-classified manifest"),
            StageArgument(name="held_out", description="Held-out well id", required=False),
        ],
    )

    async def execute(self, run: RunConfig) -> StageResult:
        section = run.section("study")
        held_out_well = run.param("held_out") or section.get("held_out_well")
        if not held_out_well:
            raise StudyError("study: a held-out well is required (--held-out or study.held_out_well)")

        _, pairs = manifest_pairs(run)
        policies = study_policies(run, held_out_well)
        cfg = TrainConfig.from_config(run.config)
        realizations = int(run.param("realizations", section.get("realizations", 20)))
        max_checkpoints = run.section("qc").get("max_checkpoints")

        report = await self.offload(
            training_combination_study,
            pairs,
            policies,
            cfg,
            held_out_well,
            run.out_dir,
            realizations=realizations,
            seed=run.seed,
            max_checkpoints=max_checkpoints,
        )
        frame = report.frame()
        return StageResult.from_frame(
            frame, metadata={"held_out_well": held_out_well, "train_wells": report.train_ids}
        ).with_outputs(run.out_dir / STUDY_REPORT_NAME)
