from src.core.manifest import relocate, write_manifest
from src.stages.base import BaseStage, RunConfig, StageArgument, StageSpec
from src.stages.common import manifest_pairs
from src.stages.result import StageResult
from src.synth.dataset import MANIFEST_NAME
from src.util.tables import write_rows
from src.welltie.selection import SelectionPolicy, apply_selection, select_training


class SelectStage(BaseStage):
    """Split a tie-classified dataset into training and validation wells"""

    spec = StageSpec(
        name="select",
        description="Pick training pairs by tie class",
        help_text="""Pick training pairs by tie class.

The selection section of the configuration sets how many Good, Fair and Poor pairs
train the network; every other well becomes a blind validation well. Writes a
manifest.json with roles and selection.csv.

Example:
bandext select --manifest ties/manifest.json --out split/""",
        arguments=[StageArgument(name="manifest", description="Tie-classified manifest")],
    )

    async def execute(self, run: RunConfig) -> StageResult:
        # loading checks every referenced trace before roles are written
        manifest, _ = manifest_pairs(run)
        policy = SelectionPolicy.from_config(run.section("selection"), seed=run.seed)
        selection = select_training(manifest, policy)
        split = apply_selection(manifest, selection)

        manifest_path = run.out_dir / MANIFEST_NAME
        write_manifest(relocate(split, run.out_dir), manifest_path)
        rows = [
            {"well_id": e.well_id, "tie_class": e.tie_class.value if e.tie_class else "", "role": e.role.value}
            for e in split.pairs
        ]
        csv_path = write_rows(rows, ["well_id", "tie_class", "role"], run.out_dir / "selection.csv")
        self.logger.info("Selection", extra_data={"train": ",".join(selection.train_ids)})

        result = StageResult.table(
            ["well_id", "tie_class", "role"],
            [[r["well_id"], r["tie_class"], r["role"]] for r in rows],
            metadata={"policy": policy.to_dict()},
        )
        return result.with_outputs(manifest_path, csv_path)
