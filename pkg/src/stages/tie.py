from src.core.manifest import relocate, write_manifest
from src.stages.base import BaseStage, RunConfig, StageArgument, StageSpec
from src.stages.common import band_param, manifest_pairs
from src.stages.result import StageResult
from src.synth.dataset import MANIFEST_NAME
from src.util.tables import write_rows
from src.welltie.scoring import TieThresholds, classify_tie, tie_score

TIE_COLUMNS = ["well_id", "labeled_class", "tie_class", "character_score", "amplitude_score", "best_lag_ms"]


class TieStage(BaseStage):
    """Score every pair's well tie and classify it"""

    spec = StageSpec(
        name="tie",
        description="Score and classify well ties",
        help_text="""Score the tie of every pair in a manifest.

The log is band-limited to the seismic band and correlated with the seismic over
lags up to welltie.max_lag_ms. Writes tie_scores.csv and a manifest.json carrying
the measured tie classes.

Example:
bandext tie --manifest data/manifest.json --out ties/""",
        arguments=[
            StageArgument(name="manifest", description="Dataset manifest"),
            StageArgument(name="band", description="Seismic band f1-f2-f3-f4", required=False),
        ],
    )

    async def execute(self, run: RunConfig) -> StageResult:
        manifest, pairs = manifest_pairs(run)
        band = band_param(run)
        section = run.section("welltie")
        thresholds = TieThresholds.from_config(section)
        max_lag_ms = float(section.get("max_lag_ms", 20.0))

        rows, classes = [], {}
        for pair in pairs:
            score = tie_score(pair, band, max_lag_ms)
            tie = classify_tie(score, thresholds)
            classes[pair.well_id] = tie
            rows.append(
                {
                    "well_id": pair.well_id,
                    "labeled_class": pair.tie_class.value if pair.tie_class else "",
                    "tie_class": tie.value,
                    "character_score": score.character_score,
                    "amplitude_score": score.amplitude_score,
                    "best_lag_ms": score.best_lag_ms,
                }
            )
            self.logger.info(
                "Tie scored", extra_data={"well": pair.well_id, "class": tie.value, "score": score.character_score}
            )

        csv_path = write_rows(rows, TIE_COLUMNS, run.out_dir / "tie_scores.csv")
        manifest_path = run.out_dir / MANIFEST_NAME
        write_manifest(relocate(manifest.with_tie_classes(classes), run.out_dir), manifest_path)

        result = StageResult.table(TIE_COLUMNS, [[r[c] for c in TIE_COLUMNS] for r in rows], metadata={"band": str(band)})
        return result.with_outputs(csv_path, manifest_path)
