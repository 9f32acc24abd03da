from src.core.manifest import PairRole
from src.inference.realize import ensemble_stats, well_seed
from src.qc.metrics import QcBands
from src.qc.report import qc_report
from src.stages.base import BaseStage, RunConfig, StageArgument, StageSpec
from src.stages.common import checkpoint_generators, manifest_pairs, roles_of
from src.stages.result import StageResult
from src.util.tables import write_csv

SUMMARY_COLUMNS = (
    "blind_corr",
    "baseline_corr",
    "band_consistency",
    "sidelobe_generated",
    "sidelobe_seismic",
    "low_ratio",
    "mid_ratio",
    "high_ratio",
)


class QcStage(BaseStage):
    """Per-well quality control of a trained model"""

    spec = StageSpec(
        name="qc",
        description="Blind-well correlation, band consistency, sidelobe and spectrum QC",
        help_text="""Evaluate a trained model on every well of a manifest.

Each well's broadband prediction is the ensemble mean over the latest
qc.max_checkpoints checkpoints. Writes qc_report.csv (one row per well, with
correlations under the unfiltered, display, seismic and low band schemes) and
spectrum_report.csv; medians per role are returned.

Example:
bandext qc --manifest split/manifest.json --checkpoints model/ --out qc/""",
        arguments=[
            StageArgument(name="manifest", description="Manifest with roles"),
            StageArgument(name="checkpoints", description="Directory of training checkpoints"),
            StageArgument(name="realizations", description="Realizations per well", required=False),
        ],
    )

    async def execute(self, run: RunConfig) -> StageResult:
        section = run.section("qc")
        realizations = int(run.param("realizations", section.get("realizations", 20)))
        manifest, pairs = manifest_pairs(run)
        _, generators, geometry = checkpoint_generators(run, limit=section.get("max_checkpoints"))
        bands = QcBands.from_config(run.section("bands"))

        generated = {}
        for pair in pairs:
            stats, _ = await self.offload(
                ensemble_stats, generators, pair.seismic, realizations, well_seed(run.seed, pair.well_id), geometry=geometry
            )
            generated[pair.well_id] = stats.mean_trace(t0_ms=pair.seismic.t0_ms)
            self.logger.info("Well evaluated", extra_data={"well": pair.well_id})

        report = qc_report(pairs, generated, roles_of(manifest), bands)
        qc_path = write_csv(report.frame(), run.out_dir / "qc_report.csv")
        spectrum_path = write_csv(report.spectrum_frame(), run.out_dir / "spectrum_report.csv")

        summary = {}
        for role in (PairRole.TRAIN, PairRole.VALIDATION, None):
            label = role.value if role else "all"
            summary[label] = {column: report.median(column, role) for column in SUMMARY_COLUMNS}
        return StageResult.json(summary, metadata={"wells": len(report.rows)}).with_outputs(qc_path, spectrum_path)
