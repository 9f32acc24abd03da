from src.qc.metrics import QcBands, sidelobe_metric, spectrum_report
from src.stages.base import BaseStage, RunConfig, StageArgument, StageSpec
from src.stages.common import trace_input
from src.stages.result import StageResult
from src.util.tables import write_rows

SPECTRUM_COLUMNS = ["band", "corners", "original_energy", "generated_energy", "ratio"]


class SpectrumStage(BaseStage):
    """Band-energy comparison between an input and a generated trace"""

    spec = StageSpec(
        name="spectrum",
        description="Compare low/mid/high band energy of two traces",
        help_text="""Compare the spectra of an original and a generated trace.

Band energies use the low, mid and high bands of the configuration. Writes
spectrum_report.csv; the sidelobe metric of both traces is reported alongside.

Example:
bandext spectrum --original data/W05_seismic.bxt --generated bb/W05_broadband.bxt --out spectrum/""",
        arguments=[
            StageArgument(name="original", description="Input BXT1 trace"),
            StageArgument(name="generated", description="Generated BXT1 trace"),
        ],
    )

    async def execute(self, run: RunConfig) -> StageResult:
        original = trace_input(run, "original")
        generated = trace_input(run, "generated")
        bands = QcBands.from_config(run.section("bands"))
        comparison = spectrum_report(original, generated, low=bands.low, high=bands.high, mid=bands.mid)

        rows = [
            {
                "band": name,
                "corners": str(band),
                "original_energy": comparison.original_energy[name],
                "generated_energy": comparison.generated_energy[name],
                "ratio": comparison.ratios[name],
            }
            for name, band in comparison.bands.items()
        ]
        path = write_rows(rows, SPECTRUM_COLUMNS, run.out_dir / "spectrum_report.csv")
        metadata = {"sidelobe_original": sidelobe_metric(original), "sidelobe_generated": sidelobe_metric(generated)}
        table = [[r[c] for c in SPECTRUM_COLUMNS] for r in rows]
        return StageResult.table(SPECTRUM_COLUMNS, table, metadata).with_outputs(path)
