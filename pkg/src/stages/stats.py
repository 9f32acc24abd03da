from src.inference.realize import ensemble_stats, well_seed
from src.inference.volume import export_stats
from src.stages.base import BaseStage, RunConfig, StageArgument, StageSpec
from src.stages.common import checkpoint_generators, manifest_pairs, trace_input
from src.stages.result import StageResult
from src.util.errors import DataError, ManifestError


class StatsStage(BaseStage):
    """Per-sample ensemble statistics for one trace"""

    spec = StageSpec(
        name="stats",
        description="Ensemble mean, standard deviation and histograms for one trace",
        help_text="""Compute ensemble statistics for one trace.

The trace is either a BXT1 file (--input) or one well of a manifest (--manifest
with --well). Writes stats.csv (sample_index,mean,std) and one histogram CSV per
sample listed in inference.histogram_samples.

Examples:
bandext stats --checkpoints model/ --input trace.bxt --out stats/
bandext stats --checkpoints model/ --manifest split/manifest.json --well W05 --realizations 100 --out stats/""",
        arguments=[
            StageArgument(name="checkpoints", description="Directory of training checkpoints"),
            StageArgument(name="input", description="BXT1 seismic trace", required=False),
            StageArgument(name="manifest", description="Manifest holding the well", required=False),
            StageArgument(name="well", description="Well id within the manifest", required=False),
        ],
    )

    async def execute(self, run: RunConfig) -> StageResult:
        section = run.section("inference")
        realizations = int(run.param("realizations", section.get("realizations", 100)))
        _, generators, geometry = checkpoint_generators(run)

        if run.optional("input"):
            seismic, seed = trace_input(run), run.seed
        elif run.optional("manifest"):
            well = run.param("well")
            if not well:
                raise DataError("stats: --well is required with --manifest")
            manifest, pairs = manifest_pairs(run)
            matching = [p for p in pairs if p.well_id == well]
            if not matching:
                raise ManifestError(f"Well {well!r} not in manifest")
            seismic, seed = matching[0].seismic, well_seed(run.seed, well)
        else:
            raise DataError("stats: one of --input or --manifest is required")

        stats, realization_set = await self.offload(
            ensemble_stats,
            generators,
            seismic,
            realizations,
            seed,
            histogram_samples=[int(i) for i in section.get("histogram_samples", [])],
            bins=int(section.get("bins", 30)),
            geometry=geometry,
        )
        export_stats(stats, run.out_dir)
        outputs = [run.out_dir / "stats.csv"]
        outputs.extend(run.out_dir / f"stats_hist_sample{i:04d}.csv" for i in sorted(stats.histograms))

        return StageResult.json(
            {
                "trace": seismic.id,
                "realizations": stats.n_realizations,
                "checkpoint_usage": realization_set.checkpoint_usage(),
                "max_std": float(stats.std.max()),
            }
        ).with_outputs(*outputs)
