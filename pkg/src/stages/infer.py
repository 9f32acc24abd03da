from src.core.container import write_trace
from src.core.volume_io import export_volume_csv, read_volume, write_volume
from src.inference.realize import ensemble_stats, well_seed
from src.inference.volume import process_volume
from src.stages.base import BaseStage, RunConfig, StageArgument, StageSpec
from src.stages.common import checkpoint_generators, manifest_pairs
from src.stages.result import StageResult
from src.util.errors import DataError, FormatError


class InferStage(BaseStage):
    """Replace seismic traces by their ensemble-mean broadband prediction"""

    spec = StageSpec(
        name="infer",
        description="Generate broadband traces for a volume or the wells of a manifest",
        help_text="""Generate broadband traces.

Each trace is transformed R times (inference.realizations, or --realizations),
cycling over the checkpoints with a fresh noise vector per draw, and replaced by
the mean. Volumes (--volume DIR with index.json) are processed by --workers
threads; the result does not depend on the worker count.

Examples:
bandext infer --checkpoints model/ --volume seismic_volume/ --workers 4 --out bb/
bandext infer --checkpoints model/ --manifest split/manifest.json --out bb/""",
        arguments=[
            StageArgument(name="checkpoints", description="Directory of training checkpoints"),
            StageArgument(name="volume", description="Volume directory", required=False),
            StageArgument(name="manifest", description="Manifest whose seismic traces are processed", required=False),
            StageArgument(name="realizations", description="Realizations per trace", required=False),
            StageArgument(name="workers", description="Worker threads for volumes", required=False),
        ],
    )

    async def execute(self, run: RunConfig) -> StageResult:
        section = run.section("inference")
        realizations = int(run.param("realizations", section.get("realizations", 100)))
        _, generators, geometry = checkpoint_generators(run)

        if run.optional("volume"):
            volume = read_volume(run.require("volume", FormatError))
            workers = int(run.param("workers", section.get("workers", 1)))
            n_samples = int(run.config["trace"]["n_samples"])
            out = await process_volume(generators, volume, realizations, run.seed, workers, geometry, n_samples)
            volume_dir = write_volume(out, run.out_dir / "volume")
            outputs = [volume_dir]
            if run.param("csv"):
                csv_path = run.out_dir / "volume.csv"
                export_volume_csv(out, csv_path)
                outputs.append(csv_path)
            result = StageResult.json({"traces": len(out), "realizations": realizations, "volume": str(volume_dir)})
            return result.with_outputs(*outputs)

        if run.optional("manifest"):
            _, pairs = manifest_pairs(run)
            rows, outputs = [], []
            for pair in pairs:
                seed = well_seed(run.seed, pair.well_id)
                stats, _ = await self.offload(ensemble_stats, generators, pair.seismic, realizations, seed, geometry=geometry)
                path = run.out_dir / f"{pair.well_id}_broadband.bxt"
                write_trace(stats.mean_trace(t0_ms=pair.seismic.t0_ms), path)
                outputs.append(path)
                rows.append([pair.well_id, str(path)])
                await self.send_update(f"{pair.well_id} done")
            return StageResult.table(["well_id", "broadband"], rows, metadata={"realizations": realizations}).with_outputs(
                *outputs
            )

        raise DataError("infer: one of --volume or --manifest is required")
