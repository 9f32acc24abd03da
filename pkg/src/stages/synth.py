from src.stages.base import BaseStage, RunConfig, StageArgument, StageSpec
from src.stages.result import StageResult
from src.synth.dataset import MANIFEST_NAME, facies_of, gen_dataset
from src.synth.forward import SynthConfig


class SynthStage(BaseStage):
    """Generate a labeled synthetic dataset of seismic/log pairs"""

    spec = StageSpec(
        name="synth",
        description="Generate synthetic seismic/log pairs with a known tie mix",
        help_text="""Generate synthetic seismic/log pairs.

Each pair comes from a layered earth model of one facies (blocky sand, thin beds
or shale), forward-modeled with a Ricker wavelet and degraded to its target tie
class. Pair files and manifest.json are written to the output directory.

Examples:
bandext synth --out data/
bandext --seed 7 synth --config synth.toml --out data/""",
        arguments=[StageArgument(name="out", description="Dataset directory", required=True)],
    )

    async def execute(self, run: RunConfig) -> StageResult:
        cfg = SynthConfig.from_config(run.config)
        manifest, pairs = await self.offload(gen_dataset, cfg, run.out_dir)
        facies = facies_of(cfg)

        rows = [[e.well_id, facies[e.well_id].value, e.tie_class.value, e.seismic, e.log] for e in manifest.pairs]
        result = StageResult.table(
            ["well_id", "facies", "tie_class", "seismic", "log"],
            rows,
            metadata={"pairs": len(pairs), "synth": cfg.to_dict()},
        )
        outputs = [run.out_dir / MANIFEST_NAME]
        for e in manifest.pairs:
            outputs.extend([run.out_dir / e.seismic, run.out_dir / e.log])
        return result.with_outputs(*outputs)
