from src.cgan.trainer import TrainConfig, train
from src.core.manifest import PairRole
from src.stages.base import BaseStage, RunConfig, StageArgument, StageSpec
from src.stages.common import manifest_pairs, pairs_with_role
from src.stages.result import StageResult
from src.welltie.selection import SelectionPolicy, apply_selection, select_training


class TrainStage(BaseStage):
    """Train the conditional GAN on the training wells of a manifest"""

    spec = StageSpec(
        name="train",
        description="Train the seismic-to-broadband generator",
        help_text="""Train the conditional GAN.

Pairs whose role is train are used; a manifest without roles is split with the
selection policy first. Checkpoints (ckpt_epochNNNNN.bxck) and losses.csv are
written to the output directory.

Examples:
bandext train --manifest split/manifest.json --out model/
bandext train --manifest split/manifest.json --epochs 50 --lambda-l1 100 --out model/""",
        arguments=[
            StageArgument(name="manifest", description="Manifest with train roles"),
            StageArgument(name="epochs", description="Training epochs", required=False),
            StageArgument(name="lambda-l1", description="Weight of the L1 term", required=False),
            StageArgument(name="checkpoint-every", description="Epochs between checkpoints", required=False),
        ],
    )

    async def execute(self, run: RunConfig) -> StageResult:
        manifest, pairs = manifest_pairs(run)
        train_pairs = pairs_with_role(manifest, pairs, PairRole.TRAIN)
        if not train_pairs:
            policy = SelectionPolicy.from_config(run.section("selection"), seed=run.seed)
            selected = apply_selection(manifest, select_training(manifest, policy))
            train_pairs = pairs_with_role(selected, pairs, PairRole.TRAIN)
            self.logger.info("Manifest has no train roles, applied selection policy", extra_data=policy.to_dict())

        cfg = TrainConfig.from_config(run.config)
        await self.send_update(f"Training on {len(train_pairs)} pairs for {cfg.epochs} epochs")
        checkpoints = await self.offload(train, train_pairs, cfg, run.out_dir)

        result = StageResult.json(
            {
                "train_wells": [p.well_id for p in train_pairs],
                "epochs": checkpoints.epochs,
                "checkpoints": [str(p) for p in checkpoints.paths],
                "losses": str(checkpoints.loss_log),
            },
            metadata={"train": cfg.to_dict()},
        )
        return result.with_outputs(*checkpoints.paths, checkpoints.loss_log)
