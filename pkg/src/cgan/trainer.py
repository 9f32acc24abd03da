"""Alternating discriminator/generator training"""

import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from src.autodiff.optim import AdamState, adam_step
from src.autodiff.tensor import Tensor
from src.cgan.checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from src.cgan.imaging import DEFAULT_TARGET_BAND, check_image_geometry, pair_to_images
from src.cgan.losses import discriminator_loss, generator_loss_terms
from src.cgan.networks import DiscriminatorSpec, Generator, GeneratorSpec, build_discriminator, build_generator
from src.core.trace import TracePair
from src.dsp.bands import TrapezoidBand
from src.dsp.spectral import SpectrogramGeometry
from src.util.errors import CheckpointError, DivergenceError, TrainError
from src.util.logging import Logger
from src.util.tables import write_rows

PathLike = Union[str, os.PathLike]

LOSS_COLUMNS = ["epoch", "batch", "d_loss", "g_adv", "g_l1"]
LOSS_LOG_NAME = "losses.csv"
_CHECKPOINT_RE = re.compile(r"^ckpt_epoch(\d+)\.bxck$")


def checkpoint_name(epoch: int) -> str:
    return f"ckpt_epoch{epoch:05d}.bxck"


@dataclass(frozen=True)
class TrainConfig:
    lambda_l1: float = 100.0
    lr: float = 2e-4
    beta1: float = 0.5
    beta2: float = 0.999
    epochs: int = 2000
    batch_size: int = 4
    seed: int = 1234
    checkpoint_every: int = 200
    augment: bool = True
    target_band: TrapezoidBand = field(default_factory=lambda: DEFAULT_TARGET_BAND)
    geometry: SpectrogramGeometry = field(default_factory=SpectrogramGeometry)
    generator: GeneratorSpec = field(default_factory=GeneratorSpec)
    discriminator: DiscriminatorSpec = field(default_factory=DiscriminatorSpec)

    def __post_init__(self):
        object.__setattr__(self, "target_band", TrapezoidBand.parse(self.target_band))
        if self.epochs < 1:
            raise TrainError(f"epochs must be >= 1, got {self.epochs}")
        if self.checkpoint_every < 1:
            raise TrainError(f"checkpoint_every must be >= 1, got {self.checkpoint_every}")
        if self.batch_size < 1:
            raise TrainError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.lambda_l1 < 0:
            raise TrainError(f"lambda_l1 must be >= 0, got {self.lambda_l1}")

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "TrainConfig":
        """Build from a full configuration dict (train, generator, discriminator, spectrogram, bands, seed)"""
        train = config.get("train", {})
        return cls(
            lambda_l1=float(train.get("lambda_l1", 100.0)),
            lr=float(train.get("lr", 2e-4)),
            beta1=float(train.get("beta1", 0.5)),
            beta2=float(train.get("beta2", 0.999)),
            epochs=int(train.get("epochs", 2000)),
            batch_size=int(train.get("batch_size", 4)),
            seed=int(config.get("seed", 1234)),
            checkpoint_every=int(train.get("checkpoint_every", 200)),
            augment=bool(train.get("augment", True)),
            target_band=config.get("bands", {}).get("seismic", str(DEFAULT_TARGET_BAND)),
            geometry=SpectrogramGeometry.from_config(config.get("spectrogram", {"window_len": 64, "hop": 16, "n_fft": 64})),
            generator=GeneratorSpec.from_config(config.get("generator", {})),
            discriminator=DiscriminatorSpec.from_config(config.get("discriminator", {})),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda_l1": self.lambda_l1,
            "lr": self.lr,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "seed": self.seed,
            "checkpoint_every": self.checkpoint_every,
            "augment": self.augment,
            "target_band": str(self.target_band),
            "spectrogram": {"window_len": self.geometry.window_len, "hop": self.geometry.hop, "n_fft": self.geometry.n_fft},
            "generator": self.generator.to_dict(),
            "discriminator": self.discriminator.to_dict(),
        }


@dataclass(frozen=True)
class CheckpointSet:
    directory: Path
    epochs: List[int]
    paths: List[Path]
    loss_log: Path

    def __len__(self) -> int:
        return len(self.paths)

    def load(self) -> List[Checkpoint]:
        return [load_checkpoint(p) for p in self.paths]

    def generators(self, spec: GeneratorSpec) -> List[Generator]:
        """Frozen generators in eval mode, one per checkpoint"""
        return [load_generator(ckpt, spec) for ckpt in self.load()]


def load_generator(ckpt: Checkpoint, spec: GeneratorSpec) -> Generator:
    generator = build_generator(spec, seed=0)
    ckpt.restore_generator(generator)
    generator.eval()
    generator.requires_grad_(False)
    return generator


def load_checkpoint_set(directory: PathLike) -> CheckpointSet:
    directory = Path(directory)
    if not directory.is_dir():
        raise CheckpointError(f"Checkpoint directory not found: {directory}")
    found = []
    for path in directory.iterdir():
        match = _CHECKPOINT_RE.match(path.name)
        if match:
            found.append((int(match.group(1)), path))
    if not found:
        raise CheckpointError(f"No checkpoints in {directory}")
    found.sort()
    return CheckpointSet(
        directory=directory,
        epochs=[e for e, _ in found],
        paths=[p for _, p in found],
        loss_log=directory / LOSS_LOG_NAME,
    )


def augment_pair(pair: TracePair, rng: np.random.Generator, hop: int) -> TracePair:
    """Joint circular shift by whole hops and joint polarity flip"""
    n_hops = max(1, len(pair) // hop)
    shift = int(rng.integers(0, n_hops)) * hop
    sign = -1.0 if rng.random() < 0.5 else 1.0
    return TracePair(
        well_id=pair.well_id,
        seismic=pair.seismic.with_samples(sign * np.roll(pair.seismic.samples, shift)),
        log=pair.log.with_samples(sign * np.roll(pair.log.samples, shift)),
        tie_class=pair.tie_class,
    )


class Trainer:
    """Holds networks, optimizers and the training random stream"""

    def __init__(self, cfg: TrainConfig):
        self.cfg = cfg
        self.logger = Logger("Trainer")
        gen_seed, disc_seed, stream_seed = (int(s) for s in np.random.SeedSequence(cfg.seed).generate_state(3))
        self.generator = build_generator(cfg.generator, gen_seed)
        self.discriminator = build_discriminator(cfg.discriminator, disc_seed)
        self.rng = np.random.default_rng(stream_seed)
        self.g_state = AdamState(lr=cfg.lr, beta1=cfg.beta1, beta2=cfg.beta2)
        self.d_state = AdamState(lr=cfg.lr, beta1=cfg.beta1, beta2=cfg.beta2)
        self.history: List[Dict[str, float]] = []

    def _batch_images(self, batch: Sequence[TracePair]):
        xs, ys = [], []
        for pair in batch:
            if self.cfg.augment:
                pair = augment_pair(pair, self.rng, self.cfg.geometry.hop)
            x, y = pair_to_images(pair, self.cfg.geometry, self.cfg.target_band)
            xs.append(x)
            ys.append(y)
        return Tensor(np.stack(xs)), Tensor(np.stack(ys))

    def step(self, epoch: int, batch_index: int, batch: Sequence[TracePair]) -> Dict[str, float]:
        """One discriminator update followed by one generator update"""
        x, y = self._batch_images(batch)
        z = Tensor(self.rng.standard_normal((len(batch), self.cfg.generator.noise_dim)))
        self.generator.train()
        self.discriminator.train()

        fake = self.generator(x, z)

        d_loss = discriminator_loss(self.discriminator(x, y), self.discriminator(x, fake.detach()))
        self._check_finite(epoch, batch_index, d_loss=d_loss.item())
        d_loss.backward()
        adam_step(list(self.discriminator.named_parameters()), self.d_state)

        self.discriminator.requires_grad_(False)
        try:
            terms = generator_loss_terms(self.discriminator(x, fake), fake, y, self.cfg.lambda_l1)
            self._check_finite(epoch, batch_index, d_loss=d_loss.item(), g_adv=terms.adversarial.item(), g_l1=terms.l1.item())
            terms.total.backward()
        finally:
            self.discriminator.requires_grad_(True)
        adam_step(list(self.generator.named_parameters()), self.g_state)

        return {
            "epoch": epoch,
            "batch": batch_index,
            "d_loss": d_loss.item(),
            "g_adv": terms.adversarial.item(),
            "g_l1": terms.l1.item(),
        }

    @staticmethod
    def _check_finite(epoch: int, batch_index: int, **losses: float) -> None:
        if not all(math.isfinite(v) for v in losses.values()):
            raise DivergenceError(epoch, batch_index, losses)

    def fit_gain(self, pairs: Sequence[TracePair]) -> np.ndarray:
        """Start the generator's spectral gain at its least-squares fit over the unaugmented pairs"""
        images = [pair_to_images(pair, self.cfg.geometry, self.cfg.target_band) for pair in pairs]
        gain = self.generator.fit_condition_gain(np.stack([x for x, _ in images]), np.stack([y for _, y in images]))
        self.logger.info(
            "Spectral gain fitted",
            extra_data={"pairs": len(pairs), "gain_min": float(gain.min()), "gain_max": float(gain.max())},
        )
        return gain

    def checkpoint(self, epoch: int) -> Checkpoint:
        return Checkpoint.capture(epoch, self.generator, self.discriminator, self.cfg.to_dict(), self.rng)

    def run(self, pairs: Sequence[TracePair], out_dir: PathLike) -> CheckpointSet:
        cfg = self.cfg
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        pairs = sorted(pairs, key=lambda p: p.well_id)
        self.fit_gain(pairs)

        epochs, paths = [], []
        for epoch in range(1, cfg.epochs + 1):
            order = self.rng.permutation(len(pairs))
            for batch_index, start in enumerate(range(0, len(pairs), cfg.batch_size)):
                batch = [pairs[i] for i in order[start : start + cfg.batch_size]]
                row = self.step(epoch, batch_index, batch)
                self.history.append(row)
                self.logger.debug("Batch done", extra_data=row)

            last = epoch == cfg.epochs and not paths
            if epoch % cfg.checkpoint_every == 0 or last:
                path = save_checkpoint(self.checkpoint(epoch), out_dir / checkpoint_name(epoch))
                epochs.append(epoch)
                paths.append(path)
                self.logger.info("Checkpoint written", extra_data={"epoch": epoch, "path": str(path), **self.history[-1]})

        loss_log = write_rows(self.history, LOSS_COLUMNS, out_dir / LOSS_LOG_NAME)
        return CheckpointSet(directory=out_dir, epochs=epochs, paths=paths, loss_log=loss_log)


def train(pairs: Sequence[TracePair], cfg: TrainConfig, out_dir: PathLike) -> CheckpointSet:
    """Train a conditional GAN on seismic -> log pairs and write checkpoints to out_dir

    Every checkpoint_every epochs a checkpoint is written; when epochs < checkpoint_every
    the final epoch is checkpointed so the set is never empty.
    """
    if not pairs:
        raise TrainError("Training needs at least one pair")
    lengths = {len(p) for p in pairs}
    if len(lengths) != 1:
        raise TrainError(f"Training pairs differ in length: {sorted(lengths)}")
    check_image_geometry(lengths.pop(), cfg.geometry, cfg.generator.image_size)

    logger = Logger("Trainer")
    logger.info(
        "Training", extra_data={"pairs": len(pairs), "epochs": cfg.epochs, "lambda_l1": cfg.lambda_l1, "seed": cfg.seed}
    )
    return Trainer(cfg).run(pairs, out_dir)
