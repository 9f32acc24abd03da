"""Generator and discriminator for 32 x 32 two-plane spectrogram images"""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple, Union

import numpy as np

from src.autodiff import functional as F
from src.autodiff.modules import BatchNorm2d, Conv2d, ConvTranspose2d, Dense, Module, ModuleList, Parameter
from src.autodiff.tensor import Tensor, as_tensor
from src.util.errors import ShapeError, SpecError

KERNEL = 4
STRIDE = 2
PADDING = 1
LEAKY_SLOPE = 0.2
# Output head starts small so the spectral gain path dominates early training
HEAD_INIT_SCALE = 0.1
GAIN_RIDGE = 1e-2


@dataclass(frozen=True)
class GeneratorSpec:
    input_channels: int = 2
    output_channels: int = 2
    noise_dim: int = 8
    encoder_channels: Tuple[int, ...] = (16, 32, 64, 128)
    decoder_channels: Tuple[int, ...] = (64, 32, 16, 16)
    image_size: int = 32

    def __post_init__(self):
        object.__setattr__(self, "encoder_channels", tuple(int(c) for c in self.encoder_channels))
        object.__setattr__(self, "decoder_channels", tuple(int(c) for c in self.decoder_channels))
        if not self.encoder_channels:
            raise SpecError("Generator needs at least one encoder stage")
        if len(self.decoder_channels) != len(self.encoder_channels):
            raise SpecError(
                f"Decoder depth {len(self.decoder_channels)} must match encoder depth {len(self.encoder_channels)}"
            )
        if min(self.encoder_channels + self.decoder_channels) < 1 or min(self.input_channels, self.output_channels) < 1:
            raise SpecError("Channel counts must be positive")
        if self.noise_dim < 1:
            raise SpecError(f"noise_dim must be >= 1, got {self.noise_dim}")
        if self.input_channels != self.output_channels:
            raise SpecError(
                f"The gain path maps each of the {self.input_channels} condition channels onto an output channel, "
                f"got {self.output_channels} output channels"
            )
        _check_halving(self.image_size, len(self.encoder_channels))

    @property
    def bottleneck_size(self) -> int:
        return self.image_size >> len(self.encoder_channels)

    @classmethod
    def from_config(cls, section: Dict[str, Any]) -> "GeneratorSpec":
        return cls(
            noise_dim=int(section.get("noise_dim", 8)),
            encoder_channels=tuple(section.get("encoder_channels", (16, 32, 64, 128))),
            decoder_channels=tuple(section.get("decoder_channels", (64, 32, 16, 16))),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input_channels": self.input_channels,
            "output_channels": self.output_channels,
            "noise_dim": self.noise_dim,
            "encoder_channels": list(self.encoder_channels),
            "decoder_channels": list(self.decoder_channels),
            "image_size": self.image_size,
        }


@dataclass(frozen=True)
class DiscriminatorSpec:
    input_channels: int = 4
    channels: Tuple[int, ...] = field(default=(16, 32, 64))
    image_size: int = 32

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(int(c) for c in self.channels))
        if not self.channels or min(self.channels) < 1 or self.input_channels < 1:
            raise SpecError(f"Invalid discriminator channels {self.channels}")
        _check_halving(self.image_size, len(self.channels))

    @property
    def head_features(self) -> int:
        side = self.image_size >> len(self.channels)
        return self.channels[-1] * side * side

    @classmethod
    def from_config(cls, section: Dict[str, Any]) -> "DiscriminatorSpec":
        return cls(channels=tuple(section.get("channels", (16, 32, 64))))

    def to_dict(self) -> Dict[str, Any]:
        return {"input_channels": self.input_channels, "channels": list(self.channels), "image_size": self.image_size}


def _check_halving(size: int, depth: int) -> None:
    side = size
    for stage in range(depth):
        if side < 2 or side % 2:
            raise SpecError(f"Image of size {size} underflows at stage {stage + 1} of {depth} stride-2 convolutions")
        side //= 2


class ConvBlock(Module):
    """Stride-2 convolution, batch normalization and a (leaky) ReLU"""

    def __init__(self, in_channels: int, out_channels: int, rng: np.random.Generator, leaky: bool = False):
        super().__init__()
        self.leaky = leaky
        self.conv = Conv2d(in_channels, out_channels, KERNEL, STRIDE, PADDING, rng=rng)
        self.norm = BatchNorm2d(out_channels)

    def forward(self, x: Tensor) -> Tensor:
        h = self.norm(self.conv(x))
        return F.leaky_relu(h, LEAKY_SLOPE) if self.leaky else F.relu(h)


class UpBlock(Module):
    """Stride-2 transposed convolution, batch normalization and ReLU"""

    def __init__(self, in_channels: int, out_channels: int, rng: np.random.Generator):
        super().__init__()
        self.conv = ConvTranspose2d(in_channels, out_channels, KERNEL, STRIDE, PADDING, rng=rng)
        self.norm = BatchNorm2d(out_channels)

    def forward(self, x: Tensor) -> Tensor:
        return F.relu(self.norm(self.conv(x)))


class Generator(Module):
    """Encoder-decoder G(x, z) with skip connections

    z is lifted by a dense layer to one bottleneck-sized plane and concatenated there.
    Each decoder stage is followed by the encoder map of the same resolution; the last
    one by the condition image itself, before a 1 x 1 output head. A learned gain per
    channel and frequency row carries the condition image straight to the output, and
    Tanh is applied to the sum.
    """

    def __init__(self, spec: GeneratorSpec, rng: np.random.Generator):
        super().__init__()
        self.spec = spec
        self.encoder = ModuleList()
        in_channels = spec.input_channels
        for channels in spec.encoder_channels:
            self.encoder.append(ConvBlock(in_channels, channels, rng))
            in_channels = channels

        side = spec.bottleneck_size
        self.noise_lift = Dense(spec.noise_dim, side * side, rng=rng)

        skips = list(reversed(spec.encoder_channels[:-1])) + [spec.input_channels]
        self.decoder = ModuleList()
        in_channels = spec.encoder_channels[-1] + 1
        for channels, skip in zip(spec.decoder_channels, skips):
            self.decoder.append(UpBlock(in_channels, channels, rng))
            in_channels = channels + skip
        self.head = Conv2d(in_channels, spec.output_channels, 1, 1, 0, rng=rng)
        self.head.weight.data *= HEAD_INIT_SCALE
        self.condition_gain = Parameter(np.ones((1, spec.output_channels, spec.image_size, 1)))

    @property
    def noise_dim(self) -> int:
        return self.spec.noise_dim

    def forward(self, x: Union[Tensor, np.ndarray], z: Union[Tensor, np.ndarray]) -> Tensor:
        x, z = as_tensor(x), as_tensor(z)
        size = self.spec.image_size
        if x.ndim != 4 or x.shape[1:] != (self.spec.input_channels, size, size):
            raise ShapeError(f"Generator expects (N, {self.spec.input_channels}, {size}, {size}), got {x.shape}")
        if z.shape != (x.shape[0], self.spec.noise_dim):
            raise ShapeError(f"Generator noise must have shape ({x.shape[0]}, {self.spec.noise_dim}), got {z.shape}")

        features = []
        h = x
        for block in self.encoder:
            h = block(h)
            features.append(h)

        side = self.spec.bottleneck_size
        plane = self.noise_lift(z).reshape(x.shape[0], 1, side, side)
        h = F.concat_channels(h, plane)

        skips = list(reversed(features[:-1])) + [x]
        for block, skip in zip(self.decoder, skips):
            h = F.concat_channels(block(h), skip)
        return F.tanh(self.head(h) + self.condition_gain * x)

    def fit_condition_gain(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Least-squares gain per channel and frequency row from condition x to target y

        A ridge of GAIN_RIDGE times the largest row energy keeps rows where x is
        nearly empty close to zero. Sets and returns the gain.
        """
        x, y = np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
        expected = (self.spec.input_channels, self.spec.image_size, self.spec.image_size)
        if x.ndim != 4 or x.shape != y.shape or x.shape[1:] != expected:
            raise ShapeError(f"Gain fit needs matching (N, *{expected}) condition and target, got {x.shape} and {y.shape}")
        cross = np.einsum("nchw,nchw->ch", x, y)
        energy = np.einsum("nchw,nchw->ch", x, x)
        ridge = GAIN_RIDGE * energy.max()
        gain = cross / (energy + ridge) if ridge > 0 else np.zeros_like(cross)
        self.condition_gain.data = gain[None, :, :, None].copy()
        return gain


class Discriminator(Module):
    """D(x, y): probability that y is the true image for condition x"""

    def __init__(self, spec: DiscriminatorSpec, rng: np.random.Generator):
        super().__init__()
        self.spec = spec
        self.blocks = ModuleList()
        in_channels = spec.input_channels
        for channels in spec.channels:
            self.blocks.append(ConvBlock(in_channels, channels, rng, leaky=True))
            in_channels = channels
        self.head = Dense(spec.head_features, 1, rng=rng)

    def forward(self, x: Union[Tensor, np.ndarray], y: Union[Tensor, np.ndarray]) -> Tensor:
        h = F.concat_channels(as_tensor(x), as_tensor(y))
        if h.shape[1] != self.spec.input_channels:
            raise ShapeError(f"Discriminator expects {self.spec.input_channels} stacked channels, got {h.shape[1]}")
        for block in self.blocks:
            h = block(h)
        return F.sigmoid(self.head(F.flatten(h)))


def build_generator(spec: GeneratorSpec, seed: int) -> Generator:
    return Generator(spec, np.random.default_rng(seed))


def build_discriminator(spec: DiscriminatorSpec, seed: int) -> Discriminator:
    return Discriminator(spec, np.random.default_rng(seed))
