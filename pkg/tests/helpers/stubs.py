"""Small network specs and stand-in generators for tests"""

from src.autodiff.tensor import Tensor

# Networks small enough that a few training steps take well under a second
SMALL_GENERATOR = {"noise_dim": 4, "encoder_channels": [4, 8, 8, 8], "decoder_channels": [8, 8, 4, 4]}
SMALL_DISCRIMINATOR = {"channels": [4, 8]}


class ScalingGenerator:
    """Returns the condition image times gain, ignoring z"""

    def __init__(self, gain: float = 1.0, noise_dim: int = 2):
        self.gain = gain
        self._noise_dim = noise_dim
        self.calls = 0

    @property
    def noise_dim(self) -> int:
        return self._noise_dim

    def __call__(self, x: Tensor, z: Tensor) -> Tensor:
        self.calls += 1
        return Tensor(x.data * self.gain)


class NoisyGenerator(ScalingGenerator):
    """Scales the condition image by 1 + 0.1 * z[0], so realizations differ"""

    def __call__(self, x: Tensor, z: Tensor) -> Tensor:
        self.calls += 1
        factor = 1.0 + 0.1 * z.data[:, 0]
        return Tensor(x.data * factor[:, None, None, None] * self.gain)
