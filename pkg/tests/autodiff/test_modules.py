import numpy as np
import pytest

from src.autodiff.modules import BatchNorm2d, Conv2d, ConvTranspose2d, Dense, Module, ModuleList, Parameter
from src.autodiff.tensor import Tensor
from src.util.errors import CheckpointError, ShapeError


class Block(Module):
    def __init__(self):
        super().__init__()
        self.conv = Conv2d(2, 4, 3, padding=1)
        self.norm = BatchNorm2d(4)
        self.heads = ModuleList([Dense(4, 2), Dense(2, 1)])
        self.scale = Parameter(np.ones(1))

    def forward(self, x):
        return self.norm(self.conv(x))


def test_parameter_and_buffer_naming_order():
    block = Block()
    assert [name for name, _ in block.named_parameters()] == [
        "scale",
        "conv.weight",
        "conv.bias",
        "norm.gamma",
        "norm.beta",
        "heads.0.weight",
        "heads.0.bias",
        "heads.1.weight",
        "heads.1.bias",
    ]
    assert [name for name, _ in block.named_buffers()] == ["norm.running_mean", "norm.running_var"]
    assert list(block.state_dict())[-2:] == ["norm.running_mean", "norm.running_var"]


def test_state_dict_round_trip():
    """Test that loading a state dict reproduces outputs exactly"""
    a, b = Block(), Block()
    for param in b.parameters():
        param.data += 1.0
    b.load_state_dict(a.state_dict())
    x = Tensor(np.random.default_rng(0).standard_normal((2, 2, 4, 4)))
    np.testing.assert_array_equal(a(x).data, b(x).data)

    state = a.state_dict()
    state["conv.weight"][...] = 0.0
    assert a.conv.weight.data.any()


@pytest.mark.parametrize(
    "mutate,parameter",
    [
        (lambda s: s.pop("norm.gamma"), "norm.gamma"),
        (lambda s: s.update({"extra": np.zeros(1)}), "extra"),
        (lambda s: s.update({"conv.bias": np.zeros(5)}), "conv.bias"),
    ],
)
def test_load_state_dict_errors(mutate, parameter):
    block = Block()
    state = block.state_dict()
    mutate(state)
    with pytest.raises(CheckpointError) as info:
        block.load_state_dict(state)
    assert info.value.parameter == parameter


def test_train_eval_and_grad_flags():
    block = Block()
    block.eval()
    assert not block.training and not block.norm.training and not block.heads[1].training
    block.train()
    assert block.norm.training

    block.requires_grad_(False)
    assert not any(p.requires_grad for p in block.parameters())
    block.zero_grad()
    assert all(not p.grad.any() for p in block.parameters())


def test_layer_shapes():
    x = Tensor(np.ones((1, 2, 8, 8)))
    assert Conv2d(2, 3, 4, stride=2, padding=1)(x).shape == (1, 3, 4, 4)
    assert ConvTranspose2d(2, 3, 4, stride=2, padding=1)(x).shape == (1, 3, 16, 16)
    assert Dense(5, 2)(Tensor(np.ones((3, 5)))).shape == (3, 2)
    assert len(ModuleList([Dense(1, 1)] * 3)) == 3
    with pytest.raises(ShapeError):
        Dense(0, 2)


def test_initialization_is_seeded():
    a = Conv2d(2, 3, 3, rng=np.random.default_rng(5))
    b = Conv2d(2, 3, 3, rng=np.random.default_rng(5))
    np.testing.assert_array_equal(a.weight.data, b.weight.data)
    assert not a.bias.data.any()
