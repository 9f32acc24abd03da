"""Adam optimizer over named parameters"""

from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from src.autodiff.modules import Parameter
from src.util.errors import OptimizerError


@dataclass
class AdamState:
    lr: float = 2e-4
    beta1: float = 0.5
    beta2: float = 0.999
    epsilon: float = 1e-8
    step: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise OptimizerError(f"Adam betas must lie in (0, 1), got {self.beta1}, {self.beta2}")
        if self.lr <= 0:
            raise OptimizerError(f"Learning rate must be positive, got {self.lr}")


NamedParams = Sequence[Union[Parameter, Tuple[str, Parameter]]]


def _named(params: NamedParams):
    named = []
    for index, item in enumerate(params):
        if isinstance(item, Parameter):
            named.append((item.name or f"param{index}", item))
        else:
            named.append((item[0], item[1]))
    return named


def adam_step(params: NamedParams, state: AdamState) -> None:
    """Bias-corrected Adam update; gradients are zeroed after

    params are Parameters or (name, Parameter) pairs; moments are keyed by name.
    """
    params = _named(params)
    for name, param in params:
        if param.grad is None:
            raise OptimizerError(f"Parameter {name!r} has no gradient")
        for moments in (state.m, state.v):
            if name in moments and moments[name].shape != param.data.shape:
                raise OptimizerError(
                    f"Moment shape {moments[name].shape} does not match parameter {name!r} {param.data.shape}"
                )

    state.step += 1
    t = state.step
    correction1 = 1.0 - state.beta1**t
    correction2 = 1.0 - state.beta2**t
    for name, param in params:
        g = param.grad
        m = state.m.setdefault(name, np.zeros_like(param.data))
        v = state.v.setdefault(name, np.zeros_like(param.data))
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        param.data -= state.lr * m_hat / (np.sqrt(v_hat) + state.epsilon)
        param.grad = np.zeros_like(param.data)

