"""Central finite-difference verification of analytic gradients"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping

import numpy as np

from src.autodiff.tensor import Tensor, no_grad

Builder = Callable[[Dict[str, Tensor]], Tensor]

# Relative errors use max(|numeric|, REL_FLOOR) as denominator
REL_FLOOR = 1e-4


@dataclass(frozen=True)
class GradCheckEntry:
    name: str
    max_rel_error: float
    n_checked: int
    worst_index: tuple


@dataclass
class GradCheckReport:
    tolerance: float
    entries: List[GradCheckEntry] = field(default_factory=list)

    @property
    def max_error(self) -> float:
        return max((e.max_rel_error for e in self.entries), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    @property
    def failures(self) -> List[GradCheckEntry]:
        return [e for e in self.entries if e.max_rel_error > self.tolerance]


def _evaluate(build: Builder, inputs: Mapping[str, np.ndarray]) -> float:
    with no_grad():
        tensors = {name: Tensor(value) for name, value in inputs.items()}
        return float(build(tensors).data)


def grad_check(
    build: Builder,
    inputs: Mapping[str, np.ndarray],
    tolerance: float = 1e-4,
    h: float = 1e-5,
    max_checks: int = 100,
    seed: int = 0,
) -> GradCheckReport:
    """Compare backward() against central differences for every named input

    build receives {name: Tensor} and returns a scalar loss. Up to max_checks entries
    per input are checked, chosen with a seeded generator. Gradient failures are
    reported, never raised.
    """
    rng = np.random.default_rng(seed)
    base = {name: np.array(value, dtype=np.float64) for name, value in inputs.items()}

    tensors = {name: Tensor(value.copy(), requires_grad=True, name=name) for name, value in base.items()}
    build(tensors).backward()

    report = GradCheckReport(tolerance=tolerance)
    for name, value in base.items():
        analytic = tensors[name].grad
        if analytic is None:
            analytic = np.zeros_like(value)
        flat_count = value.size
        picks = np.arange(flat_count) if flat_count <= max_checks else rng.choice(flat_count, size=max_checks, replace=False)

        worst, worst_index = 0.0, ()
        for flat in picks:
            index = np.unravel_index(int(flat), value.shape)
            plus = dict(base)
            minus = dict(base)
            plus[name] = value.copy()
            minus[name] = value.copy()
            plus[name][index] += h
            minus[name][index] -= h
            numeric = (_evaluate(build, plus) - _evaluate(build, minus)) / (2 * h)
            error = abs(analytic[index] - numeric) / max(abs(numeric), REL_FLOOR)
            if error > worst:
                worst, worst_index = float(error), tuple(int(i) for i in index)
        report.entries.append(GradCheckEntry(name=name, max_rel_error=worst, n_checked=len(picks), worst_index=worst_index))
    return report
