"""Reverse-mode differentiable arrays

Each Tensor produced by an operation keeps its parents and a gradient function mapping
the upstream gradient to one gradient per parent. ``backward`` walks the graph in
reverse topological order and accumulates into the ``grad`` of leaf tensors.
"""

import threading
from contextlib import contextmanager
from typing import Callable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from src.util.errors import GraphError, ShapeError

GradFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

_state = threading.local()


def is_grad_enabled() -> bool:
    return getattr(_state, "enabled", True)


@contextmanager
def no_grad() -> Iterator[None]:
    """Build no graph inside the block (per thread)"""
    previous = is_grad_enabled()
    _state.enabled = False
    try:
        yield
    finally:
        _state.enabled = previous


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum grad down to shape after numpy broadcasting"""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor:
    def __init__(self, data, requires_grad: bool = False, name: str = ""):
        self.data = np.array(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self.name = name
        self.parents: Tuple["Tensor", ...] = ()
        self.grad_fn: Optional[GradFn] = None
        self.op = ""

    @classmethod
    def from_op(cls, data: np.ndarray, parents: Sequence["Tensor"], grad_fn: GradFn, op: str) -> "Tensor":
        """Result of an operation; records the graph only when a parent needs gradients"""
        out = cls.__new__(cls)
        out.data = np.asarray(data, dtype=np.float64)
        out.grad = None
        out.name = ""
        out.op = op
        out.requires_grad = is_grad_enabled() and any(p.requires_grad for p in parents)
        if out.requires_grad:
            out.parents = tuple(parents)
            out.grad_fn = grad_fn
        else:
            out.parents = ()
            out.grad_fn = None
        return out

    def __repr__(self) -> str:
        label = self.name or self.op or "tensor"
        return f"Tensor({label}, shape={self.shape}, requires_grad={self.requires_grad})"

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    @property
    def is_leaf(self) -> bool:
        return self.grad_fn is None

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        return float(self.data.reshape(-1)[0]) if self.data.size == 1 else float("nan")

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def zero_grad(self) -> None:
        self.grad = np.zeros_like(self.data)

    def _topological_order(self):
        order = []
        visited = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node.parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
        return order

    def backward(self) -> None:
        """Accumulate d(self)/d(leaf) into every reachable leaf that requires grad"""
        if self.data.size != 1:
            raise GraphError(f"backward needs a scalar loss, got shape {self.shape}")
        if not self.requires_grad:
            raise GraphError("Loss does not depend on any tensor that requires grad")

        grads = {id(self): np.ones_like(self.data)}
        for node in reversed(self._topological_order()):
            g = grads.pop(id(node), None)
            if g is None:
                continue
            if node.grad_fn is None:
                node.grad = g.copy() if node.grad is None else node.grad + g
                continue
            for parent, pg in zip(node.parents, node.grad_fn(g)):
                if pg is None or not parent.requires_grad:
                    continue
                key = id(parent)
                grads[key] = grads[key] + pg if key in grads else pg

    # elementwise arithmetic

    def __add__(self, other: Union["Tensor", float]) -> "Tensor":
        other = as_tensor(other)
        a_shape, b_shape = self.shape, other.shape
        return Tensor.from_op(
            self.data + other.data,
            (self, other),
            lambda g: (_unbroadcast(g, a_shape), _unbroadcast(g, b_shape)),
            "add",
        )

    __radd__ = __add__

    def __neg__(self) -> "Tensor":
        return Tensor.from_op(-self.data, (self,), lambda g: (-g,), "neg")

    def __sub__(self, other: Union["Tensor", float]) -> "Tensor":
        return self + (-as_tensor(other))

    def __rsub__(self, other: Union["Tensor", float]) -> "Tensor":
        return as_tensor(other) + (-self)

    def __mul__(self, other: Union["Tensor", float]) -> "Tensor":
        other = as_tensor(other)
        a, b = self.data, other.data
        return Tensor.from_op(
            a * b,
            (self, other),
            lambda g: (_unbroadcast(g * b, a.shape), _unbroadcast(g * a, b.shape)),
            "mul",
        )

    __rmul__ = __mul__

    # reductions and shape

    def sum(self) -> "Tensor":
        shape = self.shape
        return Tensor.from_op(self.data.sum(), (self,), lambda g: (np.broadcast_to(g, shape).copy(),), "sum")

    def mean(self) -> "Tensor":
        shape, count = self.shape, self.size
        return Tensor.from_op(self.data.mean(), (self,), lambda g: (np.broadcast_to(g / count, shape).copy(),), "mean")

    def reshape(self, *shape) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        original = self.shape
        try:
            data = self.data.reshape(shape)
        except ValueError as e:
            raise ShapeError(f"Cannot reshape {original} to {shape}: {e}")
        return Tensor.from_op(data, (self,), lambda g: (g.reshape(original),), "reshape")

    def flatten(self) -> "Tensor":
        """Keep the leading (batch) axis, flatten the rest"""
        return self.reshape(self.shape[0], -1)


def as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)
