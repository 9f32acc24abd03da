"""Differentiable layer operations on NCHW / ND tensors"""

import enum
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import special

from src.autodiff.tensor import Tensor
from src.util.errors import ShapeError, StatError

PROBABILITY_CLAMP = 1e-7


def _conv_out(size: int, kernel: int, stride: int, padding: int) -> int:
    return (size + 2 * padding - kernel) // stride + 1


def _windows(padded: np.ndarray, kh: int, kw: int, stride: int, out_h: int, out_w: int) -> np.ndarray:
    """(N, C, out_h, out_w, kh, kw) view of strided kernel windows"""
    view = sliding_window_view(padded, (kh, kw), axis=(2, 3))
    return view[:, :, ::stride, ::stride][:, :, :out_h, :out_w]


def conv2d(x: Tensor, weight: Tensor, bias: Optional[Tensor] = None, stride: int = 1, padding: int = 0) -> Tensor:
    """Cross-correlation of x (N, C, H, W) with weight (O, C, kh, kw)"""
    if x.ndim != 4 or weight.ndim != 4:
        raise ShapeError(f"conv2d expects 4-d input and weight, got {x.shape} and {weight.shape}")
    n, c, h, w = x.shape
    o, wc, kh, kw = weight.shape
    if wc != c:
        raise ShapeError(f"conv2d input has {c} channels, weight expects {wc}")
    if bias is not None and bias.shape != (o,):
        raise ShapeError(f"conv2d bias shape {bias.shape} does not match {o} output channels")
    if stride < 1 or padding < 0:
        raise ShapeError(f"Invalid stride {stride} or padding {padding}")
    out_h, out_w = _conv_out(h, kh, stride, padding), _conv_out(w, kw, stride, padding)
    if out_h < 1 or out_w < 1:
        raise ShapeError(f"conv2d output would be empty for input {x.shape}, kernel {(kh, kw)}")

    padded = np.pad(x.data, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    cols = _windows(padded, kh, kw, stride, out_h, out_w)
    out = np.einsum("nchwij,ocij->nohw", cols, weight.data, optimize=True)
    if bias is not None:
        out = out + bias.data[None, :, None, None]

    w_data = weight.data

    def grad_fn(g):
        gw = np.einsum("nchwij,nohw->ocij", cols, g, optimize=True)
        gcols = np.einsum("nohw,ocij->nchwij", g, w_data, optimize=True)
        gpad = np.zeros_like(padded)
        for i in range(kh):
            for j in range(kw):
                gpad[:, :, i : i + stride * out_h : stride, j : j + stride * out_w : stride] += gcols[..., i, j]
        gx = gpad[:, :, padding : padding + h, padding : padding + w]
        gb = g.sum(axis=(0, 2, 3)) if bias is not None else None
        return gx, gw, gb

    parents = (x, weight) if bias is None else (x, weight, bias)
    return Tensor.from_op(out, parents, grad_fn, "conv2d")


def conv_transpose2d(
    x: Tensor,
    weight: Tensor,
    bias: Optional[Tensor] = None,
    stride: int = 1,
    padding: int = 0,
    output_padding: int = 0,
) -> Tensor:
    """Adjoint of conv2d with the same weight (O, C, kh, kw): maps O channels to C

    Output size is (H - 1) * stride - 2 * padding + kh + output_padding.
    """
    if x.ndim != 4 or weight.ndim != 4:
        raise ShapeError(f"conv_transpose2d expects 4-d input and weight, got {x.shape} and {weight.shape}")
    n, o, h, w = x.shape
    wo, c, kh, kw = weight.shape
    if wo != o:
        raise ShapeError(f"conv_transpose2d input has {o} channels, weight expects {wo}")
    if bias is not None and bias.shape != (c,):
        raise ShapeError(f"conv_transpose2d bias shape {bias.shape} does not match {c} output channels")
    if stride < 1 or padding < 0 or not 0 <= output_padding < stride:
        raise ShapeError(f"Invalid stride {stride}, padding {padding} or output_padding {output_padding}")
    full_h = (h - 1) * stride + kh + output_padding
    full_w = (w - 1) * stride + kw + output_padding
    out_h, out_w = full_h - 2 * padding, full_w - 2 * padding
    if out_h < 1 or out_w < 1:
        raise ShapeError(f"conv_transpose2d output would be empty for input {x.shape}")

    w_data = weight.data
    x_data = x.data
    cols = np.einsum("nohw,ocij->nchwij", x_data, w_data, optimize=True)
    full = np.zeros((n, c, full_h, full_w))
    for i in range(kh):
        for j in range(kw):
            full[:, :, i : i + stride * h : stride, j : j + stride * w : stride] += cols[..., i, j]
    out = full[:, :, padding : padding + out_h, padding : padding + out_w]
    if bias is not None:
        out = out + bias.data[None, :, None, None]

    def grad_fn(g):
        gfull = np.zeros((n, c, full_h, full_w))
        gfull[:, :, padding : padding + out_h, padding : padding + out_w] = g
        gcols = _windows(gfull, kh, kw, stride, h, w)
        gx = np.einsum("nchwij,ocij->nohw", gcols, w_data, optimize=True)
        gw = np.einsum("nchwij,nohw->ocij", gcols, x_data, optimize=True)
        gb = g.sum(axis=(0, 2, 3)) if bias is not None else None
        return gx, gw, gb

    parents = (x, weight) if bias is None else (x, weight, bias)
    return Tensor.from_op(np.ascontiguousarray(out), parents, grad_fn, "conv_transpose2d")


def batch_norm2d(
    x: Tensor,
    gamma: Tensor,
    beta: Tensor,
    running_mean: np.ndarray,
    running_var: np.ndarray,
    training: bool = True,
    momentum: float = 0.1,
    eps: float = 1e-5,
) -> Tensor:
    """Per-channel standardization followed by the affine map gamma * x_hat + beta

    Training mode uses batch statistics (population variance) and updates the running
    statistics in place, with the unbiased variance, by exponential moving average.
    """
    if x.ndim != 4:
        raise ShapeError(f"batch_norm2d expects NCHW input, got {x.shape}")
    n, c, h, w = x.shape
    if gamma.shape != (c,) or beta.shape != (c,):
        raise ShapeError(f"batch_norm2d affine parameters must have shape ({c},)")
    count = n * h * w
    axes = (0, 2, 3)

    if training:
        if count < 2:
            raise StatError(f"Batch statistics need at least 2 values per channel, got {count}")
        mean = x.data.mean(axis=axes)
        var = x.data.var(axis=axes)
        running_mean *= 1 - momentum
        running_mean += momentum * mean
        running_var *= 1 - momentum
        running_var += momentum * var * count / (count - 1)
    else:
        mean = running_mean.copy()
        var = running_var.copy()

    inv_std = 1.0 / np.sqrt(var + eps)
    x_hat = (x.data - mean[None, :, None, None]) * inv_std[None, :, None, None]
    g_data = gamma.data
    out = g_data[None, :, None, None] * x_hat + beta.data[None, :, None, None]

    def grad_fn(g):
        ggamma = (g * x_hat).sum(axis=axes)
        gbeta = g.sum(axis=axes)
        dx_hat = g * g_data[None, :, None, None]
        if training:
            sum_dx_hat = dx_hat.sum(axis=axes)[None, :, None, None]
            sum_dx_hat_x_hat = (dx_hat * x_hat).sum(axis=axes)[None, :, None, None]
            gx = (inv_std[None, :, None, None] / count) * (count * dx_hat - sum_dx_hat - x_hat * sum_dx_hat_x_hat)
        else:
            gx = dx_hat * inv_std[None, :, None, None]
        return gx, ggamma, gbeta

    return Tensor.from_op(out, (x, gamma, beta), grad_fn, "batch_norm2d")


class Activation(str, enum.Enum):
    RELU = "relu"
    LEAKY_RELU = "leaky_relu"
    SIGMOID = "sigmoid"
    TANH = "tanh"


def activation(x: Tensor, kind: Activation, alpha: float = 0.2) -> Tensor:
    """Elementwise nonlinearity; the ReLU subgradient at 0 is 0"""
    kind = Activation(kind)
    data = x.data
    if kind == Activation.RELU:
        mask = data > 0
        return Tensor.from_op(np.where(mask, data, 0.0), (x,), lambda g: (g * mask,), "relu")
    if kind == Activation.LEAKY_RELU:
        slope = np.where(data > 0, 1.0, alpha)
        return Tensor.from_op(data * slope, (x,), lambda g: (g * slope,), "leaky_relu")
    if kind == Activation.SIGMOID:
        s = special.expit(data)
        return Tensor.from_op(s, (x,), lambda g: (g * s * (1.0 - s),), "sigmoid")
    t = np.tanh(data)
    return Tensor.from_op(t, (x,), lambda g: (g * (1.0 - t * t),), "tanh")


def relu(x: Tensor) -> Tensor:
    return activation(x, Activation.RELU)


def leaky_relu(x: Tensor, alpha: float = 0.2) -> Tensor:
    return activation(x, Activation.LEAKY_RELU, alpha)


def sigmoid(x: Tensor) -> Tensor:
    return activation(x, Activation.SIGMOID)


def tanh(x: Tensor) -> Tensor:
    return activation(x, Activation.TANH)


def dense(x: Tensor, weight: Tensor, bias: Optional[Tensor] = None) -> Tensor:
    """x (N, D_in) @ weight (D_in, D_out) + bias (D_out,)"""
    if x.ndim != 2 or weight.ndim != 2 or x.shape[1] != weight.shape[0]:
        raise ShapeError(f"dense cannot map input {x.shape} with weight {weight.shape}")
    if bias is not None and bias.shape != (weight.shape[1],):
        raise ShapeError(f"dense bias shape {bias.shape} does not match {weight.shape[1]} outputs")
    x_data, w_data = x.data, weight.data
    out = x_data @ w_data
    if bias is not None:
        out = out + bias.data

    def grad_fn(g):
        gb = g.sum(axis=0) if bias is not None else None
        return g @ w_data.T, x_data.T @ g, gb

    parents = (x, weight) if bias is None else (x, weight, bias)
    return Tensor.from_op(out, parents, grad_fn, "dense")


def concat_channels(*tensors: Tensor) -> Tensor:
    """Stack NCHW tensors along the channel axis"""
    if len(tensors) < 2:
        raise ShapeError("concat_channels needs at least two tensors")
    first = tensors[0]
    for t in tensors:
        if t.ndim != 4 or t.shape[0] != first.shape[0] or t.shape[2:] != first.shape[2:]:
            raise ShapeError(f"Cannot concatenate {t.shape} with {first.shape} along channels")
    bounds = np.cumsum([0] + [t.shape[1] for t in tensors])

    def grad_fn(g):
        return tuple(g[:, bounds[i] : bounds[i + 1]] for i in range(len(tensors)))

    return Tensor.from_op(np.concatenate([t.data for t in tensors], axis=1), tensors, grad_fn, "concat")


def slice_channels(x: Tensor, start: int, stop: int) -> Tensor:
    if x.ndim != 4 or not 0 <= start < stop <= x.shape[1]:
        raise ShapeError(f"Cannot slice channels [{start}, {stop}) of {x.shape}")
    shape = x.shape

    def grad_fn(g):
        full = np.zeros(shape)
        full[:, start:stop] = g
        return (full,)

    return Tensor.from_op(x.data[:, start:stop].copy(), (x,), grad_fn, "slice")


def flatten(x: Tensor) -> Tensor:
    return x.flatten()


def bce_loss(prediction: Tensor, target_is_real: bool) -> Tensor:
    """Mean of -log(p) (real target) or -log(1 - p) (fake target)

    p is clamped to [1e-7, 1 - 1e-7]; the gradient is taken at the clamped value.
    """
    p = np.clip(prediction.data, PROBABILITY_CLAMP, 1.0 - PROBABILITY_CLAMP)
    count = p.size
    if target_is_real:
        loss = -np.log(p).mean()

        def grad_fn(g):
            return (-g / (p * count),)

    else:
        loss = -np.log1p(-p).mean()

        def grad_fn(g):
            return (g / ((1.0 - p) * count),)

    return Tensor.from_op(loss, (prediction,), grad_fn, "bce")


def l1_loss(a: Tensor, b: Tensor) -> Tensor:
    """Mean absolute difference; gradient sign(a - b) / count (0 at ties)"""
    if a.shape != b.shape:
        raise ShapeError(f"l1_loss needs equal shapes, got {a.shape} and {b.shape}")
    diff = a.data - b.data
    count = diff.size
    sign = np.sign(diff)
    return Tensor.from_op(np.abs(diff).mean(), (a, b), lambda g: (g * sign / count, -g * sign / count), "l1")
