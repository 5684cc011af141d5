"""Numpy implementations of the hot kernels.

These are the reference semantics; `mario._kernels_cy` is a compiled twin
selected at import time by `mario.backend` when available.  Every function
works on float32 or float64 arrays and touches only the last axis (rows),
so callers flatten leading dimensions first.
"""

import numpy as np
from scipy.special import erf

BACKEND_NAME = "python"

_INV_SQRT2 = 0.7071067811865476
_INV_SQRT2PI = 0.3989422804014327


def softmax_lastdim(x):
    m = np.max(x, axis=-1, keepdims=True)
    e = np.exp(x - m)
    return e / np.sum(e, axis=-1, keepdims=True)


def softmax_lastdim_grad(y, dy):
    # dx = y * (dy - sum(dy*y))
    s = np.sum(dy * y, axis=-1, keepdims=True)
    return y * (dy - s)


def log_softmax_lastdim(x):
    m = np.max(x, axis=-1, keepdims=True)
    z = x - m
    lse = np.log(np.sum(np.exp(z), axis=-1, keepdims=True))
    return z - lse


def log_softmax_lastdim_grad(y, dy):
    # dx = dy - exp(y) * sum(dy)
    s = np.sum(dy, axis=-1, keepdims=True)
    return dy - np.exp(y) * s


def gelu(x):
    return (0.5 * x * (1.0 + erf(x * x.dtype.type(_INV_SQRT2)))).astype(x.dtype, copy=False)


def gelu_grad(x, dy):
    dt = x.dtype.type
    cdf = 0.5 * (1.0 + erf(x * dt(_INV_SQRT2)))
    pdf = np.exp(-0.5 * x * x) * dt(_INV_SQRT2PI)
    return (dy * (cdf + x * pdf)).astype(x.dtype, copy=False)


def layernorm(x, gain, bias, eps):
    mean = np.mean(x, axis=-1, keepdims=True)
    var = np.mean((x - mean) ** 2, axis=-1, keepdims=True)
    rstd = 1.0 / np.sqrt(var + eps)
    xhat = (x - mean) * rstd
    return xhat * gain + bias, mean[..., 0], rstd[..., 0]


def layernorm_grad(x, gain, mean, rstd, dy):
    xhat = (x - mean[..., None]) * rstd[..., None]
    dgain = np.sum(dy * xhat, axis=tuple(range(x.ndim - 1)))
    dbias = np.sum(dy, axis=tuple(range(x.ndim - 1)))
    dxhat = dy * gain
    m1 = np.mean(dxhat, axis=-1, keepdims=True)
    m2 = np.mean(dxhat * xhat, axis=-1, keepdims=True)
    dx = rstd[..., None] * (dxhat - m1 - xhat * m2)
    return dx.astype(x.dtype, copy=False), dgain.astype(x.dtype, copy=False), dbias.astype(x.dtype, copy=False)


def scatter_add_rows(acc, idx, rows):
    """acc[idx[i]] += rows[i], duplicates accumulated (embedding-table grad)."""
    np.add.at(acc, idx, rows)


def adam_update(p, g, m, v, lr, beta1, beta2, eps, bc1, bc2):
    """In-place Adam step; bc1/bc2 are the bias corrections 1-beta^t."""
    m *= beta1
    m += (1.0 - beta1) * g
    v *= beta2
    v += (1.0 - beta2) * g * g
    p -= lr * (m / bc1) / (np.sqrt(v / bc2) + eps)
