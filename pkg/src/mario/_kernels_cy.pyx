# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of `mario._kernels_py`.

Same function surface and semantics; per-row loops with double-precision
accumulation for the reductions.  Built optionally by setup.py; `mario.backend`
falls back to the numpy kernels when this module is absent.
"""

import numpy as np

from libc.math cimport erf, exp, log, sqrt

BACKEND_NAME = "cython"

ctypedef fused real:
    float
    double

cdef double _INV_SQRT2 = 0.7071067811865476
cdef double _INV_SQRT2PI = 0.3989422804014327


def _rows(x):
    n = x.shape[-1]
    return np.ascontiguousarray(x).reshape(-1, n)


def _softmax2d(real[:, ::1] x, real[:, ::1] out):
    cdef Py_ssize_t r, c, nr = x.shape[0], nc = x.shape[1]
    cdef double m, s
    for r in range(nr):
        m = x[r, 0]
        for c in range(1, nc):
            if x[r, c] > m:
                m = x[r, c]
        s = 0.0
        for c in range(nc):
            out[r, c] = <real> exp(x[r, c] - m)
            s += out[r, c]
        for c in range(nc):
            out[r, c] = <real> (out[r, c] / s)


def softmax_lastdim(x):
    x2 = _rows(x)
    out = np.empty_like(x2)
    _softmax2d(x2, out)
    return out.reshape(x.shape)


def _softmax2d_grad(real[:, ::1] y, real[:, ::1] dy, real[:, ::1] dx):
    cdef Py_ssize_t r, c, nr = y.shape[0], nc = y.shape[1]
    cdef double s
    for r in range(nr):
        s = 0.0
        for c in range(nc):
            s += dy[r, c] * y[r, c]
        for c in range(nc):
            dx[r, c] = <real> (y[r, c] * (dy[r, c] - s))


def softmax_lastdim_grad(y, dy):
    y2 = _rows(y)
    dy2 = _rows(dy)
    dx = np.empty_like(y2)
    _softmax2d_grad(y2, dy2, dx)
    return dx.reshape(y.shape)


def _logsoftmax2d(real[:, ::1] x, real[:, ::1] out):
    cdef Py_ssize_t r, c, nr = x.shape[0], nc = x.shape[1]
    cdef double m, s
    for r in range(nr):
        m = x[r, 0]
        for c in range(1, nc):
            if x[r, c] > m:
                m = x[r, c]
        s = 0.0
        for c in range(nc):
            s += exp(x[r, c] - m)
        s = log(s)
        for c in range(nc):
            out[r, c] = <real> (x[r, c] - m - s)


def log_softmax_lastdim(x):
    x2 = _rows(x)
    out = np.empty_like(x2)
    _logsoftmax2d(x2, out)
    return out.reshape(x.shape)


def _logsoftmax2d_grad(real[:, ::1] y, real[:, ::1] dy, real[:, ::1] dx):
    cdef Py_ssize_t r, c, nr = y.shape[0], nc = y.shape[1]
    cdef double s
    for r in range(nr):
        s = 0.0
        for c in range(nc):
            s += dy[r, c]
        for c in range(nc):
            dx[r, c] = <real> (dy[r, c] - exp(y[r, c]) * s)


def log_softmax_lastdim_grad(y, dy):
    y2 = _rows(y)
    dy2 = _rows(dy)
    dx = np.empty_like(y2)
    _logsoftmax2d_grad(y2, dy2, dx)
    return dx.reshape(y.shape)


def _gelu1d(real[::1] x, real[::1] out):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double v
    for i in range(n):
        v = x[i]
        out[i] = <real> (0.5 * v * (1.0 + erf(v * _INV_SQRT2)))


def gelu(x):
    flat = np.ascontiguousarray(x).reshape(-1)
    out = np.empty_like(flat)
    _gelu1d(flat, out)
    return out.reshape(x.shape)


def _gelu1d_grad(real[::1] x, real[::1] dy, real[::1] dx):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double v, cdf, pdf
    for i in range(n):
        v = x[i]
        cdf = 0.5 * (1.0 + erf(v * _INV_SQRT2))
        pdf = exp(-0.5 * v * v) * _INV_SQRT2PI
        dx[i] = <real> (dy[i] * (cdf + v * pdf))


def gelu_grad(x, dy):
    flat = np.ascontiguousarray(x).reshape(-1)
    dflat = np.ascontiguousarray(dy).reshape(-1)
    dx = np.empty_like(flat)
    _gelu1d_grad(flat, dflat, dx)
    return dx.reshape(x.shape)


def _layernorm2d(real[:, ::1] x, real[::1] gain, real[::1] bias, double eps,
                 real[:, ::1] out, real[::1] mean, real[::1] rstd):
    cdef Py_ssize_t r, c, nr = x.shape[0], nc = x.shape[1]
    cdef double mu, var, rs, d
    for r in range(nr):
        mu = 0.0
        for c in range(nc):
            mu += x[r, c]
        mu /= nc
        var = 0.0
        for c in range(nc):
            d = x[r, c] - mu
            var += d * d
        var /= nc
        rs = 1.0 / sqrt(var + eps)
        mean[r] = <real> mu
        rstd[r] = <real> rs
        for c in range(nc):
            out[r, c] = <real> ((x[r, c] - mu) * rs * gain[c] + bias[c])


def layernorm(x, gain, bias, eps):
    x2 = _rows(x)
    out = np.empty_like(x2)
    mean = np.empty(x2.shape[0], dtype=x.dtype)
    rstd = np.empty(x2.shape[0], dtype=x.dtype)
    _layernorm2d(x2, np.ascontiguousarray(gain), np.ascontiguousarray(bias),
                 float(eps), out, mean, rstd)
    return out.reshape(x.shape), mean.reshape(x.shape[:-1]), rstd.reshape(x.shape[:-1])


def _layernorm2d_grad(real[:, ::1] x, real[::1] gain, real[::1] mean,
                      real[::1] rstd, real[:, ::1] dy,
                      real[:, ::1] dx, real[::1] dgain, real[::1] dbias):
    cdef Py_ssize_t r, c, nr = x.shape[0], nc = x.shape[1]
    cdef double m1, m2, xh, dxh
    for r in range(nr):
        m1 = 0.0
        m2 = 0.0
        for c in range(nc):
            xh = (x[r, c] - mean[r]) * rstd[r]
            dxh = dy[r, c] * gain[c]
            m1 += dxh
            m2 += dxh * xh
            dgain[c] += <real> (dy[r, c] * xh)
            dbias[c] += dy[r, c]
        m1 /= nc
        m2 /= nc
        for c in range(nc):
            xh = (x[r, c] - mean[r]) * rstd[r]
            dxh = dy[r, c] * gain[c]
            dx[r, c] = <real> (rstd[r] * (dxh - m1 - xh * m2))


def layernorm_grad(x, gain, mean, rstd, dy):
    x2 = _rows(x)
    dy2 = _rows(dy)
    dx = np.empty_like(x2)
    dgain = np.zeros(x2.shape[1], dtype=x.dtype)
    dbias = np.zeros(x2.shape[1], dtype=x.dtype)
    _layernorm2d_grad(x2, np.ascontiguousarray(gain),
                      np.ascontiguousarray(mean).reshape(-1),
                      np.ascontiguousarray(rstd).reshape(-1), dy2,
                      dx, dgain, dbias)
    return dx.reshape(x.shape), dgain, dbias


def _scatter_add2d(real[:, ::1] acc, long long[::1] idx, real[:, ::1] rows):
    cdef Py_ssize_t i, c, n = idx.shape[0], nc = rows.shape[1]
    cdef Py_ssize_t j
    for i in range(n):
        j = <Py_ssize_t> idx[i]
        for c in range(nc):
            acc[j, c] += rows[i, c]


def scatter_add_rows(acc, idx, rows):
    _scatter_add2d(acc, np.ascontiguousarray(idx, dtype=np.int64),
                   np.ascontiguousarray(rows))


def _adam1d(real[::1] p, real[::1] g, real[::1] m, real[::1] v,
            double lr, double beta1, double beta2, double eps,
            double bc1, double bc2):
    cdef Py_ssize_t i, n = p.shape[0]
    cdef double mi, vi
    for i in range(n):
        mi = beta1 * m[i] + (1.0 - beta1) * g[i]
        vi = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i]
        m[i] = <real> mi
        v[i] = <real> vi
        p[i] -= <real> (lr * (mi / bc1) / (sqrt(vi / bc2) + eps))


def adam_update(p, g, m, v, lr, beta1, beta2, eps, bc1, bc2):
    _adam1d(p.reshape(-1), np.ascontiguousarray(g).reshape(-1),
            m.reshape(-1), v.reshape(-1),
            lr, beta1, beta2, eps, bc1, bc2)
