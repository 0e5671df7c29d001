"""Vectorised numpy/scipy fallback for the numba kernels."""

import numpy as np
from scipy import signal as _sps
from scipy import special as _spec

_TRI_ROWS = np.array([0, 0, 0, 0, 1, 1, 1, 2, 2, 3])
_TRI_COLS = np.array([0, 1, 2, 3, 1, 2, 3, 2, 3, 3])


def erfcx(x):
    return _spec.erfcx(np.asarray(x, dtype=np.float64))


def erfc(x):
    return _spec.erfc(np.asarray(x, dtype=np.float64))


def fim_weight(v):
    a = np.abs(np.asarray(v, dtype=np.float64))
    return np.exp(-a * a) / (_spec.erfcx(a) * (2.0 - _spec.erfc(a)))


def pairwise_reduce(buf, axis=0):
    """Same halving tree as the numba kernel, along ``axis``."""
    buf = np.moveaxis(np.array(buf, dtype=np.float64), axis, 0)
    n = buf.shape[0]
    while n > 1:
        h = n // 2
        buf[:h] += buf[h:2 * h]
        if n % 2 == 1:
            buf[h] = buf[2 * h]
            n = h + 1
        else:
            n = h
    return buf[0].copy()


def fim_grid(amplitude, omega, ts, n, sigma, phases, offsets):
    phases = np.asarray(phases, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.float64)
    k = np.arange(n, dtype=np.float64)
    out = np.zeros((phases.size, offsets.size, 4, 4))
    scale = 2.0 / (np.pi * sigma * sigma)
    inv = 1.0 / (np.sqrt(2.0) * sigma)
    for p, phase in enumerate(phases):
        arg = omega * ts * k + phase
        c = np.cos(arg)
        s = np.sin(arg)
        g = np.stack([c, np.ones(n), -amplitude * k * ts * s, -amplitude * s])
        w = fim_weight((amplitude * c[None, :] + offsets[:, None]) * inv)
        # (k, 10, offsets) contributions, reduced over k
        prods = g[_TRI_ROWS] * g[_TRI_COLS]
        contrib = prods.T[:, :, None] * w.T[:, None, :]
        tri = pairwise_reduce(contrib) * scale
        out[p][:, _TRI_ROWS, _TRI_COLS] = tri.T
        out[p][:, _TRI_COLS, _TRI_ROWS] = tri.T
    return out


def crb_batch(fims, cond_limit):
    fims = np.asarray(fims, dtype=np.float64)
    m = fims.shape[0]
    crb_a = np.full(m, np.inf)
    crb_w = np.full(m, np.inf)
    cond = np.full(m, np.inf)
    diag = np.diagonal(fims, axis1=1, axis2=2)
    ok = np.all(np.isfinite(diag) & (diag > 0.0), axis=1)
    if not np.any(ok):
        return crb_a, crb_w, cond
    d = np.sqrt(diag[ok])
    scaled = fims[ok] / (d[:, :, None] * d[:, None, :])
    inv = np.empty_like(scaled)
    cond_ok = np.empty(scaled.shape[0])
    for i, mat in enumerate(scaled):
        try:
            inv[i] = np.linalg.inv(mat)
            cond_ok[i] = np.linalg.norm(mat, 1) * np.linalg.norm(inv[i], 1)
        except np.linalg.LinAlgError:
            inv[i] = np.nan
            cond_ok[i] = np.inf
    inv /= d[:, :, None] * d[:, None, :]
    good = (cond_ok <= cond_limit) & (inv[:, 0, 0] > 0) & (inv[:, 2, 2] > 0)
    idx = np.flatnonzero(ok)
    cond[idx] = cond_ok
    crb_a[idx[good]] = inv[good, 0, 0]
    crb_w[idx[good]] = inv[good, 2, 2]
    return crb_a, crb_w, cond


def sosfilt(sos, x):
    return _sps.sosfilt(sos, np.asarray(x, dtype=np.float64))


def psd_from_tables(x, cos_table, sin_table):
    x = np.asarray(x, dtype=np.float64)
    re = cos_table @ x
    im = sin_table @ x
    return (re * re + im * im) / x.size
