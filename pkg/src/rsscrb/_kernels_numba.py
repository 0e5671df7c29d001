"""numba kernels. Mirrors ``_kernels_numpy`` function for function."""

import math

import numpy as np
from numba import njit

_INV_SQRT_PI = 0.56418958354775628695
_CF_SWITCH = 12.0
_CF_DEPTH = 60
# exp(x*x) overflows beyond this
_NEG_OVERFLOW = -26.64

# (row, col) of the ten distinct FIM entries, row-major upper triangle
_TRI_ROWS = np.array([0, 0, 0, 0, 1, 1, 1, 2, 2, 3])
_TRI_COLS = np.array([0, 1, 2, 3, 1, 2, 3, 2, 3, 3])


@njit(cache=True)
def _erfcx_nonneg(x):
    if x < _CF_SWITCH:
        return math.exp(x * x) * math.erfc(x)
    # Laplace continued fraction, evaluated bottom-up
    t = x
    for k in range(_CF_DEPTH, 0, -1):
        t = x + 0.5 * k / t
    return _INV_SQRT_PI / t


@njit(cache=True)
def erfcx_scalar(x):
    if x != x:
        return x
    if x >= 0.0:
        return _erfcx_nonneg(x)
    if x < _NEG_OVERFLOW:
        return math.inf
    return 2.0 * math.exp(x * x) - _erfcx_nonneg(-x)


@njit(cache=True)
def erfcx(x):
    out = np.empty(x.shape, dtype=np.float64)
    flat_in = x.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = erfcx_scalar(flat_in[i])
    return out


@njit(cache=True)
def erfc(x):
    out = np.empty(x.shape, dtype=np.float64)
    flat_in = x.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = math.erfc(flat_in[i])
    return out


@njit(cache=True)
def _weight_scalar(v):
    a = abs(v)
    return math.exp(-a * a) / (_erfcx_nonneg(a) * (2.0 - math.erfc(a)))


@njit(cache=True)
def fim_weight(v):
    out = np.empty(v.shape, dtype=np.float64)
    flat_in = v.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = _weight_scalar(flat_in[i])
    return out


@njit(cache=True)
def pairwise_reduce(buf):
    """Sum rows of ``buf`` in place with a fixed halving tree; returns row 0."""
    n = buf.shape[0]
    m = buf.shape[1]
    while n > 1:
        h = n // 2
        for i in range(h):
            for j in range(m):
                buf[i, j] += buf[i + h, j]
        if n % 2 == 1:
            for j in range(m):
                buf[h, j] = buf[2 * h, j]
            n = h + 1
        else:
            n = h
    return buf[0].copy()


@njit(cache=True)
def fim_grid(amplitude, omega, ts, n, sigma, phases, offsets):
    """Closed-form FIM for every (phase, offset) pair: shape (P, B, 4, 4)."""
    n_phase = phases.shape[0]
    n_off = offsets.shape[0]
    out = np.zeros((n_phase, n_off, 4, 4))
    buf = np.empty((n, 10))
    cos_k = np.empty(n)
    sin_k = np.empty(n)
    scale = 2.0 / (math.pi * sigma * sigma)
    inv = 1.0 / (math.sqrt(2.0) * sigma)
    for p in range(n_phase):
        for k in range(n):
            arg = omega * ts * k + phases[p]
            cos_k[k] = math.cos(arg)
            sin_k[k] = math.sin(arg)
        for b in range(n_off):
            for k in range(n):
                c = cos_k[k]
                g2 = -amplitude * k * ts * sin_k[k]
                g3 = -amplitude * sin_k[k]
                w = _weight_scalar((amplitude * c + offsets[b]) * inv)
                buf[k, 0] = w * c * c
                buf[k, 1] = w * c
                buf[k, 2] = w * c * g2
                buf[k, 3] = w * c * g3
                buf[k, 4] = w
                buf[k, 5] = w * g2
                buf[k, 6] = w * g3
                buf[k, 7] = w * g2 * g2
                buf[k, 8] = w * g2 * g3
                buf[k, 9] = w * g3 * g3
            tri = pairwise_reduce(buf[:n])
            for t in range(10):
                r = _TRI_ROWS[t]
                c = _TRI_COLS[t]
                out[p, b, r, c] = scale * tri[t]
                out[p, b, c, r] = scale * tri[t]
    return out


@njit(cache=True)
def _inverse_scaled(fim, inv_out):
    """Invert one 4x4 FIM after Jacobi scaling. Returns the 1-norm condition
    number of the scaled matrix (inf when singular)."""
    d = np.empty(4)
    for i in range(4):
        if not (fim[i, i] > 0.0) or not math.isfinite(fim[i, i]):
            return math.inf
        d[i] = math.sqrt(fim[i, i])
    a = np.empty((4, 8))
    for i in range(4):
        for j in range(4):
            a[i, j] = fim[i, j] / (d[i] * d[j])
            a[i, j + 4] = 1.0 if i == j else 0.0
    norm_a = 0.0
    for j in range(4):
        s = 0.0
        for i in range(4):
            s += abs(a[i, j])
        norm_a = max(norm_a, s)
    # Gauss-Jordan with partial pivoting
    for col in range(4):
        piv = col
        best = abs(a[col, col])
        for r in range(col + 1, 4):
            if abs(a[r, col]) > best:
                best = abs(a[r, col])
                piv = r
        if best == 0.0:
            return math.inf
        if piv != col:
            for j in range(8):
                tmp = a[col, j]
                a[col, j] = a[piv, j]
                a[piv, j] = tmp
        pv = a[col, col]
        for j in range(8):
            a[col, j] /= pv
        for r in range(4):
            if r != col:
                f = a[r, col]
                if f != 0.0:
                    for j in range(8):
                        a[r, j] -= f * a[col, j]
    norm_inv = 0.0
    for j in range(4):
        s = 0.0
        for i in range(4):
            s += abs(a[i, j + 4])
        norm_inv = max(norm_inv, s)
    for i in range(4):
        for j in range(4):
            inv_out[i, j] = a[i, j + 4] / (d[i] * d[j])
    return norm_a * norm_inv


@njit(cache=True)
def crb_batch(fims, cond_limit):
    """Diagonal CRB entries for A and omega of a stack of FIMs (M, 4, 4).

    Matrices whose scaled condition number exceeds ``cond_limit`` get inf.
    """
    m = fims.shape[0]
    crb_a = np.empty(m)
    crb_w = np.empty(m)
    cond = np.empty(m)
    inv = np.empty((4, 4))
    for i in range(m):
        c = _inverse_scaled(fims[i], inv)
        cond[i] = c
        if c > cond_limit or not (inv[0, 0] > 0.0 and inv[2, 2] > 0.0):
            crb_a[i] = math.inf
            crb_w[i] = math.inf
        else:
            crb_a[i] = inv[0, 0]
            crb_w[i] = inv[2, 2]
    return crb_a, crb_w, cond


@njit(cache=True)
def sosfilt(sos, x):
    """Cascade of biquads, transposed direct form II, zero initial state."""
    y = x.astype(np.float64).copy()
    n_sec = sos.shape[0]
    for s in range(n_sec):
        b0 = sos[s, 0] / sos[s, 3]
        b1 = sos[s, 1] / sos[s, 3]
        b2 = sos[s, 2] / sos[s, 3]
        a1 = sos[s, 4] / sos[s, 3]
        a2 = sos[s, 5] / sos[s, 3]
        z0 = 0.0
        z1 = 0.0
        for k in range(y.shape[0]):
            xk = y[k]
            yk = b0 * xk + z0
            z0 = b1 * xk - a1 * yk + z1
            z1 = b2 * xk - a2 * yk
            y[k] = yk
    return y


@njit(cache=True)
def psd_from_tables(x, cos_table, sin_table):
    n_f, n = cos_table.shape
    out = np.empty(n_f)
    for i in range(n_f):
        re = 0.0
        im = 0.0
        for k in range(n):
            re += cos_table[i, k] * x[k]
            im += sin_table[i, k] * x[k]
        out[i] = (re * re + im * im) / n
    return out
