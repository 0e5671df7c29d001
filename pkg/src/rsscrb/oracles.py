"""Independent reference computations used by ``selftest`` and the tests.

Nothing here shares code with the production FIM path beyond the pmf
itself: derivatives come from finite differences, inverses from cofactor
expansion, and the closed form is checked against the generic sum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List

import numpy as np

from .crb import crb_at, fim_closed_form, fim_generic, pmf_partials, sample_pmf
from .signal import AcquisitionSpec, SinusoidParams, make_rng

FIELDS = ("amplitude", "dc_offset", "omega", "phase")


def finite_difference_partials(q, k, params: SinusoidParams, sample_period, h=1e-6):
    """Central differences of the pmf, step ``h`` scaled by each parameter."""
    out = np.empty(4)
    for i, name in enumerate(FIELDS):
        x = getattr(params, name)
        step = h * max(1.0, abs(x))
        lo = dict(zip(FIELDS, (params.amplitude, params.dc_offset, params.omega, params.phase)))
        hi = dict(lo)
        lo[name] = x - step
        hi[name] = x + step
        # phase is stored mod 2 pi; a wrapped value gives the same pmf
        f_hi = sample_pmf(q, k, SinusoidParams(noise_sigma=params.noise_sigma, **hi), sample_period)
        f_lo = sample_pmf(q, k, SinusoidParams(noise_sigma=params.noise_sigma, **lo), sample_period)
        out[i] = (f_hi - f_lo) / (2.0 * step)
    return out


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(n))


def cofactor_inverse(matrix):
    """Inverse by the adjugate formula (Laplace expansion), plain Python floats."""
    m = [[float(v) for v in row] for row in np.asarray(matrix)]
    n = len(m)
    det = _det(m)
    inv = np.empty((n, n))
    for i, j in itertools.product(range(n), range(n)):
        minor = [row[:j] + row[j + 1:] for r, row in enumerate(m) if r != i]
        inv[j, i] = (-1) ** (i + j) * _det(minor) / det
    return inv


def random_benign_params(rng, n_max=200):
    """Draws with the signal straddling the threshold, so the FIM is well conditioned."""
    sigma = rng.uniform(0.1, 1.0)
    amp = rng.uniform(0.05, 1.0) * sigma * 3
    params = SinusoidParams(amp, rng.uniform(-1.0, 1.0) * sigma, rng.uniform(0.8, 3.5),
                            rng.uniform(0, 2 * math.pi), sigma)
    acq = AcquisitionSpec(rng.uniform(2.0, 20.0), int(rng.integers(20, n_max)))
    return params, acq


def _rel_err(a, b):
    scale = np.max(np.abs(b)) or 1.0
    return float(np.max(np.abs(a - b)) / scale)


def fim_entry_error(a, b):
    """Entrywise error of ``a`` against ``b``, each entry relative to
    sqrt(b_ii b_jj). Off-diagonal entries can cancel to nearly zero, where a
    plain relative error only measures summation order."""
    d = np.sqrt(np.outer(np.diag(b), np.diag(b)))
    d = np.where(d > 0, d, 1.0)
    return float(np.max(np.abs(a - b) / d))


@dataclass
class OracleResult:
    name: str
    worst: float
    tolerance: float
    draws: int

    @property
    def passed(self):
        return self.worst < self.tolerance


def check_fim_forms(draws=500, seed=0):
    """Closed form vs generic sum, worst :func:`fim_entry_error`."""
    rng = make_rng(seed, 101)
    worst = 0.0
    for _ in range(draws):
        params, acq = random_benign_params(rng)
        a = fim_closed_form(params, acq).matrix
        b = fim_generic(params, acq).matrix
        worst = max(worst, fim_entry_error(a, b))
    return OracleResult("fim closed form vs generic", worst, 1e-10, draws)


def check_partials(draws=1000, seed=0):
    """Analytic partials vs central differences with |A C_k + B| <= 4 sigma."""
    rng = make_rng(seed, 102)
    worst = 0.0
    done = 0
    while done < draws:
        params, acq = random_benign_params(rng)
        k = int(rng.integers(0, acq.num_samples))
        q = 1.0 if rng.uniform() < 0.5 else -1.0
        c = math.cos(params.omega * acq.sample_period * k + params.phase)
        if abs(params.amplitude * c + params.dc_offset) > 4 * params.noise_sigma:
            continue
        an = pmf_partials(q, k, params, acq.sample_period)
        fd = finite_difference_partials(q, k, params, acq.sample_period)
        worst = max(worst, _rel_err(fd, an))
        done += 1
    return OracleResult("pmf partials vs finite differences", worst, 1e-5, draws)


def check_inverse(draws=50, seed=0):
    """CRB entries vs the cofactor inverse of the same FIM."""
    rng = make_rng(seed, 103)
    worst = 0.0
    for _ in range(draws):
        params, acq = random_benign_params(rng)
        fim = fim_closed_form(params, acq).matrix
        rep = crb_at(params, acq)
        inv = cofactor_inverse(fim)
        worst = max(worst, abs(rep.crb_amplitude / inv[0, 0] - 1),
                    abs(rep.crb_frequency / inv[2, 2] - 1))
    return OracleResult("crb vs cofactor inverse", worst, 1e-10, draws)


def run_all(seed=0, scale=1.0) -> List[OracleResult]:
    return [check_fim_forms(max(1, int(500 * scale)), seed),
            check_partials(max(1, int(1000 * scale)), seed),
            check_inverse(max(1, int(50 * scale)), seed)]
