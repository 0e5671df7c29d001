"""Cramer-Rao bounds for amplitude and frequency from one-bit samples.

Parameter order everywhere is theta = [A, B, omega, phi]. With
``u_k = A C_k + B`` (``C_k = cos(omega Ts k + phi)``) each sample is +1 with
probability ``0.5 erfc(-u_k / (sqrt(2) sigma))``. The FIM is assembled two
independent ways:

* ``fim_generic``: the literal sum over samples and both symbols of
  ``(1/f) (df/dtheta_i) (df/dtheta_j)``, from the pmf and its analytic partials;
* ``fim_closed_form``: ``2/(pi sigma^2) sum_k w_k g_k g_k^T`` with
  ``g_k = [C_k, 1, -A k Ts S_k, -A S_k]`` and the overflow-free weight from
  :func:`rsscrb.special.fim_weight`. This is the hot path (numba kernel).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._backend import kernels
from .signal import AcquisitionSpec, QuantizerSpec, SinusoidParams, omega_to_bpm
from .special import erfc

PARAM_NAMES = ("amplitude", "dc_offset", "omega", "phase")

# Jacobi-scaled 1-norm condition number above which a FIM counts as singular
COND_LIMIT = 1e12
# |A C_k + B| / sigma beyond which the rarer symbol has probability below
# machine epsilon: 0.5 erfc(z / sqrt 2) = 2^-52
SILENT_Z = 8.1258906647


def _require_noise(sigma):
    if not sigma > 0:
        raise ValueError("noise_sigma must be > 0: the one-bit likelihood "
                         "degenerates to an indicator and the bound is undefined")


@dataclass(frozen=True, eq=False)
class PhaseBasis:
    cos: np.ndarray
    sin: np.ndarray

    @classmethod
    def from_params(cls, params: SinusoidParams, acq: AcquisitionSpec):
        arg = params.omega * acq.sample_period * acq.sample_index() + params.phase
        return cls(np.cos(arg), np.sin(arg))


def sample_pmf(q, k, params: SinusoidParams, sample_period):
    """P(y[k] = q) for symbol ``q`` in {-1, +1}; vectorised over ``q``/``k``."""
    _require_noise(params.noise_sigma)
    q = np.asarray(q, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    u = params.amplitude * np.cos(params.omega * sample_period * k + params.phase)
    u = u + params.dc_offset
    return 0.5 * erfc(-q * u / (math.sqrt(2.0) * params.noise_sigma))


def pmf_partials(q, k, params: SinusoidParams, sample_period):
    """Gradient of :func:`sample_pmf` over [A, B, omega, phi], last axis."""
    _require_noise(params.noise_sigma)
    sigma = params.noise_sigma
    q = np.asarray(q, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    arg = params.omega * sample_period * k + params.phase
    c, s = np.cos(arg), np.sin(arg)
    u = params.amplitude * c + params.dc_offset
    common = q * np.exp(-u * u / (2.0 * sigma * sigma)) / (math.sqrt(2.0 * math.pi) * sigma)
    a = params.amplitude
    # d/dz erfc(z) = -2/sqrt(pi) exp(-z^2), so dP/du = +q g
    return np.stack(np.broadcast_arrays(
        common * c,
        common,
        -common * a * sample_period * k * s,
        -common * a * s,
    ), axis=-1)


@dataclass(frozen=True, eq=False)
class FisherMatrix:
    """4x4 FIM over [A, B, omega, phi] with a Jacobi-scaled condition number."""

    matrix: np.ndarray
    condition: float = field(init=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64).reshape(4, 4)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        _, _, cond = kernels().crb_batch(m[None].copy(), COND_LIMIT)
        object.__setattr__(self, "condition", float(cond[0]))

    def is_symmetric(self, rtol=1e-10):
        m = self.matrix
        scale = np.max(np.abs(m)) or 1.0
        return bool(np.max(np.abs(m - m.T)) <= rtol * scale)

    def is_psd(self, rtol=1e-10):
        eig = np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.T))
        return bool(eig.min() >= -rtol * max(np.trace(self.matrix), 0.0))


def fim_generic(params: SinusoidParams, acq: AcquisitionSpec) -> FisherMatrix:
    """FIM by direct summation over samples and both output symbols."""
    _require_noise(params.noise_sigma)
    k = acq.sample_index()
    total = np.zeros((4, 4))
    for q in (1.0, -1.0):
        f = sample_pmf(q, k, params, acq.sample_period)
        d = pmf_partials(q, k, params, acq.sample_period)
        # f == 0 only where the partials have also underflowed
        live = f > 0
        total += np.einsum("k,ki,kj->ij", 1.0 / f[live], d[live], d[live])
    return FisherMatrix(total)


def fim_closed_form(params: SinusoidParams, acq: AcquisitionSpec) -> FisherMatrix:
    _require_noise(params.noise_sigma)
    f = kernels().fim_grid(params.amplitude, params.omega, acq.sample_period,
                           acq.num_samples, params.noise_sigma,
                           np.array([params.phase]), np.array([params.dc_offset]))
    return FisherMatrix(f[0, 0])


@dataclass(frozen=True, eq=False)
class CrbReport:
    """Bounds on var(A_hat) [dB^2] and var(omega_hat) [(rad/s)^2].

    ``inf`` marks an unbounded CRB (singular or ill-conditioned FIM). For
    averaged reports the per-grid-point values are kept in ``grid_*``.
    """

    crb_amplitude: float
    crb_frequency: float
    averaged: bool = False
    condition: float = math.nan
    method: str = "one-bit"
    n_phase: int = 1
    n_offset: int = 1
    phases: Optional[np.ndarray] = None
    offsets: Optional[np.ndarray] = None
    grid_crb_amplitude: Optional[np.ndarray] = None
    grid_crb_frequency: Optional[np.ndarray] = None

    @property
    def bounded(self):
        return math.isfinite(self.crb_amplitude) and math.isfinite(self.crb_frequency)

    @property
    def std_amplitude_db(self):
        return math.sqrt(self.crb_amplitude)

    @property
    def std_frequency(self):
        """rad/s"""
        return math.sqrt(self.crb_frequency)

    @property
    def std_rate_bpm(self):
        return omega_to_bpm(self.std_frequency)

    @property
    def bounded_fraction(self):
        if self.grid_crb_frequency is None:
            return float(self.bounded)
        g = np.isfinite(self.grid_crb_frequency) & np.isfinite(self.grid_crb_amplitude)
        return float(np.mean(g))

    def median_std_rate_bpm(self):
        if self.grid_crb_frequency is None:
            return self.std_rate_bpm
        return float(omega_to_bpm(np.sqrt(np.median(self.grid_crb_frequency))))

    def median_std_amplitude_db(self):
        if self.grid_crb_amplitude is None:
            return self.std_amplitude_db
        return float(np.sqrt(np.median(self.grid_crb_amplitude)))


def silent_mask(amplitude, omega, sample_period, n, sigma, phases, offsets):
    """True where the signal never comes within ``SILENT_Z`` sigma of the
    threshold: every sample is one symbol up to machine precision and the
    point carries no usable information. Shape (P, B)."""
    k = np.arange(n)
    c = np.cos(omega * sample_period * k[None, :] + np.asarray(phases, float)[:, None])
    u = amplitude * c[:, None, :] + np.asarray(offsets, float)[None, :, None]
    return np.min(np.abs(u), axis=-1) > SILENT_Z * sigma


def crb_at(params: SinusoidParams, acq: AcquisitionSpec) -> CrbReport:
    """Unaveraged bound; ``inf`` for a singular, ill-conditioned or silent FIM."""
    fim = fim_closed_form(params, acq)
    crb_a, crb_w, cond = kernels().crb_batch(fim.matrix[None].copy(), COND_LIMIT)
    if silent_mask(params.amplitude, params.omega, acq.sample_period, acq.num_samples,
                   params.noise_sigma, [params.phase], [params.dc_offset])[0, 0]:
        crb_a[0] = crb_w[0] = math.inf
    return CrbReport(float(crb_a[0]), float(crb_w[0]), condition=float(cond[0]))


@dataclass(frozen=True)
class AveragingGrid:
    """Tensor grid for averaging over the nuisance phase and DC offset.

    Phases are uniform on [0, 2 pi) without the endpoint. Offsets follow the
    midpoint rule on [-step/2, step/2]; with ``min_abs_offset`` > 0 (as a
    fraction of the step) they cover only ``min_abs_offset*step <= |B| <= step/2``,
    ``n_offset`` points on each side.
    """

    n_phase: int = 16
    n_offset: int = 33
    min_abs_offset: float = 0.0

    def __post_init__(self):
        if self.n_phase < 1 or self.n_offset < 1:
            raise ValueError("averaging grid needs at least one point per axis")
        if not 0.0 <= self.min_abs_offset < 0.5:
            raise ValueError("min_abs_offset must lie in [0, 0.5)")

    def phases(self):
        return 2.0 * math.pi * np.arange(self.n_phase) / self.n_phase

    def offsets(self, step):
        j = np.arange(self.n_offset) + 0.5
        if self.min_abs_offset == 0.0:
            return -0.5 * step + j * step / self.n_offset
        lo = self.min_abs_offset * step
        pos = lo + j * (0.5 * step - lo) / self.n_offset
        return np.concatenate([-pos[::-1], pos])

    def refined(self, factor=2):
        return AveragingGrid(self.n_phase * factor, self.n_offset * factor, self.min_abs_offset)


def grid_crb(amplitude, omega, noise_sigma, acq: AcquisitionSpec, phases, offsets):
    """CRB(A) and CRB(omega) at every (phase, offset) pair, shape (P, B)."""
    _require_noise(noise_sigma)
    phases = np.ascontiguousarray(phases, dtype=np.float64)
    offsets = np.ascontiguousarray(offsets, dtype=np.float64)
    k = kernels()
    f = k.fim_grid(float(amplitude), float(omega), acq.sample_period,
                   acq.num_samples, float(noise_sigma), phases, offsets)
    crb_a, crb_w, _ = k.crb_batch(f.reshape(-1, 4, 4), COND_LIMIT)
    shape = (phases.size, offsets.size)
    crb_a, crb_w = crb_a.reshape(shape), crb_w.reshape(shape)
    silent = silent_mask(amplitude, omega, acq.sample_period, acq.num_samples,
                         noise_sigma, phases, offsets)
    crb_a[silent] = math.inf
    crb_w[silent] = math.inf
    return crb_a, crb_w


def averaged_crb(amplitude, omega, noise_sigma, quant: QuantizerSpec, acq: AcquisitionSpec,
                 grid: Optional[AveragingGrid] = None) -> CrbReport:
    """Mean CRB over uniform phase and uniform DC offset in one RSS bin.

    A single unbounded grid point makes the mean unbounded; the median and
    the bounded fraction remain available on the report.
    """
    grid = grid or AveragingGrid()
    phases = grid.phases()
    offsets = grid.offsets(quant.step)
    ga, gw = grid_crb(amplitude, omega, noise_sigma, acq, phases, offsets)
    mean_a = math.inf if not np.all(np.isfinite(ga)) else float(np.mean(ga))
    mean_w = math.inf if not np.all(np.isfinite(gw)) else float(np.mean(gw))
    return CrbReport(mean_a, mean_w, averaged=True, n_phase=phases.size,
                     n_offset=offsets.size, phases=phases, offsets=offsets,
                     grid_crb_amplitude=ga, grid_crb_frequency=gw)


def unquantized_crb_reference(params: SinusoidParams, acq: AcquisitionSpec) -> CrbReport:
    """Large-sample bounds for a real sinusoid in white Gaussian noise.

    var(A_hat) >= 2 sigma^2 / N and
    var(omega_hat) >= 24 sigma^2 / (A^2 Ts^2 N (N^2 - 1)).
    """
    n = acq.num_samples
    var = params.noise_sigma ** 2
    crb_a = 2.0 * var / n
    if var == 0.0:
        crb_w = 0.0
    elif params.amplitude == 0.0:
        crb_w = math.inf
    else:
        ts = acq.sample_period
        crb_w = 24.0 * var / (params.amplitude ** 2 * ts * ts * n * (n * n - 1.0))
    return CrbReport(crb_a, crb_w, method="unquantized")


@dataclass(frozen=True)
class OptimalNoise:
    sigma_opt: float
    min_std: float
    target: str
    at_boundary: bool
    evaluations: int
    report: CrbReport


def _target_std(report, target):
    if target == "frequency":
        return report.std_rate_bpm
    if target == "amplitude":
        return report.std_amplitude_db
    raise ValueError(f"target must be 'frequency' or 'amplitude', got {target!r}")


def find_optimal_noise(amplitude, omega, quant: QuantizerSpec, acq: AcquisitionSpec,
                       target="frequency", bracket=None, rel_tol=0.01,
                       grid: Optional[AveragingGrid] = None) -> OptimalNoise:
    """Noise std minimising the averaged bound, by golden section on log sigma.

    ``target`` picks the objective: frequency std in bpm or amplitude std in
    dB. The default bracket is [step/50, 2 step]; the search stops when the
    bracket is narrower than ``rel_tol`` in relative sigma.
    """
    step = quant.step
    lo, hi = bracket if bracket is not None else (step / 50.0, 2.0 * step)
    if not 0 < lo < hi:
        raise ValueError("bracket must satisfy 0 < lo < hi")
    cache = {}

    def objective(log_sigma):
        if log_sigma not in cache:
            rep = averaged_crb(amplitude, omega, math.exp(log_sigma), quant, acq, grid)
            cache[log_sigma] = (_target_std(rep, target), rep)
        return cache[log_sigma][0]

    def less(fa, fb):
        # on an unbounded plateau, move towards more noise
        if math.isinf(fa) and math.isinf(fb):
            return False
        return fa < fb

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    tol = math.log1p(rel_tol)
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > tol:
        if less(fc, fd):
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = objective(d)
    mid = 0.5 * (a + b)
    objective(mid)
    inside = [x for x in cache if a - 1e-12 <= x <= b + 1e-12]
    best = min(inside, key=lambda x: cache[x][0])
    at_boundary = (a <= math.log(lo) + tol) or (b >= math.log(hi) - tol)
    if at_boundary:
        warnings.warn("optimal noise search ended at the bracket edge; "
                      "the objective looks monotone over the bracket", RuntimeWarning)
    value, rep = cache[best]
    return OptimalNoise(math.exp(best), value, target, at_boundary, len(cache), rep)
