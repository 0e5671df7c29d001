"""Numerical studies built on the bound engine and the attacker pipeline.

Bound sweeps are deterministic. Monte Carlo studies derive every random
draw from ``(seed, stream, trial, ...)`` so cells can be run in any order.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .crb import (AveragingGrid, averaged_crb, find_optimal_noise,
                  unquantized_crb_reference)
from .dsp import (FilterSpec, RateSearchSpec, amplitude_at, rate_from_array,
                  rmse_bpm)
from .signal import (STREAM_GUESS, STREAM_NUISANCE, AcquisitionSpec,
                     QuantizerSpec, SinusoidParams, hz_to_omega, make_rng,
                     omega_to_bpm, quantize, staircase_interference,
                     synthesize_received_power)

AXES = ("noise_sigma", "step_delta", "sample_rate", "amplitude")


@dataclass(frozen=True)
class Scenario:
    """Fixed operating point; defaults are the 15 bpm, 10 Hz, 30 s, 1 dB case."""

    amplitude: float = 0.1
    frequency_hz: float = 0.25
    step: float = 1.0
    sample_rate: float = 10.0
    duration: float = 30.0
    noise_sigma: float = 0.25

    def __post_init__(self):
        for name in ("frequency_hz", "step", "sample_rate", "duration"):
            if not getattr(self, name) > 0:
                raise ValueError(f"scenario {name} must be positive")
        if self.amplitude < 0 or self.noise_sigma < 0:
            raise ValueError("scenario amplitude and noise_sigma must be >= 0")

    @property
    def omega(self):
        return hz_to_omega(self.frequency_hz)

    @property
    def truth_bpm(self):
        return 60.0 * self.frequency_hz

    def acquisition(self):
        return AcquisitionSpec.from_duration(self.sample_rate, self.duration)

    def quantizer(self, mode="one-bit"):
        return QuantizerSpec(self.step, 0.0, mode)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: Tuple[float, ...]
    scenario: Scenario = Scenario()
    grid: AveragingGrid = AveragingGrid()

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; choose from {AXES}")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("sweep needs at least one axis value")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep values must be strictly increasing")
        object.__setattr__(self, "values", vals)


@dataclass
class SweepResult:
    axis: str
    columns: Tuple[str, ...]
    units: Dict[str, str]
    rows: List[tuple] = field(default_factory=list)
    meta: Dict[str, object] = field(default_factory=dict)

    def column(self, name):
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows], dtype=np.float64)

    def __len__(self):
        return len(self.rows)


def _scenario_meta(sc: Scenario, grid: AveragingGrid):
    meta = {f"scenario.{k}": v for k, v in dataclasses.asdict(sc).items()}
    meta.update({"grid.n_phase": grid.n_phase, "grid.n_offset": grid.n_offset})
    return meta


def _nonneg_std(report_value):
    return math.sqrt(report_value) if math.isfinite(report_value) else math.inf


def sweep_noise(spec: SweepSpec) -> SweepResult:
    """Averaged one-bit bounds and the unquantized reference versus sigma."""
    if spec.axis != "noise_sigma":
        raise ValueError("sweep_noise needs axis 'noise_sigma'")
    sc, acq = spec.scenario, spec.scenario.acquisition()
    res = SweepResult(
        "noise_sigma",
        ("noise_sigma", "std_amplitude", "std_rate", "ref_std_amplitude",
         "ref_std_rate", "bounded_fraction"),
        {"noise_sigma": "dB", "std_amplitude": "dB", "std_rate": "bpm",
         "ref_std_amplitude": "dB", "ref_std_rate": "bpm", "bounded_fraction": "1"},
        meta=_scenario_meta(sc, spec.grid))
    for sigma in spec.values:
        rep = averaged_crb(sc.amplitude, sc.omega, sigma, sc.quantizer(), acq, spec.grid)
        ref = unquantized_crb_reference(
            SinusoidParams(sc.amplitude, 0.0, sc.omega, 0.0, sigma), acq)
        res.rows.append((sigma, rep.std_amplitude_db, rep.std_rate_bpm,
                         ref.std_amplitude_db, ref.std_rate_bpm, rep.bounded_fraction))
    return res


def r_squared(x, y, degree):
    x, y = np.asarray(x, float), np.asarray(y, float)
    coef = np.polyfit(x, y, degree)
    resid = y - np.polyval(coef, x)
    ss_tot = np.sum((y - y.mean()) ** 2)
    return float(1.0 - np.sum(resid ** 2) / ss_tot) if ss_tot > 0 else 1.0, coef


def sweep_step_size(spec: SweepSpec) -> SweepResult:
    """Minimum-over-sigma bounds versus quantization step.

    Fits a line to the frequency std and a quadratic to the amplitude std
    (R^2 in ``meta``), and a line through the origin to sigma_opt.
    """
    if spec.axis != "step_delta":
        raise ValueError("sweep_step_size needs axis 'step_delta'")
    sc = spec.scenario
    acq = sc.acquisition()
    res = SweepResult(
        "step_delta",
        ("step_delta", "sigma_opt_rate", "min_std_rate", "sigma_opt_amplitude",
         "min_std_amplitude"),
        {"step_delta": "dB", "sigma_opt_rate": "dB", "min_std_rate": "bpm",
         "sigma_opt_amplitude": "dB", "min_std_amplitude": "dB"},
        meta=_scenario_meta(sc, spec.grid))
    for step in spec.values:
        quant = QuantizerSpec(step, 0.0, "one-bit")
        of = find_optimal_noise(sc.amplitude, sc.omega, quant, acq, "frequency", grid=spec.grid)
        oa = find_optimal_noise(sc.amplitude, sc.omega, quant, acq, "amplitude", grid=spec.grid)
        res.rows.append((step, of.sigma_opt, of.min_std, oa.sigma_opt, oa.min_std))
    if len(res.rows) >= 3:
        steps = res.column("step_delta")
        r2_lin, coef_lin = r_squared(steps, res.column("min_std_rate"), 1)
        r2_quad, coef_quad = r_squared(steps, res.column("min_std_amplitude"), 2)
        sig = res.column("sigma_opt_rate")
        slope = float(np.dot(sig, steps) / np.dot(steps, steps))
        res.meta.update({
            "fit.rate_linear_r2": r2_lin,
            "fit.rate_linear_coef": tuple(float(c) for c in coef_lin),
            "fit.amplitude_quadratic_r2": r2_quad,
            "fit.amplitude_quadratic_coef": tuple(float(c) for c in coef_quad),
            "fit.sigma_opt_slope": slope,
            "fit.sigma_opt_max_rel_dev": float(np.max(np.abs(sig / (slope * steps) - 1.0))),
        })
    return res


def sweep_sampling_rate(spec: SweepSpec) -> SweepResult:
    """Averaged bounds at fixed sigma and duration while fs (and N) grow."""
    if spec.axis != "sample_rate":
        raise ValueError("sweep_sampling_rate needs axis 'sample_rate'")
    sc = spec.scenario
    res = SweepResult(
        "sample_rate",
        ("sample_rate", "num_samples", "std_amplitude", "std_rate"),
        {"sample_rate": "Hz", "num_samples": "1", "std_amplitude": "dB", "std_rate": "bpm"},
        meta=_scenario_meta(sc, spec.grid))
    for fs in spec.values:
        acq = AcquisitionSpec.from_duration(fs, sc.duration)
        rep = averaged_crb(sc.amplitude, sc.omega, sc.noise_sigma, sc.quantizer(), acq, spec.grid)
        res.rows.append((fs, acq.num_samples, rep.std_amplitude_db, rep.std_rate_bpm))
    fs = res.column("sample_rate")
    if 10.0 in fs and 20.0 in fs:
        r = res.column("std_rate")
        res.meta["ratio.std_rate_20_over_10"] = float(r[fs == 20.0][0] / r[fs == 10.0][0])
        res.meta["ratio.heuristic_inv_sqrt2"] = 1.0 / math.sqrt(2.0)
    return res


def sweep_amplitude(spec: SweepSpec) -> SweepResult:
    if spec.axis != "amplitude":
        raise ValueError("sweep_amplitude needs axis 'amplitude'")
    sc = spec.scenario
    acq = sc.acquisition()
    res = SweepResult(
        "amplitude", ("amplitude", "std_amplitude", "std_rate"),
        {"amplitude": "dB", "std_amplitude": "dB", "std_rate": "bpm"},
        meta=_scenario_meta(sc, spec.grid))
    for a in spec.values:
        rep = averaged_crb(a, sc.omega, sc.noise_sigma, sc.quantizer(), acq, spec.grid)
        res.rows.append((a, rep.std_amplitude_db, rep.std_rate_bpm))
    return res


def run_sweep(spec: SweepSpec) -> SweepResult:
    return {"noise_sigma": sweep_noise, "step_delta": sweep_step_size,
            "sample_rate": sweep_sampling_rate, "amplitude": sweep_amplitude}[spec.axis](spec)


@dataclass
class ContourField:
    sample_rates: np.ndarray
    steps: np.ndarray
    # arrays indexed [step, sample_rate]
    std_rate: np.ndarray
    std_amplitude: np.ndarray
    sigma_opt: np.ndarray
    contours: Dict[float, List[np.ndarray]]
    meta: Dict[str, object] = field(default_factory=dict)

    def value_at(self, sample_rate, step):
        i = int(np.flatnonzero(np.isclose(self.steps, step))[0])
        j = int(np.flatnonzero(np.isclose(self.sample_rates, sample_rate))[0])
        return float(self.std_rate[i, j])


def _min_over_sigma(sc: Scenario, fs, step, grid):
    acq = AcquisitionSpec.from_duration(fs, sc.duration)
    quant = QuantizerSpec(step, 0.0, "one-bit")
    of = find_optimal_noise(sc.amplitude, sc.omega, quant, acq, "frequency", grid=grid)
    oa = find_optimal_noise(sc.amplitude, sc.omega, quant, acq, "amplitude", grid=grid)
    return of.min_std, oa.min_std, of.sigma_opt


def contour_lines(x, y, z, level):
    """Iso-lines of ``z[y, x]`` at ``level`` as a list of (M, 2) polylines."""
    if z.shape[0] < 2 or z.shape[1] < 2:
        return []
    import contourpy

    zz = np.where(np.isfinite(z), z, np.nanmax(z[np.isfinite(z)]) * 10 if np.any(np.isfinite(z)) else 0)
    gen = contourpy.contour_generator(x, y, zz, line_type=contourpy.LineType.Separate)
    return [np.asarray(line) for line in gen.lines(level)]


def contour_grid(sample_rates: Sequence[float], steps: Sequence[float],
                 scenario: Scenario = Scenario(), grid: AveragingGrid = AveragingGrid(),
                 levels: Sequence[float] = (0.5, 1.0, 2.0, 5.0), workers: int = 1) -> ContourField:
    """Minimum-over-sigma std field over (sample rate, step) plus iso-lines
    of the frequency std (bpm) at ``levels``."""
    fs = np.asarray(sorted(float(v) for v in sample_rates))
    st = np.asarray(sorted(float(v) for v in steps))
    cells = [(i, j) for i in range(st.size) for j in range(fs.size)]

    def job(cell):
        i, j = cell
        return cell, _min_over_sigma(scenario, fs[j], st[i], grid)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(job, cells))
    else:
        results = [job(c) for c in cells]
    rate = np.empty((st.size, fs.size))
    amp = np.empty_like(rate)
    sig = np.empty_like(rate)
    for (i, j), (r, a, s) in results:
        rate[i, j], amp[i, j], sig[i, j] = r, a, s
    contours = {float(lv): contour_lines(fs, st, rate, lv) for lv in levels}
    return ContourField(fs, st, rate, amp, sig, contours, _scenario_meta(scenario, grid))


@dataclass(frozen=True)
class StaircaseScenario:
    """Quantized-RSS setting for the stepped-interference experiment.

    ``mean_level`` sits 0.3 dB above a bin edge, so with no interference
    the breathing swing never crosses a threshold.
    """

    amplitude: float = 0.1
    frequency_hz: float = 0.25
    step: float = 1.0
    threshold: float = 0.0
    mode: str = "uniform"
    mean_level: float = -53.7
    sample_rate: float = 20.0
    segment_seconds: float = 151.0
    window_seconds: float = 30.0
    hop_seconds: float = 1.0


@dataclass
class StaircaseResult:
    sigmas: Tuple[float, ...]
    rmse: np.ndarray
    windows: np.ndarray
    degenerate_fraction: np.ndarray
    meta: Dict[str, object] = field(default_factory=dict)


def _window_starts(segment_samples, window_samples, hop_samples):
    return list(range(0, segment_samples - window_samples + 1, hop_samples))


def hi_staircase_sim(schedule: Sequence[float], scenario: StaircaseScenario = StaircaseScenario(),
                     trials: int = 4, seed: int = 0, filt: FilterSpec = FilterSpec(),
                     search: RateSearchSpec = RateSearchSpec(),
                     degenerate_policy: str = "guess") -> StaircaseResult:
    """Stepped interference levels, one segment each, rate RMSE per segment.

    Each trial draws a fresh breathing phase and noise; windows slide inside
    a segment. A window whose quantized RSS never changes carries no rate
    information; ``degenerate_policy`` scores it as a uniform guess in the
    search band (``guess``), as ``f_min`` (``fmin``) or leaves it out
    (``exclude``).
    """
    if degenerate_policy not in ("guess", "fmin", "exclude"):
        raise ValueError(f"unknown degenerate_policy {degenerate_policy!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sc = scenario
    fs = sc.sample_rate
    seg_n = int(round(sc.segment_seconds * fs))
    win_n = int(round(sc.window_seconds * fs))
    hop_n = max(1, int(round(sc.hop_seconds * fs)))
    starts = _window_starts(seg_n, win_n, hop_n)
    if not starts:
        raise ValueError("segment shorter than one estimation window")
    n_seg = len(schedule)
    acq = AcquisitionSpec(fs, seg_n * n_seg)
    quant = QuantizerSpec(sc.step, sc.threshold, sc.mode)
    truth = 60.0 * sc.frequency_hz
    errors = [[] for _ in range(n_seg)]
    degenerate = np.zeros(n_seg)
    total = np.zeros(n_seg)
    for t in range(trials):
        phase = make_rng(seed, STREAM_NUISANCE, t).uniform(0.0, 2.0 * math.pi)
        params = SinusoidParams.from_hz(sc.amplitude, sc.mean_level, sc.frequency_hz, phase)
        trace = synthesize_received_power(params, acq, seed)
        trace = staircase_interference(trace, schedule, seg_n, seed * 1_000_003 + t)
        x = quantize(trace, quant).samples
        guess_rng = make_rng(seed, STREAM_GUESS, t)
        for s in range(n_seg):
            seg = x[s * seg_n:(s + 1) * seg_n]
            for w0 in starts:
                f_hat, _, deg, _ = rate_from_array(seg[w0:w0 + win_n], fs, filt, search)
                total[s] += 1
                if deg:
                    degenerate[s] += 1
                    if degenerate_policy == "exclude":
                        continue
                    if degenerate_policy == "guess":
                        f_hat = guess_rng.uniform(search.f_min, search.f_max)
                errors[s].append(60.0 * f_hat)
    rmse = np.array([rmse_bpm(e, truth) if e else math.nan for e in errors])
    return StaircaseResult(tuple(float(s) for s in schedule), rmse,
                           np.array([len(e) for e in errors]), degenerate / total,
                           {"trials": trials, "seed": seed, "degenerate_policy": degenerate_policy,
                            **{f"scenario.{k}": v for k, v in dataclasses.asdict(sc).items()}})


@dataclass
class BoundCheck:
    parameter: str
    quantized: bool
    trials: int
    valid_trials: int
    empirical_variance: float
    variance_se: float
    averaged_crb: float
    ratio: float
    passed: bool
    inconclusive: bool
    rmse_bpm: float
    mean_estimate: float


def monte_carlo_bound_check(scenario: Scenario, trials: int = 200, seed: int = 0,
                            quantized: bool = True, parameter: str = "frequency",
                            filt: FilterSpec = FilterSpec(),
                            search: RateSearchSpec = RateSearchSpec(),
                            grid: AveragingGrid = AveragingGrid()) -> BoundCheck:
    """Empirical estimator variance against the averaged bound.

    Every trial draws a uniform phase, a uniform offset in one RSS bin and
    fresh noise. One-bit trials are compared with the averaged one-bit CRB,
    unquantized ones with the unquantized reference bound. ``passed`` means
    var >= CRB - 3 SE with SE = var * sqrt(2 / (n - 1)).
    Variances are in (rad/s)^2 for frequency and dB^2 for amplitude.
    """
    if trials < 100:
        raise ValueError("monte_carlo_bound_check needs at least 100 trials")
    if parameter not in ("frequency", "amplitude"):
        raise ValueError("parameter must be 'frequency' or 'amplitude'")
    sc = scenario
    acq = sc.acquisition()
    fs = acq.sample_rate
    quant = sc.quantizer("one-bit")
    est = []
    rates = []
    for t in range(trials):
        rng = make_rng(seed, STREAM_NUISANCE, t)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        offset = rng.uniform(-0.5 * sc.step, 0.5 * sc.step)
        params = SinusoidParams(sc.amplitude, offset, sc.omega, phase, sc.noise_sigma)
        trace = synthesize_received_power(params, acq, seed * 1_000_003 + t)
        if quantized:
            trace = quantize(trace, quant)
        f_hat, _, deg, y = rate_from_array(trace.samples, fs, filt, search)
        if deg:
            continue
        rates.append(60.0 * f_hat)
        if parameter == "frequency":
            est.append(hz_to_omega(f_hat))
        else:
            est.append(amplitude_at(y, fs, f_hat, filt))
    n = len(est)
    if quantized:
        rep = averaged_crb(sc.amplitude, sc.omega, sc.noise_sigma, quant, acq, grid)
    else:
        rep = unquantized_crb_reference(
            SinusoidParams(sc.amplitude, 0.0, sc.omega, 0.0, sc.noise_sigma), acq)
    bound = rep.crb_frequency if parameter == "frequency" else rep.crb_amplitude
    if n >= 2:
        var = float(np.var(est, ddof=1))
        se = var * math.sqrt(2.0 / (n - 1))
    else:
        var, se = math.nan, math.nan
    inconclusive = n < 2 or (trials - n) / trials > 0.5
    passed = (not inconclusive) and var >= bound - 3.0 * se
    ratio = var / bound if bound > 0 else math.inf
    return BoundCheck(parameter, quantized, trials, n, var, se, bound, ratio, passed,
                      inconclusive, rmse_bpm(rates, sc.truth_bpm) if rates else math.nan,
                      float(np.mean(est)) if est else math.nan)


MITIGATION_KINDS = ("less-info", "never-both", "adaptive-rate", "adaptive-quantization")


@dataclass(frozen=True)
class MitigationPolicy:
    """Transceiver-side restriction on the RSS stream.

    ``points`` are (sample_rate Hz, step dB) operating points: one for
    ``less-info``, the offered pair for ``never-both``. ``adaptive-rate``
    uses ``low_rate_hz`` while the channel is quiet (activity below
    ``activity_threshold_db``). ``adaptive-quantization`` re-selects one of
    two threshold grids offset by half a step every ``switch_period_s``.
    """

    kind: str
    points: Tuple[Tuple[float, float], ...] = ()
    low_rate_hz: float = 0.25
    switch_period_s: float = 20.0
    activity_threshold_db: float = 1.0

    def __post_init__(self):
        if self.kind not in MITIGATION_KINDS:
            raise ValueError(f"unknown mitigation kind {self.kind!r}")
        pts = tuple((float(a), float(b)) for a, b in self.points)
        object.__setattr__(self, "points", pts)
        need = {"less-info": 1, "never-both": 2}.get(self.kind, 0)
        if len(pts) < need:
            raise ValueError(f"{self.kind} needs {need} (sample_rate, step) point(s)")
        if any(fs <= 0 or st <= 0 for fs, st in pts):
            raise ValueError("operating points need positive sample_rate and step")
        if self.low_rate_hz <= 0 or self.switch_period_s <= 0:
            raise ValueError("low_rate_hz and switch_period_s must be positive")


@dataclass
class MitigationReport:
    kind: str
    attacker_min_std_bpm: float
    attacker_min_std_db: float
    points: List[Dict[str, float]]
    notes: List[str]
    extra: Dict[str, float] = field(default_factory=dict)


def signed_offset(level, step, origin=0.0):
    """Distance from ``level`` to the nearest threshold origin + n*step, in
    [-step/2, step/2)."""
    return np.mod(np.asarray(level, float) - origin + 0.5 * step, step) - 0.5 * step


def adaptive_offset(level, step, origin=0.0):
    """|B| after choosing the better of the two half-step-shifted grids."""
    b1 = np.abs(signed_offset(level, step, origin))
    b2 = np.abs(signed_offset(level, step, origin + 0.5 * step))
    return np.maximum(b1, b2)


def _point_bound(sc: Scenario, fs, step, grid):
    rate, amp, sigma = _min_over_sigma(sc, fs, step, grid)
    return {"sample_rate": fs, "step": step, "min_std_rate": rate,
            "min_std_amplitude": amp, "sigma_opt": sigma}


def evaluate_mitigation(policy: MitigationPolicy, scenario: Scenario = Scenario(),
                        grid: AveragingGrid = AveragingGrid(), seed: int = 0) -> MitigationReport:
    sc = scenario
    if policy.kind == "less-info":
        pt = _point_bound(sc, *policy.points[0], grid)
        return MitigationReport(policy.kind, pt["min_std_rate"], pt["min_std_amplitude"], [pt],
                                ["RSS consumers (power control, link adaptation) get the same "
                                 "starved stream"])
    if policy.kind == "never-both":
        pts = [_point_bound(sc, fs, st, grid) for fs, st in policy.points]
        best = min(pts, key=lambda p: p["min_std_rate"])
        return MitigationReport(
            policy.kind, best["min_std_rate"], min(p["min_std_amplitude"] for p in pts), pts,
            ["attacker picks the more informative mode",
             "one mode active at a time; long switching time between modes"],
            {"attacker_best_sample_rate": best["sample_rate"], "attacker_best_step": best["step"]})
    if policy.kind == "adaptive-rate":
        pt = _point_bound(sc, policy.low_rate_hz, sc.step, grid)
        return MitigationReport(
            policy.kind, pt["min_std_rate"], pt["min_std_amplitude"], [pt],
            [f"quiet channel: RSS at {policy.low_rate_hz} Hz",
             f"high rate only while channel activity exceeds {policy.activity_threshold_db} dB"])
    # adaptive quantization
    rng = make_rng(seed, STREAM_NUISANCE)
    n_periods = max(1, int(math.ceil(3600.0 / policy.switch_period_s)))
    levels = rng.uniform(-60.0, -40.0, n_periods)
    chosen = adaptive_offset(levels, sc.step)
    worst = float(np.min(chosen))
    restricted = AveragingGrid(grid.n_phase, grid.n_offset, 0.25)
    acq = sc.acquisition()
    quant = sc.quantizer()
    of = find_optimal_noise(sc.amplitude, sc.omega, quant, acq, "frequency", grid=restricted)
    oa = find_optimal_noise(sc.amplitude, sc.omega, quant, acq, "amplitude", grid=restricted)
    base = _point_bound(sc, sc.sample_rate, sc.step, grid)
    static_at_opt = averaged_crb(sc.amplitude, sc.omega, of.sigma_opt, quant, acq, grid)
    return MitigationReport(
        policy.kind, of.min_std, oa.min_std,
        [{"sample_rate": sc.sample_rate, "step": sc.step, "min_std_rate": of.min_std,
          "min_std_amplitude": oa.min_std, "sigma_opt": of.sigma_opt}],
        [f"grid re-selected every {policy.switch_period_s} s to maximise |B|",
         "bound averages B over step/4 <= |B| <= step/2"],
        {"simulated_periods": n_periods, "min_selected_offset": worst,
         "guaranteed_offset": 0.25 * sc.step,
         "static_min_std_rate": base["min_std_rate"],
         "static_std_rate_at_sigma_opt": static_at_opt.std_rate_bpm})
