"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line. Criterion 6 is
known to fail for the specified estimator and is marked strict xfail; the
analysis is in the project notes.
"""

import math

import numpy as np
import pytest

from rsscrb.cli import STAIRCASE_MULTIPLES, main
from rsscrb.crb import find_optimal_noise, unquantized_crb_reference
from rsscrb.experiments import (MitigationPolicy, Scenario, StaircaseScenario, SweepSpec,
                                contour_grid, evaluate_mitigation, hi_staircase_sim,
                                monte_carlo_bound_check, sweep_sampling_rate, sweep_step_size)
from rsscrb.oracles import check_fim_forms, check_partials
from rsscrb.signal import AcquisitionSpec, QuantizerSpec, SinusoidParams, hz_to_omega

OMEGA = hz_to_omega(0.25)
ACQ = AcquisitionSpec.from_duration(10.0, 30.0)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}")
        return ok
    return emit


def test_criterion_1_fim_correctness(report):
    forms = check_fim_forms(500, seed=0)
    parts = check_partials(1000, seed=0)
    ok = forms.passed and parts.passed
    report(1, ok, f"closed vs generic worst {forms.worst:.2e} (<1e-10, 500 draws); "
                  f"partials vs FD worst {parts.worst:.2e} (<1e-5, 1000 draws)")
    assert ok


def test_criterion_2_sigma_opt_landmark(report):
    steps = (0.5, 1.0, 2.0, 4.0)
    opt = {d: find_optimal_noise(0.1, OMEGA, QuantizerSpec(d, 0.0, "one-bit"), ACQ).sigma_opt
           for d in steps}
    ratios = {d: opt[d] / d for d in steps}
    doubling = [opt[2 * d] / opt[d] for d in steps if 2 * d in opt]
    ok = all(0.20 <= r <= 0.30 for r in ratios.values()) and all(1.7 <= r <= 2.3 for r in doubling)
    report(2, ok, "sigma_opt/step " + ", ".join(f"{d:g}:{r:.3f}" for d, r in ratios.items())
           + "; doubling ratios " + ", ".join(f"{r:.3f}" for r in doubling))
    assert ok


def test_criterion_3_step_size_scaling(report):
    res = sweep_step_size(SweepSpec("step_delta", (0.5, 1.0, 2.0, 4.0, 8.0)))
    r2_lin = res.meta["fit.rate_linear_r2"]
    r2_quad = res.meta["fit.amplitude_quadratic_r2"]
    ok = r2_lin >= 0.98 and r2_quad >= 0.98
    report(3, ok, f"frequency linear R^2 {r2_lin:.5f}, amplitude quadratic R^2 {r2_quad:.5f}")
    assert ok


def test_criterion_4_oversampling(report):
    ok = True
    parts = []
    for step in (1.0, 2.0):
        res = sweep_sampling_rate(SweepSpec("sample_rate", (1, 2, 5, 10, 20, 50),
                                            Scenario(step=step, noise_sigma=0.7)))
        f, a = res.column("std_rate"), res.column("std_amplitude")
        mono = bool(np.all(np.diff(f) < 0) and np.all(np.diff(a) < 0))
        ok &= mono
        parts.append(f"step {step:g}: f {f[0]:.3g}->{f[-1]:.3g} bpm, "
                     f"A {a[0]:.3g}->{a[-1]:.3g} dB, strictly decreasing={mono}")
    report(4, ok, "; ".join(parts))
    assert ok


MC_SCENARIOS = [
    ("one-bit sigma 0.25", Scenario(noise_sigma=0.25), True),
    ("one-bit sigma 0.7", Scenario(noise_sigma=0.7), True),
    ("unquantized sigma 0.25", Scenario(noise_sigma=0.25), False),
    ("unquantized sigma 0.7", Scenario(noise_sigma=0.7), False),
    ("one-bit step 2 sigma 0.5", Scenario(step=2.0, noise_sigma=0.5), True),
]


def test_criterion_5_bound_validity(report):
    results = [(name, monte_carlo_bound_check(sc, 200, seed=i, quantized=q))
               for i, (name, sc, q) in enumerate(MC_SCENARIOS)]
    ok = all(r.passed for _, r in results)
    report(5, ok, "; ".join(f"{n}: var/CRB {r.ratio:.1f} pass={r.passed}" for n, r in results))
    assert ok


@pytest.mark.xfail(strict=True, reason="peak-picked amplitude estimator is biased and its "
                                       "variance falls below 2 sigma^2/N at A=0.1, sigma=0.7")
def test_criterion_6_unquantized_reference(report):
    rep = unquantized_crb_reference(SinusoidParams(0.1, 0.0, OMEGA, 0.0, 0.7), ACQ)
    exact = rep.crb_amplitude == 2 * 0.7 ** 2 / 300 and round(rep.crb_amplitude, 7) == 3.2667e-3
    mc = monte_carlo_bound_check(Scenario(noise_sigma=0.7), 500, seed=6, quantized=False,
                                 parameter="amplitude")
    mse = mc.empirical_variance + (mc.mean_estimate - 0.1) ** 2
    ok = exact and mc.empirical_variance >= rep.crb_amplitude
    report(6, ok, f"2 sigma^2/N = {rep.crb_amplitude:.5g} exact={exact}; MC amplitude variance "
                  f"{mc.empirical_variance:.4g} (mean {mc.mean_estimate:.4f}, MSE {mse:.4g})")
    assert ok


def test_criterion_7_staircase(report):
    sc = StaircaseScenario()
    acq = AcquisitionSpec.from_duration(sc.sample_rate, sc.window_seconds)
    s_opt = find_optimal_noise(sc.amplitude, hz_to_omega(sc.frequency_hz),
                               QuantizerSpec(sc.step, sc.threshold, "one-bit"), acq).sigma_opt
    schedule = [m * s_opt for m in STAIRCASE_MULTIPLES]
    res = hi_staircase_sim(schedule, sc, trials=2, seed=7)
    rmse = dict(zip(STAIRCASE_MULTIPLES, res.rmse))
    ok = (rmse[0.0] >= 10 and rmse[1.0] <= 3 and rmse[4.0] >= rmse[1.0]
          and int(res.windows.min()) >= 200)
    report(7, ok, f"sigma_opt {s_opt:.4f} dB; RMSE at 0: {rmse[0.0]:.2f}, sigma_opt: "
                  f"{rmse[1.0]:.2f}, 4 sigma_opt: {rmse[4.0]:.2f} bpm; "
                  f"{int(res.windows.min())} windows per segment")
    assert ok


def test_criterion_8_mitigation_landmark(report):
    fld = contour_grid((1, 2, 5, 10, 20, 50), (0.5, 1, 2, 4, 8), levels=(2.0,))
    at_20_8 = fld.value_at(20.0, 8.0)
    rep = evaluate_mitigation(MitigationPolicy("never-both", ((4, 2), (20, 8))))
    best = min(p["min_std_rate"] for p in rep.points)
    ok = at_20_8 >= 2.0 and rep.attacker_min_std_bpm == best
    report(8, ok, f"(20 Hz, 8 dB) min std {at_20_8:.3f} bpm; never-both attacker-best "
                  f"{rep.attacker_min_std_bpm:.3f} bpm = min of "
                  + ", ".join(f"{p['min_std_rate']:.3f}" for p in rep.points))
    assert ok


DETERMINISM_RUNS = [["simulate", "--quantize", "one-bit"], ["crb"], ["sweep", "--axis", "noise"],
                    ["sweep", "--axis", "step"], ["sweep", "--axis", "fs"], ["contour"],
                    ["staircase"], ["mitigate"]]


def test_criterion_9_determinism(report, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[run]\nseed = 11\n")
    ok = True
    checked = 0
    for i, argv in enumerate(DETERMINISM_RUNS):
        dirs = [tmp_path / f"{i}{tag}" for tag in "ab"]
        for d in dirs:
            ok &= main(argv + ["-c", str(cfg), "-o", str(d)]) == 0
        for f in sorted(dirs[0].iterdir()):
            ok &= f.read_bytes() == (dirs[1] / f.name).read_bytes()
            checked += 1
    report(9, ok, f"{len(DETERMINISM_RUNS)} subcommand runs, {checked} files byte-identical")
    assert ok
