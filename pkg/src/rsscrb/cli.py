"""``rsscrb`` command line.

Exit codes: 0 ok, 1 runtime failure, 2 usage error, 3 validation error.
Output files go to ``--output-dir``, else ``run.output_dir`` from the
config, else ``$RSSCRB_OUTPUT_DIR``, else the current directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io as rio
from .config import ConfigError, RunConfig, default_config, parse_config
from .crb import averaged_crb, find_optimal_noise
from .dsp import estimate_amplitude
from .experiments import (SweepSpec, contour_grid, evaluate_mitigation, hi_staircase_sim,
                          run_sweep)
from .signal import AcquisitionSpec, QuantizerSpec, SinusoidParams, quantize, synthesize_received_power

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2, 3
OUTPUT_ENV = "RSSCRB_OUTPUT_DIR"

AXIS_ALIASES = {"noise": "noise_sigma", "sigma": "noise_sigma", "noise_sigma": "noise_sigma",
                "step": "step_delta", "delta": "step_delta", "step_delta": "step_delta",
                "fs": "sample_rate", "rate": "sample_rate", "sample_rate": "sample_rate",
                "amplitude": "amplitude"}
STAIRCASE_MULTIPLES = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0)


class UsageError(Exception):
    pass


def _load(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else default_config()
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("run.seed: must be >= 0")
        cfg.values["run"]["seed"] = args.seed
    return cfg


def _outdir(args, cfg) -> Path:
    d = args.output_dir or cfg.get("run.output_dir") or os.environ.get(OUTPUT_ENV) or "."
    return Path(d)


def _emit(result, name, args, cfg):
    path = _outdir(args, cfg) / name
    rio.export_csv(result, path, cfg.seed, cfg.config_hash())
    print(f"wrote {path}")
    return path


def cmd_simulate(args, cfg):
    s, sc = cfg.section("scenario"), cfg.scenario()
    params = SinusoidParams.from_hz(s["amplitude"], s["dc_offset"], s["frequency_hz"],
                                    s["phase"], s["noise_sigma"])
    trace = synthesize_received_power(params, sc.acquisition(), cfg.seed)
    mode = args.quantize or "none"
    if mode != "none":
        q = cfg.quantizer()
        trace = quantize(trace, QuantizerSpec(q.step, q.threshold, mode))
    path = Path(args.out) if args.out else _outdir(args, cfg) / "trace.csv"
    rio.export_trace(trace, path)
    print(f"wrote {path} ({len(trace)} samples, {trace.kind})")


def cmd_estimate(args, cfg):
    trace = rio.import_trace(args.trace)
    res = estimate_amplitude(trace, cfg.filter_spec(), cfg.search_spec())
    flag = " (degenerate: trace never changes level)" if res.degenerate_flag else ""
    print(f"rate: {res.rate_bpm:.3f} bpm ({res.f_hat:.4f} Hz){flag}")
    unit = "symbol units" if trace.kind == "one-bit" else "dB"
    print(f"amplitude: {res.amplitude_hat:.6g} {unit}")


def cmd_crb(args, cfg):
    sc = cfg.scenario()
    rep = averaged_crb(sc.amplitude, sc.omega, sc.noise_sigma, cfg.quantizer(),
                       sc.acquisition(), cfg.averaging_grid())
    print(f"averaged std A_hat: {rep.std_amplitude_db:.6g} dB")
    print(f"averaged std f_hat: {rep.std_rate_bpm:.6g} bpm")
    if not rep.bounded:
        print(f"bounded grid fraction: {rep.bounded_fraction:.3f}; "
              f"median std f_hat: {rep.median_std_rate_bpm():.6g} bpm")
    _emit(rep, "crb.csv", args, cfg)


def _default_values(axis, cfg):
    sc = cfg.scenario()
    if axis == "noise_sigma":
        return tuple(np.geomspace(sc.step / 50, 2 * sc.step, 41))
    if axis == "step_delta":
        return cfg.get("sweep.steps")
    if axis == "sample_rate":
        return cfg.get("sweep.sample_rates")
    return tuple(np.round(np.geomspace(0.025, 0.4, 9), 6))


def cmd_sweep(args, cfg):
    axis = AXIS_ALIASES.get(args.axis or cfg.get("sweep.axis"))
    if axis is None:
        raise UsageError(f"unknown sweep axis {args.axis!r}")
    values = cfg.get("sweep.values") or _default_values(axis, cfg)
    sc = cfg.scenario()
    if axis == "sample_rate" and "scenario.noise_sigma" not in cfg.explicit:
        sc = sc.replace(noise_sigma=0.7)
    res = run_sweep(SweepSpec(axis, values, sc, cfg.averaging_grid()))
    if axis == "noise_sigma":
        col = res.column("std_rate")
        i = int(np.argmin(col))
        print(f"min std f_hat {col[i]:.6g} bpm at sigma = {values[i]:.4g} dB "
              f"({values[i] / sc.step:.3f} x step)")
    for k, v in res.meta.items():
        if k.startswith(("fit.", "ratio.")):
            print(f"{k} = {rio.fmt(v)}")
    _emit(res, f"sweep_{axis}.csv", args, cfg)


def cmd_contour(args, cfg):
    fld = contour_grid(cfg.get("sweep.sample_rates"), cfg.get("sweep.steps"), cfg.scenario(),
                       cfg.averaging_grid(), cfg.get("sweep.levels"), workers=args.workers)
    _emit(fld, "contour_field.csv", args, cfg)
    path = _outdir(args, cfg) / "contour_lines.csv"
    rio.export_contours(fld, path, cfg.seed, cfg.config_hash())
    print(f"wrote {path}")


def staircase_sigma_opt(cfg):
    st = cfg.staircase_scenario()
    acq = AcquisitionSpec.from_duration(st.sample_rate, st.window_seconds)
    opt = find_optimal_noise(st.amplitude, 2 * np.pi * st.frequency_hz,
                             QuantizerSpec(st.step, st.threshold, "one-bit"), acq,
                             grid=cfg.averaging_grid())
    return opt.sigma_opt


def cmd_staircase(args, cfg):
    schedule = cfg.get("staircase.schedule")
    if not schedule:
        s_opt = staircase_sigma_opt(cfg)
        schedule = tuple(m * s_opt for m in STAIRCASE_MULTIPLES)
        print(f"schedule: multiples {STAIRCASE_MULTIPLES} of sigma_opt = {s_opt:.4g} dB")
    res = hi_staircase_sim(schedule, cfg.staircase_scenario(), cfg.get("staircase.trials"),
                           cfg.seed, cfg.filter_spec(), cfg.search_spec(),
                           cfg.get("staircase.degenerate_policy"))
    for s, r, w in zip(res.sigmas, res.rmse, res.windows):
        print(f"sigma {s:8.4f} dB  rmse {r:7.3f} bpm  windows {w}")
    _emit(res, "staircase.csv", args, cfg)


def cmd_mitigate(args, cfg):
    rep = evaluate_mitigation(cfg.mitigation_policy(), cfg.scenario(), cfg.averaging_grid(), cfg.seed)
    print(f"{rep.kind}: attacker min std f_hat {rep.attacker_min_std_bpm:.6g} bpm, "
          f"A_hat {rep.attacker_min_std_db:.6g} dB")
    for note in rep.notes:
        print(f"  - {note}")
    _emit(rep, f"mitigation_{rep.kind}.csv", args, cfg)


def cmd_selftest(args, cfg):
    from .oracles import run_all

    ok = True
    for r in run_all(cfg.seed, 0.1 if args.quick else 1.0):
        status = "PASS" if r.passed else "FAIL"
        ok &= r.passed
        print(f"{status} {r.name}: worst {r.worst:.3g} (tol {r.tolerance:g}, {r.draws} draws)")
    return EXIT_OK if ok else EXIT_RUNTIME


COMMANDS = {"simulate": cmd_simulate, "estimate": cmd_estimate, "crb": cmd_crb,
            "sweep": cmd_sweep, "contour": cmd_contour, "staircase": cmd_staircase,
            "mitigate": cmd_mitigate, "selftest": cmd_selftest}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="INI run configuration")
    common.add_argument("--seed", type=int, help="override run.seed")
    common.add_argument("-o", "--output-dir", help=f"output directory (default ${OUTPUT_ENV} or .)")

    p = argparse.ArgumentParser(prog="rsscrb", description="Quantized-RSS breathing estimation bounds")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    s = sub.add_parser("simulate", parents=[common], help="synthesize a trace file")
    s.add_argument("--quantize", choices=("none", "one-bit", "uniform"))
    s.add_argument("--out", help="trace path (default OUTPUT_DIR/trace.csv)")
    s = sub.add_parser("estimate", parents=[common], help="estimate rate and amplitude of a trace")
    s.add_argument("trace")
    sub.add_parser("crb", parents=[common], help="averaged one-bit CRB at the configured point")
    s = sub.add_parser("sweep", parents=[common], help="bound sweep over one axis")
    s.add_argument("--axis", help="noise | step | fs | amplitude")
    s = sub.add_parser("contour", parents=[common], help="min-over-sigma field over (fs, step)")
    s.add_argument("--workers", type=int, default=1)
    sub.add_parser("staircase", parents=[common], help="stepped-interference simulation")
    sub.add_parser("mitigate", parents=[common], help="score a mitigation policy")
    s = sub.add_parser("selftest", parents=[common], help="run the numerical oracles")
    s.add_argument("--quick", action="store_true", help="10%% of the oracle draws")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _load(args)
        rc = COMMANDS[args.command](args, cfg)
        return EXIT_OK if rc is None else rc
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rsscrb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, rio.TraceFormatError, ValueError) as exc:
        print(f"rsscrb: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        print(f"rsscrb: failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
