"""Trace files and CSV result export.

Floats are written with ``repr`` (shortest round-trip form), so a trace
survives export and import bit for bit and repeated exports are
byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .crb import CrbReport
from .experiments import (BoundCheck, ContourField, MitigationReport, StaircaseResult,
                          SweepResult)
from .signal import AcquisitionSpec, RssTrace

TRACE_MAGIC = "# rsscrb-trace"
TRACE_VERSION = 1


class TraceFormatError(ValueError):
    pass


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(value, (tuple, list)):
        return " ".join(fmt(v) for v in value)
    return str(value)


def _write(path, text):
    p = Path(path)
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        with open(p, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {p}: {exc.strerror}") from None
    return p


def export_trace(trace: RssTrace, path):
    """Write a TraceFile: ``#`` header, then ``index,value`` rows."""
    head = [f"{TRACE_MAGIC} version={TRACE_VERSION}",
            f"# sample_rate={fmt(float(trace.acquisition.sample_rate))}",
            f"# num_samples={trace.acquisition.num_samples}",
            f"# kind={trace.kind}",
            "# units=" + ("symbol" if trace.kind == "one-bit" else "dB")]
    if trace.rng_seed is not None:
        head.append(f"# seed={int(trace.rng_seed)}")
    if trace.noise_sigma is not None:
        head.append(f"# noise_sigma={fmt(float(trace.noise_sigma))}")
    rows = [f"{i},{fmt(v)}" for i, v in enumerate(trace.samples.tolist())]
    return _write(path, "\n".join(head + ["index,value"] + rows) + "\n")


def import_trace(path) -> RssTrace:
    p = Path(path)
    try:
        lines = p.read_text().splitlines()
    except OSError as exc:
        raise OSError(exc.errno, f"cannot read {p}: {exc.strerror}") from None
    if not lines or not lines[0].startswith(TRACE_MAGIC):
        raise TraceFormatError(f"{p}: not a trace file (missing '{TRACE_MAGIC}' header)")
    header: Dict[str, str] = {}
    for tok in lines[0][len(TRACE_MAGIC):].split():
        k, _, v = tok.partition("=")
        header[k] = v
    i = 1
    while i < len(lines) and lines[i].startswith("#"):
        k, _, v = lines[i][1:].strip().partition("=")
        header[k.strip()] = v.strip()
        i += 1
    if header.get("version") != str(TRACE_VERSION):
        raise TraceFormatError(f"{p}: unsupported trace version {header.get('version')!r}")
    for key in ("sample_rate", "num_samples", "kind"):
        if key not in header:
            raise TraceFormatError(f"{p}: header lacks {key}")
    if i >= len(lines) or lines[i].strip() != "index,value":
        raise TraceFormatError(f"{p}: missing 'index,value' column header")
    body = [ln for ln in lines[i + 1:] if ln.strip()]
    n = int(header["num_samples"])
    if len(body) != n:
        raise TraceFormatError(f"{p}: header says {n} rows, found {len(body)}")
    values = np.empty(n)
    for j, ln in enumerate(body):
        parts = ln.split(",")
        try:
            idx, val = int(parts[0]), float(parts[1])
            if len(parts) != 2:
                raise ValueError
        except (ValueError, IndexError):
            raise TraceFormatError(f"{p}: line {i + 2 + j}: non-numeric row {ln!r}") from None
        if idx != j:
            raise TraceFormatError(f"{p}: line {i + 2 + j}: expected index {j}, got {idx}")
        values[j] = val
    seed = int(header["seed"]) if "seed" in header else None
    sigma = float(header["noise_sigma"]) if "noise_sigma" in header else None
    acq = AcquisitionSpec(float(header["sample_rate"]), n)
    try:
        return RssTrace(values, acq, header["kind"], rng_seed=seed, noise_sigma=sigma)
    except ValueError as exc:
        raise TraceFormatError(f"{p}: {exc}") from None


@dataclass
class Table:
    columns: Sequence[str]
    units: Dict[str, str]
    rows: List[tuple] = field(default_factory=list)
    meta: Dict[str, object] = field(default_factory=dict)


def _crb_table(rep: CrbReport):
    cols = ("method", "averaged", "n_phase", "n_offset", "crb_amplitude", "crb_frequency",
            "std_amplitude", "std_rate", "bounded_fraction", "median_std_rate")
    units = {"crb_amplitude": "dB^2", "crb_frequency": "(rad/s)^2", "std_amplitude": "dB",
             "std_rate": "bpm", "median_std_rate": "bpm", "bounded_fraction": "1"}
    row = (rep.method, rep.averaged, rep.n_phase, rep.n_offset, rep.crb_amplitude,
           rep.crb_frequency, rep.std_amplitude_db, rep.std_rate_bpm, rep.bounded_fraction,
           rep.median_std_rate_bpm())
    return Table(cols, units, [row])


def to_table(result) -> Table:
    if isinstance(result, Table):
        return result
    if isinstance(result, SweepResult):
        return Table(result.columns, result.units, list(result.rows), dict(result.meta))
    if isinstance(result, CrbReport):
        return _crb_table(result)
    if isinstance(result, ContourField):
        rows = []
        for i, st in enumerate(result.steps):
            for j, fs in enumerate(result.sample_rates):
                rows.append((float(fs), float(st), result.std_rate[i, j],
                             result.std_amplitude[i, j], result.sigma_opt[i, j]))
        return Table(("sample_rate", "step_delta", "min_std_rate", "min_std_amplitude", "sigma_opt"),
                     {"sample_rate": "Hz", "step_delta": "dB", "min_std_rate": "bpm",
                      "min_std_amplitude": "dB", "sigma_opt": "dB"}, rows, dict(result.meta))
    if isinstance(result, StaircaseResult):
        rows = [(i, s, r, int(w), d) for i, (s, r, w, d) in enumerate(
            zip(result.sigmas, result.rmse, result.windows, result.degenerate_fraction))]
        return Table(("segment", "interference_sigma", "rmse", "windows", "degenerate_fraction"),
                     {"interference_sigma": "dB", "rmse": "bpm", "degenerate_fraction": "1"},
                     rows, dict(result.meta))
    if isinstance(result, MitigationReport):
        cols = ("sample_rate", "step", "min_std_rate", "min_std_amplitude", "sigma_opt")
        rows = [tuple(p[c] for c in cols) for p in result.points]
        meta = {"kind": result.kind, "attacker_min_std_rate": result.attacker_min_std_bpm,
                "attacker_min_std_amplitude": result.attacker_min_std_db, **result.extra}
        meta.update({f"note.{i}": n for i, n in enumerate(result.notes)})
        return Table(cols, {"sample_rate": "Hz", "step": "dB", "min_std_rate": "bpm",
                            "min_std_amplitude": "dB", "sigma_opt": "dB"}, rows, meta)
    if isinstance(result, BoundCheck):
        d = result.__dict__
        return Table(tuple(d), {"empirical_variance": "(rad/s)^2 or dB^2", "rmse_bpm": "bpm"},
                     [tuple(d.values())])
    raise TypeError(f"cannot export {type(result).__name__}")


def render_csv(result, seed: Optional[int] = None, config_hash: Optional[str] = None) -> str:
    t = to_table(result)
    lines = ["# rsscrb-result version=1"]
    if seed is not None:
        lines.append(f"# seed={int(seed)}")
    if config_hash is not None:
        lines.append(f"# config_hash={config_hash}")
    lines.append("# units=" + ",".join(f"{c}:{t.units.get(c, '-')}" for c in t.columns))
    for k, v in t.meta.items():
        lines.append(f"# {k}={fmt(v)}")
    lines.append(",".join(t.columns))
    lines.extend(",".join(fmt(v) for v in row) for row in t.rows)
    return "\n".join(lines) + "\n"


def export_csv(result, path, seed: Optional[int] = None, config_hash: Optional[str] = None):
    """Write ``#`` metadata lines, the column header and one line per row."""
    return _write(path, render_csv(result, seed, config_hash))


def export_contours(fld: ContourField, path, seed=None, config_hash=None):
    """Iso-lines as rows of (level, line, vertex, sample_rate, step_delta)."""
    rows = []
    for level in sorted(fld.contours):
        for li, line in enumerate(fld.contours[level]):
            for vi, (x, y) in enumerate(line):
                rows.append((level, li, vi, float(x), float(y)))
    t = Table(("level", "line", "vertex", "sample_rate", "step_delta"),
              {"level": "bpm", "sample_rate": "Hz", "step_delta": "dB"}, rows, dict(fld.meta))
    return export_csv(t, path, seed, config_hash)


def read_csv(path):
    """Parse an exported CSV into ``(meta, columns, rows-as-strings)``."""
    meta, columns, rows = {}, None, []
    for ln in Path(path).read_text().splitlines():
        if ln.startswith("#"):
            k, _, v = ln[1:].strip().partition("=")
            meta[k.strip()] = v
        elif columns is None:
            columns = ln.split(",")
        elif ln:
            rows.append(ln.split(","))
    return meta, columns, rows
