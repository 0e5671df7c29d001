"""INI run configuration with defaults, key-path validation and a stable hash."""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Tuple

from .crb import AveragingGrid
from .dsp import FilterSpec, RateSearchSpec
from .experiments import AXES, MITIGATION_KINDS, MitigationPolicy, Scenario, StaircaseScenario
from .signal import QuantizerSpec


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key path."""


def _float(v):
    return float(v)


def _int(v):
    f = float(v)
    if f != int(f):
        raise ValueError(f"{v!r} is not an integer")
    return int(f)


def _floats(v):
    return tuple(float(s) for s in v.replace(",", " ").split())


def _pairs(v):
    # "4:2, 20:8" -> ((4.0, 2.0), (20.0, 8.0))
    out = []
    for item in v.replace(";", ",").split(","):
        if item.strip():
            a, b = item.split(":")
            out.append((float(a), float(b)))
    return tuple(out)


def _str(v):
    return v.strip()


def _pos(x):
    return x > 0


def _nonneg(x):
    return x >= 0


# section -> key -> (parser, default, range check or None, description of range)
SCHEMA: Dict[str, Dict[str, tuple]] = {
    "scenario": {
        "amplitude": (_float, 0.1, _nonneg, ">= 0"),
        "frequency_hz": (_float, 0.25, _pos, "> 0"),
        "noise_sigma": (_float, 0.25, _nonneg, ">= 0"),
        "dc_offset": (_float, 0.0, None, ""),
        "phase": (_float, 0.0, None, ""),
    },
    "acquisition": {
        "sample_rate": (_float, 10.0, _pos, "> 0"),
        "duration": (_float, 30.0, _pos, "> 0"),
    },
    "quantizer": {
        "step": (_float, 1.0, _pos, "> 0"),
        "threshold": (_float, 0.0, None, ""),
        "mode": (_str, "one-bit", lambda s: s in ("one-bit", "uniform"), "one-bit or uniform"),
    },
    "filter": {
        "order": (_int, 4, lambda n: n >= 2 and n % 2 == 0, "even and >= 2"),
        "cutoff_hz": (_float, 0.5, _pos, "> 0"),
        "window_seconds": (_float, 30.0, _pos, "> 0"),
    },
    "search": {
        "f_min": (_float, 0.1, _pos, "> 0"),
        "f_max": (_float, 0.67, _pos, "> 0"),
        "resolution": (_float, 0.001, _pos, "> 0"),
    },
    "averaging": {
        "n_phase": (_int, 16, lambda n: n >= 1, ">= 1"),
        "n_offset": (_int, 33, lambda n: n >= 1, ">= 1"),
    },
    "sweep": {
        "axis": (_str, "noise_sigma", lambda s: s in AXES, " | ".join(AXES)),
        "values": (_floats, (), None, ""),
        "sample_rates": (_floats, (1.0, 2.0, 5.0, 10.0, 20.0, 50.0), None, ""),
        "steps": (_floats, (0.5, 1.0, 2.0, 4.0, 8.0), None, ""),
        "levels": (_floats, (0.5, 1.0, 2.0, 5.0), None, ""),
    },
    "staircase": {
        "schedule": (_floats, (), None, ""),
        "mean_level": (_float, -53.7, None, ""),
        "sample_rate": (_float, 20.0, _pos, "> 0"),
        "mode": (_str, "uniform", lambda s: s in ("one-bit", "uniform"), "one-bit or uniform"),
        "segment_seconds": (_float, 151.0, _pos, "> 0"),
        "window_seconds": (_float, 30.0, _pos, "> 0"),
        "hop_seconds": (_float, 1.0, _pos, "> 0"),
        "trials": (_int, 2, lambda n: n >= 1, ">= 1"),
        "degenerate_policy": (_str, "guess", lambda s: s in ("guess", "fmin", "exclude"),
                              "guess | fmin | exclude"),
    },
    "mitigation": {
        "kind": (_str, "never-both", lambda s: s in MITIGATION_KINDS, " | ".join(MITIGATION_KINDS)),
        "points": (_pairs, ((4.0, 2.0), (20.0, 8.0)), None, ""),
        "low_rate_hz": (_float, 0.25, _pos, "> 0"),
        "switch_period_s": (_float, 20.0, _pos, "> 0"),
        "activity_threshold_db": (_float, 1.0, _nonneg, ">= 0"),
    },
    "montecarlo": {
        "trials": (_int, 200, lambda n: n >= 100, ">= 100"),
        "quantized": (lambda v: v.strip().lower() in ("1", "true", "yes", "on"), True, None, ""),
    },
    "run": {
        "seed": (_int, 0, _nonneg, ">= 0"),
        "output_dir": (_str, "", None, ""),
    },
}


@dataclass
class RunConfig:
    values: Dict[str, Dict[str, object]]
    source: str = ""
    explicit: Tuple[str, ...] = field(default_factory=tuple)

    def get(self, path):
        section, key = path.split(".")
        return self.values[section][key]

    def section(self, name):
        return dict(self.values[name])

    @property
    def seed(self):
        return self.get("run.seed")

    def config_hash(self):
        """SHA-256 of the canonical resolved config (defaults included)."""
        lines = []
        for sec in sorted(self.values):
            for key in sorted(self.values[sec]):
                lines.append(f"{sec}.{key}={self.values[sec][key]!r}")
        return hashlib.sha256("\n".join(lines).encode()).hexdigest()[:16]

    def scenario(self) -> Scenario:
        s, a, q = self.values["scenario"], self.values["acquisition"], self.values["quantizer"]
        return Scenario(s["amplitude"], s["frequency_hz"], q["step"], a["sample_rate"],
                        a["duration"], s["noise_sigma"])

    def quantizer(self) -> QuantizerSpec:
        q = self.values["quantizer"]
        return QuantizerSpec(q["step"], q["threshold"], q["mode"])

    def filter_spec(self) -> FilterSpec:
        return FilterSpec(**self.values["filter"])

    def search_spec(self) -> RateSearchSpec:
        return RateSearchSpec(**self.values["search"])

    def averaging_grid(self) -> AveragingGrid:
        return AveragingGrid(**self.values["averaging"])

    def staircase_scenario(self) -> StaircaseScenario:
        st = self.values["staircase"]
        s, q = self.values["scenario"], self.values["quantizer"]
        return StaircaseScenario(s["amplitude"], s["frequency_hz"], q["step"], q["threshold"],
                                 st["mode"], st["mean_level"], st["sample_rate"],
                                 st["segment_seconds"], st["window_seconds"], st["hop_seconds"])

    def mitigation_policy(self) -> MitigationPolicy:
        m = self.values["mitigation"]
        return MitigationPolicy(m["kind"], m["points"], m["low_rate_hz"], m["switch_period_s"],
                                m["activity_threshold_db"])


def default_config() -> RunConfig:
    return RunConfig({sec: {k: spec[1] for k, spec in keys.items()} for sec, keys in SCHEMA.items()})


def _cross_checks(cfg: RunConfig):
    fs = cfg.get("acquisition.sample_rate")
    if cfg.get("search.f_min") >= cfg.get("search.f_max"):
        raise ConfigError("search.f_min: must be below search.f_max")
    if cfg.get("scenario.frequency_hz") >= fs / 2:
        raise ConfigError("scenario.frequency_hz: must be below Nyquist of acquisition.sample_rate")
    if cfg.get("mitigation.kind") in ("less-info", "never-both"):
        need = 1 if cfg.get("mitigation.kind") == "less-info" else 2
        if len(cfg.get("mitigation.points")) < need:
            raise ConfigError(f"mitigation.points: {cfg.get('mitigation.kind')} needs {need} point(s)")
    for path in ("sweep.values", "sweep.sample_rates", "sweep.steps"):
        vals = cfg.get(path)
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError(f"{path}: values must be strictly increasing")


def parse_config_text(text: str, source="<string>") -> RunConfig:
    parser = configparser.ConfigParser(strict=True, interpolation=None,
                                       inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        # DuplicateOptionError / DuplicateSectionError / ParsingError carry line numbers
        raise ConfigError(f"{source}: {exc}") from None
    cfg = default_config()
    cfg.source = source
    explicit = []
    for sec in parser.sections():
        if sec not in SCHEMA:
            raise ConfigError(f"{sec}: unknown section (known: {', '.join(SCHEMA)})")
        for key, raw in parser.items(sec):
            path = f"{sec}.{key}"
            if key not in SCHEMA[sec]:
                raise ConfigError(f"{path}: unknown key")
            conv, _, check, rng = SCHEMA[sec][key]
            try:
                value = conv(raw)
            except (ValueError, TypeError):
                raise ConfigError(f"{path}: cannot parse {raw!r}") from None
            if isinstance(value, float) and not math.isfinite(value):
                raise ConfigError(f"{path}: must be finite")
            if check is not None and not check(value):
                raise ConfigError(f"{path}: {raw!r} out of range ({rng})")
            cfg.values[sec][key] = value
            explicit.append(path)
    cfg.explicit = tuple(explicit)
    _cross_checks(cfg)
    return cfg


def parse_config(path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"{p}: cannot read config ({exc.strerror})") from None
    return parse_config_text(text, str(p))
