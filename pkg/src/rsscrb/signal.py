"""Breathing-modulated received power, interference noise, RSS quantization.

All values are in dB. A trace is the sampled model

    x[k] = A cos(omega Ts k + phi) + B + v[k],  v[k] ~ N(0, sigma^2)

followed optionally by a one-bit or uniform quantizer.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

TWO_PI = 2.0 * math.pi

CONTINUOUS = "continuous-power"
ONE_BIT = "one-bit"
UNIFORM = "uniform-quantized"
TRACE_KINDS = (CONTINUOUS, ONE_BIT, UNIFORM)

# SeedSequence stream tags so independent draws never share a stream
STREAM_SYNTH = 1
STREAM_INTERFERENCE = 2
STREAM_NUISANCE = 3
STREAM_GUESS = 4


def make_rng(seed, *keys):
    """Counter-based (Philox) generator for ``seed`` and integer ``keys``.

    Distinct key tuples give statistically independent streams, so Monte
    Carlo trials can run in any order or in parallel with identical results.
    """
    if seed is None or int(seed) < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    ss = np.random.SeedSequence([int(seed), *(int(k) for k in keys)])
    return np.random.Generator(np.random.Philox(ss))


def hz_to_omega(f):
    return TWO_PI * f


def omega_to_hz(omega):
    return omega / TWO_PI


def omega_to_bpm(omega):
    return 60.0 * omega / TWO_PI


def bpm_to_omega(bpm):
    return TWO_PI * bpm / 60.0


def _check_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SinusoidParams:
    """Breathing sinusoid and noise: theta = [A, B, omega, phi] plus sigma."""

    amplitude: float
    dc_offset: float
    omega: float
    phase: float = 0.0
    noise_sigma: float = 0.0

    def __post_init__(self):
        _check_finite(amplitude=self.amplitude, dc_offset=self.dc_offset,
                      omega=self.omega, phase=self.phase,
                      noise_sigma=self.noise_sigma)
        if self.amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        object.__setattr__(self, "phase", float(self.phase) % TWO_PI)

    @classmethod
    def from_hz(cls, amplitude, dc_offset, frequency_hz, phase=0.0, noise_sigma=0.0):
        return cls(amplitude, dc_offset, hz_to_omega(frequency_hz), phase, noise_sigma)

    @property
    def frequency_hz(self):
        return omega_to_hz(self.omega)

    @property
    def rate_bpm(self):
        return omega_to_bpm(self.omega)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class AcquisitionSpec:
    sample_rate: float
    num_samples: int

    def __post_init__(self):
        _check_finite(sample_rate=self.sample_rate)
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be > 0")
        if int(self.num_samples) != self.num_samples or self.num_samples < 2:
            raise ValueError("num_samples must be an integer >= 2")
        object.__setattr__(self, "num_samples", int(self.num_samples))

    @classmethod
    def from_duration(cls, sample_rate, seconds):
        return cls(sample_rate, max(2, int(round(sample_rate * seconds))))

    @property
    def sample_period(self):
        return 1.0 / self.sample_rate

    @property
    def duration(self):
        return self.num_samples * self.sample_period

    def sample_index(self):
        return np.arange(self.num_samples, dtype=np.float64)


@dataclass(frozen=True)
class QuantizerSpec:
    """RSS quantizer. ``one-bit`` keeps only the side of ``threshold``;
    ``uniform`` uses mid-rise bins of width ``step`` anchored at it."""

    step: float = 1.0
    threshold: float = 0.0
    mode: str = "uniform"

    def __post_init__(self):
        if self.mode not in ("one-bit", "uniform"):
            raise ValueError(f"unknown quantizer mode {self.mode!r}")
        _check_finite(step=self.step, threshold=self.threshold)
        if self.step <= 0:
            raise ValueError("step must be > 0")


@dataclass(frozen=True, eq=False)
class RssTrace:
    samples: np.ndarray
    acquisition: AcquisitionSpec
    kind: str = CONTINUOUS
    rng_seed: Optional[int] = None
    # effective pre-quantization noise std, when known
    noise_sigma: Optional[float] = None

    def __post_init__(self):
        if self.kind not in TRACE_KINDS:
            raise ValueError(f"unknown trace kind {self.kind!r}")
        x = np.array(self.samples, dtype=np.float64).ravel()
        if x.size != self.acquisition.num_samples:
            raise ValueError(
                f"trace has {x.size} samples but acquisition says "
                f"{self.acquisition.num_samples}")
        if not np.all(np.isfinite(x)):
            raise ValueError("trace samples must be finite")
        if self.kind == ONE_BIT and not np.all(np.abs(x) == 1.0):
            bad = x[np.abs(x) != 1.0][0]
            raise ValueError(f"one-bit trace contains {bad!r}; alphabet is {{-1, +1}}")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def synthesize_received_power(params: SinusoidParams, acq: AcquisitionSpec, seed: int) -> RssTrace:
    """Sample the breathing model; noise drawn from ``make_rng(seed)``."""
    k = acq.sample_index()
    x = params.amplitude * np.cos(params.omega * acq.sample_period * k + params.phase)
    x = x + params.dc_offset
    if params.noise_sigma > 0:
        rng = make_rng(seed, STREAM_SYNTH)
        x = x + params.noise_sigma * rng.standard_normal(acq.num_samples)
    return RssTrace(x, acq, CONTINUOUS, rng_seed=int(seed), noise_sigma=params.noise_sigma)


def quantize(trace: RssTrace, quant: QuantizerSpec) -> RssTrace:
    if trace.kind != CONTINUOUS:
        raise ValueError(f"quantize expects a {CONTINUOUS} trace, got {trace.kind}")
    rel = trace.samples - quant.threshold
    if quant.mode == "one-bit":
        return trace.replace(samples=np.where(rel >= 0.0, 1.0, -1.0), kind=ONE_BIT)
    y = quant.step * np.floor(rel / quant.step) + quant.threshold + 0.5 * quant.step
    return trace.replace(samples=y, kind=UNIFORM)


def add_interference(trace: RssTrace, extra_sigma: float, seed: int) -> RssTrace:
    """Add independent N(0, extra_sigma^2) interference to every sample."""
    _check_finite(extra_sigma=extra_sigma)
    if extra_sigma < 0:
        raise ValueError("extra_sigma must be >= 0")
    if trace.kind != CONTINUOUS:
        raise ValueError("interference is added before quantization")
    base = trace.noise_sigma or 0.0
    total = math.hypot(base, extra_sigma)
    if extra_sigma == 0:
        return trace.replace(noise_sigma=total)
    rng = make_rng(seed, STREAM_INTERFERENCE)
    x = trace.samples + extra_sigma * rng.standard_normal(len(trace))
    return trace.replace(samples=x, noise_sigma=total)


def staircase_interference(trace: RssTrace, schedule, segment_samples: int, seed: int) -> RssTrace:
    """Apply ``schedule[i]`` as the interference std of the i-th segment.

    Samples beyond ``len(schedule) * segment_samples`` keep the last level.
    The result's ``noise_sigma`` is None unless the schedule is flat.
    """
    schedule = [float(s) for s in schedule]
    if not schedule or segment_samples < 1:
        raise ValueError("need a non-empty schedule and segment_samples >= 1")
    for s in schedule:
        _check_finite(extra_sigma=s)
        if s < 0:
            raise ValueError("schedule levels must be >= 0")
    if trace.kind != CONTINUOUS:
        raise ValueError("interference is added before quantization")
    n = len(trace)
    segment = np.minimum(np.arange(n) // segment_samples, len(schedule) - 1)
    level = np.asarray(schedule)[segment]
    rng = make_rng(seed, STREAM_INTERFERENCE)
    x = trace.samples + level * rng.standard_normal(n)
    total = None
    if len(set(schedule)) == 1:
        total = math.hypot(trace.noise_sigma or 0.0, schedule[0])
    return trace.replace(samples=x, noise_sigma=total)
