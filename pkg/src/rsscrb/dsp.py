"""Attacker pipeline: DC removal, Butterworth lowpass, periodogram peak.

The rate estimate is the argmax of the periodogram over a fixed frequency
grid inside the respiratory band. The amplitude estimate inverts the
single-tone periodogram at that peak.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import signal as sps

from ._backend import kernels
from .signal import CONTINUOUS, RssTrace


@dataclass(frozen=True)
class FilterSpec:
    order: int = 4
    cutoff_hz: float = 0.5
    window_seconds: float = 30.0

    def __post_init__(self):
        if self.order < 2 or self.order % 2:
            raise ValueError("filter order must be even and >= 2")
        if not (self.cutoff_hz > 0 and math.isfinite(self.cutoff_hz)):
            raise ValueError("cutoff_hz must be positive")
        if not self.window_seconds > 0:
            raise ValueError("window_seconds must be positive")

    def check_rate(self, fs):
        if not self.cutoff_hz < fs / 2:
            raise ValueError(f"cutoff {self.cutoff_hz} Hz is not below Nyquist ({fs / 2} Hz)")

    def settle_seconds(self):
        return 2.0 / self.cutoff_hz


@dataclass(frozen=True)
class RateSearchSpec:
    f_min: float = 0.1
    f_max: float = 0.67
    resolution: float = 0.001

    def __post_init__(self):
        if not 0 < self.f_min < self.f_max:
            raise ValueError("need 0 < f_min < f_max")
        if not self.resolution > 0:
            raise ValueError("resolution must be positive")

    def check_rate(self, fs):
        if not self.f_max < fs / 2:
            raise ValueError(f"f_max {self.f_max} Hz is not below Nyquist ({fs / 2} Hz)")

    def grid(self):
        n = int(math.floor((self.f_max - self.f_min) / self.resolution + 1e-9)) + 1
        return self.f_min + self.resolution * np.arange(n)


@dataclass(frozen=True)
class EstimateResult:
    f_hat: float
    amplitude_hat: float
    psd_peak_value: float
    degenerate_flag: bool = False

    @property
    def rate_bpm(self):
        return 60.0 * self.f_hat


@functools.lru_cache(maxsize=16)
def butter_sos(order, cutoff_hz, fs):
    return sps.butter(order, cutoff_hz, btype="low", fs=fs, output="sos")


@functools.lru_cache(maxsize=8)
def _dtft_tables(fs, n, f_min, resolution, n_freq):
    freqs = f_min + resolution * np.arange(n_freq)
    cycles = np.outer(freqs / fs, np.arange(n))
    # reduce to [0, 1) before scaling: keeps the angle exact for long traces
    arg = 2.0 * np.pi * (cycles - np.floor(cycles))
    c, s = np.cos(arg), np.sin(arg)
    c.setflags(write=False)
    s.setflags(write=False)
    return c, s


def _samples(trace):
    if isinstance(trace, RssTrace):
        return trace.samples, trace.acquisition.sample_rate
    raise TypeError("expected an RssTrace")


def remove_dc_array(x, fs, window_seconds):
    x = np.asarray(x, dtype=np.float64)
    w = max(1, int(round(window_seconds * fs)))
    out = np.empty_like(x)
    for start in range(0, x.size, w):
        seg = x[start:start + w]
        if np.all(seg == seg[0]):
            out[start:start + w] = 0.0
        else:
            out[start:start + w] = seg - seg.mean()
    return out


def lowpass_array(x, fs, spec: FilterSpec):
    spec.check_rate(fs)
    sos = butter_sos(spec.order, spec.cutoff_hz, float(fs))
    return kernels().sosfilt(sos, np.ascontiguousarray(x, dtype=np.float64))


def periodogram_array(x, fs, search: RateSearchSpec):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.size < 2:
        raise ValueError("periodogram needs at least two samples")
    freqs = search.grid()
    if freqs.size == 0:
        raise ValueError("empty frequency grid")
    c, s = _dtft_tables(float(fs), x.size, search.f_min, search.resolution, freqs.size)
    return freqs, kernels().psd_from_tables(x, c, s)


def remove_dc(trace: RssTrace, spec: FilterSpec) -> RssTrace:
    """Subtract the mean of each non-overlapping ``window_seconds`` window."""
    x, fs = _samples(trace)
    return trace.replace(samples=remove_dc_array(x, fs, spec.window_seconds), kind=CONTINUOUS)


def lowpass(trace: RssTrace, spec: FilterSpec) -> RssTrace:
    """Causal Butterworth lowpass, cascaded biquads, zero initial state."""
    x, fs = _samples(trace)
    return trace.replace(samples=lowpass_array(x, fs, spec), kind=CONTINUOUS)


def periodogram(trace: RssTrace, search: RateSearchSpec):
    """``|sum_k x[k] exp(-j 2 pi f k / fs)|^2 / N`` on the search grid.

    Returns ``(freqs, psd)``.
    """
    x, fs = _samples(trace)
    return periodogram_array(x, fs, search)


def preprocess_array(x, fs, filt: FilterSpec):
    return lowpass_array(remove_dc_array(x, fs, filt.window_seconds), fs, filt)


def rate_from_array(x, fs, filt: FilterSpec, search: RateSearchSpec):
    """Returns ``(f_hat, peak_value, degenerate, filtered)``."""
    search.check_rate(fs)
    y = preprocess_array(x, fs, filt)
    if not np.any(y):
        return search.f_min, 0.0, True, y
    freqs, psd = periodogram_array(y, fs, search)
    i = int(np.argmax(psd))
    return float(freqs[i]), float(psd[i]), False, y


def amplitude_at(y, fs, f_hat, filt: FilterSpec):
    """Single-tone amplitude ``2 sqrt(P(f_hat) / N)`` of a filtered trace.

    The causal filter's start-up transient (``2 / cutoff`` seconds) is left
    out when at least half the trace remains, and the passband gain at
    ``f_hat`` is divided out.
    """
    n = y.size
    settle = int(math.ceil(filt.settle_seconds() * fs))
    if n - settle < n / 2:
        settle = 0
    k = np.arange(settle, n)
    arg = 2.0 * np.pi * f_hat * k / fs
    seg = y[settle:]
    power = (seg @ np.cos(arg)) ** 2 + (seg @ np.sin(arg)) ** 2
    amp = 2.0 * math.sqrt(power / seg.size) / math.sqrt(seg.size)
    sos = butter_sos(filt.order, filt.cutoff_hz, float(fs))
    _, h = sps.sosfreqz(sos, worN=[f_hat], fs=fs)
    return amp / abs(h[0])


def estimate_rate(trace: RssTrace, filt: FilterSpec = FilterSpec(),
                  search: RateSearchSpec = RateSearchSpec()) -> EstimateResult:
    """Breathing-rate MLE: DC removal, lowpass, periodogram argmax.

    If the filtered trace is identically zero (a quantized trace that never
    changes level) nothing can be estimated: the result is flagged
    ``degenerate`` and ``f_hat`` is set to ``search.f_min`` by convention.
    """
    x, fs = _samples(trace)
    f_hat, peak, degenerate, _ = rate_from_array(x, fs, filt, search)
    return EstimateResult(f_hat, math.nan, peak, degenerate)


def estimate_amplitude(trace: RssTrace, filt: FilterSpec = FilterSpec(),
                       search: RateSearchSpec = RateSearchSpec()) -> EstimateResult:
    """Rate estimate plus the amplitude of the periodogram peak.

    For one-bit input the amplitude is in symbol units, not dB, and is not
    identifiable without knowing the noise level and offset; it is biased
    upward at low SNR for any input because the peak is selected.
    """
    x, fs = _samples(trace)
    f_hat, peak, degenerate, y = rate_from_array(x, fs, filt, search)
    if degenerate:
        return EstimateResult(f_hat, 0.0, 0.0, True)
    return EstimateResult(f_hat, amplitude_at(y, fs, f_hat, filt), peak, False)


def rmse_bpm(estimates: Sequence[float], truth_bpm: float) -> float:
    est = np.asarray(list(estimates), dtype=np.float64)
    if est.size == 0:
        raise ValueError("rmse of an empty sequence")
    return float(np.sqrt(np.mean((est - truth_bpm) ** 2)))
