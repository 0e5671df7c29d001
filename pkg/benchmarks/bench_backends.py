"""Time the numba kernels against the numpy fallback on the hot paths.

    python3 benchmarks/bench_backends.py [--repeat 5]
"""

import argparse
import math
import time

import numpy as np

from rsscrb._backend import HAVE_NUMBA, use_backend
from rsscrb.crb import AveragingGrid, averaged_crb, find_optimal_noise
from rsscrb.dsp import FilterSpec, RateSearchSpec, rate_from_array
from rsscrb.signal import AcquisitionSpec, QuantizerSpec, make_rng

OMEGA = 2 * math.pi * 0.25
QUANT = QuantizerSpec(1.0, 0.0, "one-bit")


def bound_default():
    averaged_crb(0.1, OMEGA, 0.25, QUANT, AcquisitionSpec(10.0, 300))


def bound_long():
    averaged_crb(0.1, OMEGA, 0.25, QUANT, AcquisitionSpec(50.0, 1500))


def optimum():
    find_optimal_noise(0.1, OMEGA, QUANT, AcquisitionSpec(10.0, 300))


_X = np.sign(make_rng(0, 1).standard_normal(600))


def estimator():
    rate_from_array(_X, 20.0, FilterSpec(), RateSearchSpec())


CASES = [("averaged bound, N=300", bound_default), ("averaged bound, N=1500", bound_long),
         ("optimal noise search", optimum), ("rate estimate, N=600", estimator)]


def best_of(fn, repeat):
    fn()  # warm-up (jit compile / cache load)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    print(f"{'case':28s}" + "".join(f"{b:>12s}" for b in backends) + "     speedup")
    for name, fn in CASES:
        row = {}
        for b in backends:
            with use_backend(b):
                row[b] = best_of(fn, args.repeat)
        line = f"{name:28s}" + "".join(f"{row[b] * 1e3:10.2f}ms" for b in backends)
        if len(backends) == 2:
            line += f"  {row['numpy'] / row['numba']:8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
