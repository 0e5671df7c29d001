"""Complementary error functions used by the likelihood and FIM weight.

Accuracy: relative error below 1e-12 for ``erfcx`` on [-26, 27] and for
``erfc`` on [-27, 26] (beyond 26 erfc is subnormal in double precision).
Checked against the mpmath table in ``tests/data/erfc_table.csv``.
"""

import numpy as np

from ._backend import kernels


def erfc(x):
    x = np.asarray(x, dtype=np.float64)
    return kernels().erfc(np.atleast_1d(x)).reshape(x.shape)


def erfcx(x):
    """Scaled complementary error function ``exp(x**2) * erfc(x)``."""
    x = np.asarray(x, dtype=np.float64)
    return kernels().erfcx(np.atleast_1d(x)).reshape(x.shape)


def fim_weight(v):
    """Per-sample one-bit FIM weight ``exp(-2 v^2) / (1 - erf(v)^2)``.

    Evaluated as ``exp(-|v|^2) / (erfcx(|v|) * erfc(-|v|))``, which equals
    ``1 / (erfcx(v) * erfcx(-v))`` but cannot overflow; far from the threshold
    it underflows gracefully to zero instead of forming 0/0.
    """
    v = np.asarray(v, dtype=np.float64)
    return kernels().fim_weight(np.atleast_1d(v)).reshape(v.shape)
