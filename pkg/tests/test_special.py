import csv
import math

import mpmath
import numpy as np
import pytest

from rsscrb.special import erfc, erfcx, fim_weight

from conftest import DATA


def _table():
    with open(DATA / "erfc_table.csv") as fh:
        rows = list(csv.DictReader(fh))
    return (np.array([float(r["x"]) for r in rows]),
            np.array([float(r["erfc"]) for r in rows]),
            np.array([float(r["erfcx"]) for r in rows]))


def test_erfcx_matches_high_precision_table(backend):
    x, _, ref = _table()
    got = erfcx(x)
    assert np.max(np.abs(got / ref - 1)) < 1e-12


def test_erfc_matches_high_precision_table(backend):
    x, ref, _ = _table()
    keep = x <= 26.0
    got = erfc(x[keep])
    assert np.max(np.abs(got / ref[keep] - 1)) < 1e-12


def test_shapes_preserved(backend):
    assert erfcx(0.5).shape == ()
    assert erfc(np.zeros((2, 3))).shape == (2, 3)


def test_weight_at_threshold_is_one(backend):
    assert fim_weight(0.0) == pytest.approx(1.0, rel=1e-15)


def test_weight_six_sigma_matches_extended_precision(backend):
    v = 6.0 / math.sqrt(2.0)
    mpmath.mp.dps = 50
    mv = mpmath.mpf(v)
    direct = mpmath.exp(-2 * mv ** 2) / (1 - mpmath.erf(mv) ** 2)
    got = float(fim_weight(v))
    assert math.isfinite(got) and got < 1e-6
    assert got == pytest.approx(float(direct), rel=1e-12)
    assert got == pytest.approx(1.0 / (float(erfcx(v)) * float(erfcx(-v))), rel=1e-12)


def test_weight_is_even_and_never_overflows(backend):
    v = np.linspace(-40, 40, 2001)
    w = fim_weight(v)
    assert np.all(np.isfinite(w)) and np.all(w >= 0) and np.all(w <= 1.0 + 1e-15)
    np.testing.assert_array_equal(w, fim_weight(-v))
