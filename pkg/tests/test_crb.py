import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from rsscrb import crb
from rsscrb._backend import kernels
from rsscrb.crb import (AveragingGrid, FisherMatrix, PhaseBasis, averaged_crb, crb_at,
                        fim_closed_form, fim_generic, find_optimal_noise, pmf_partials,
                        sample_pmf, unquantized_crb_reference)
from rsscrb.oracles import cofactor_inverse, fim_entry_error, finite_difference_partials
from rsscrb.signal import AcquisitionSpec, QuantizerSpec, SinusoidParams

DEFAULT_ACQ = AcquisitionSpec(10.0, 300)
OMEGA = 2 * math.pi * 0.25
ONE_BIT = QuantizerSpec(1.0, 0.0, "one-bit")

benign = st.builds(
    lambda sigma, a, b, w, phi: SinusoidParams(a * sigma, b * sigma, w, phi, sigma),
    st.floats(0.1, 1.0), st.floats(0.1, 3.0), st.floats(-1.0, 1.0),
    st.floats(0.8, 3.5), st.floats(0.0, 6.28))


def test_phase_basis_unit_circle():
    pb = PhaseBasis.from_params(SinusoidParams(0.1, 0, 1.3, 0.7, 0.2), DEFAULT_ACQ)
    assert np.max(np.abs(pb.cos ** 2 + pb.sin ** 2 - 1)) < 1e-12


def test_pmf_examples():
    assert sample_pmf(1, 3, SinusoidParams(0, 0, 1, 0, 0.5), 0.1) == 0.5
    assert abs(sample_pmf(1, 0, SinusoidParams(0, 5.0, 1, 0, 0.5), 0.1) - 1) < 1e-20
    got = sample_pmf(1, 0, SinusoidParams(0.1, 0, 1, 0, 0.7), 0.1)
    # 0.5 * erfc(-0.1 / (0.7 sqrt 2)) at 50 digits
    import mpmath
    mpmath.mp.dps = 50
    ref = 0.5 * mpmath.erfc(-mpmath.mpf("0.1") / (mpmath.mpf("0.7") * mpmath.sqrt(2)))
    assert got == pytest.approx(float(ref), rel=1e-12)
    assert got == pytest.approx(0.556798, abs=1e-6)


def test_zero_noise_rejected():
    p = SinusoidParams(0.1, 0, 1, 0, 0.0)
    for fn in (lambda: sample_pmf(1, 0, p, 0.1), lambda: pmf_partials(1, 0, p, 0.1),
               lambda: fim_generic(p, DEFAULT_ACQ), lambda: fim_closed_form(p, DEFAULT_ACQ)):
        with pytest.raises(ValueError):
            fn()


@given(benign, st.integers(0, 500))
def test_pmf_sums_to_one(params, k):
    total = sample_pmf(1, k, params, 0.1) + sample_pmf(-1, k, params, 0.1)
    assert total == pytest.approx(1.0, abs=2e-16)


def test_partials_zero_amplitude():
    d = pmf_partials(np.array([1.0, -1.0])[:, None], np.arange(20)[None, :],
                     SinusoidParams(0.0, 0.1, 1.5, 0.3, 0.4), 0.1)
    assert np.all(d[..., 2] == 0) and np.all(d[..., 3] == 0)


def test_partial_amplitude_vanishes_where_cos_is_zero():
    d = pmf_partials(1.0, 0, SinusoidParams(0.3, 0.1, 1.5, math.pi / 2, 0.4), 0.1)
    assert abs(d[0]) < 1e-16


@given(benign, st.integers(0, 300), st.sampled_from([1.0, -1.0]))
def test_partials_match_finite_differences(params, k, q):
    ts = 0.1
    c = math.cos(params.omega * ts * k + params.phase)
    assume(abs(params.amplitude * c + params.dc_offset) <= 4 * params.noise_sigma)
    an = pmf_partials(q, k, params, ts)
    fd = finite_difference_partials(q, k, params, ts)
    assert np.max(np.abs(an - fd)) <= 1e-5 * np.max(np.abs(an))


def test_fim_zero_amplitude_singular(backend):
    p = SinusoidParams(0.0, 0.1, 1.5, 0.3, 0.4)
    for fim in (fim_generic(p, DEFAULT_ACQ), fim_closed_form(p, DEFAULT_ACQ)):
        assert np.all(fim.matrix[2:, :] == 0) and np.all(fim.matrix[:, 2:] == 0)
    rep = crb_at(p, DEFAULT_ACQ)
    assert math.isinf(rep.crb_frequency) and not rep.bounded


def test_single_sample_fim_entry(backend):
    # N = 1 is below AcquisitionSpec's minimum, so go through the kernel
    sigma = 0.37
    f = kernels().fim_grid(0.0, 1.0, 0.1, 1, sigma, np.zeros(1), np.zeros(1))[0, 0]
    assert f[1, 1] == pytest.approx(2 / (math.pi * sigma ** 2), rel=1e-14)


def test_fim_forms_agree_at_benign_point(backend):
    p = SinusoidParams.from_hz(0.1, 0.2, 0.25, 0.0, 0.5)
    acq = AcquisitionSpec(10.0, 50)
    a, b = fim_closed_form(p, acq).matrix, fim_generic(p, acq).matrix
    assert fim_entry_error(a, b) < 1e-10
    big = np.abs(b) > 1e-3 * np.sqrt(np.outer(np.diag(b), np.diag(b)))
    assert np.max(np.abs(a - b)[big] / np.abs(b)[big]) < 1e-10


@given(benign, st.integers(2, 200))
def test_fim_forms_agree_and_are_psd(params, n):
    acq = AcquisitionSpec(10.0, n)
    a, b = fim_closed_form(params, acq), fim_generic(params, acq)
    assert fim_entry_error(a.matrix, b.matrix) < 1e-10
    assert a.is_symmetric() and a.is_psd() and b.is_symmetric() and b.is_psd()


def test_far_from_threshold_weight_does_not_overflow(backend):
    p = SinusoidParams(0.1, 12.0, 1.5, 0.0, 0.5)
    fim = fim_closed_form(p, DEFAULT_ACQ)
    assert np.all(np.isfinite(fim.matrix))
    assert not crb_at(p, DEFAULT_ACQ).bounded


def test_silent_threshold():
    from scipy.special import erfc as sp_erfc
    assert 0.5 * sp_erfc(crb.SILENT_Z / math.sqrt(2)) == pytest.approx(2.0 ** -52, rel=1e-9)
    near = SinusoidParams(0.1, 0.1 + 8.0 * 0.05, 1.5, 0.0, 0.05)
    far = near.replace(dc_offset=0.1 + 8.3 * 0.05)
    assert crb_at(near, DEFAULT_ACQ).bounded and not crb_at(far, DEFAULT_ACQ).bounded


def test_identity_scaled_inverse(backend):
    c = 4.0
    crb_a, crb_w, cond = kernels().crb_batch(np.eye(4)[None] * c, crb.COND_LIMIT)
    assert crb_a[0] == pytest.approx(1 / c) and crb_w[0] == pytest.approx(1 / c)
    assert FisherMatrix(np.eye(4) * c).condition == pytest.approx(1.0)


def test_crb_matches_cofactor_oracle(backend):
    p = SinusoidParams.from_hz(0.1, 0.05, 0.25, 0.9, 0.3)
    rep = crb_at(p, DEFAULT_ACQ)
    inv = cofactor_inverse(fim_closed_form(p, DEFAULT_ACQ).matrix)
    assert rep.crb_amplitude == pytest.approx(inv[0, 0], rel=1e-10)
    assert rep.crb_frequency == pytest.approx(inv[2, 2], rel=1e-10)
    assert rep.crb_amplitude > 0 and rep.crb_frequency > 0
    assert rep.std_rate_bpm == pytest.approx(60 / (2 * math.pi) * math.sqrt(rep.crb_frequency))


def test_one_point_grid_equals_crb_at(backend):
    grid = AveragingGrid(1, 1)
    rep = averaged_crb(0.1, OMEGA, 0.3, ONE_BIT, DEFAULT_ACQ, grid)
    point = crb_at(SinusoidParams(0.1, 0.0, OMEGA, 0.0, 0.3), DEFAULT_ACQ)
    assert rep.crb_frequency == pytest.approx(point.crb_frequency, rel=1e-12)
    assert rep.crb_amplitude == pytest.approx(point.crb_amplitude, rel=1e-12)


def test_grid_layout():
    g = AveragingGrid(4, 5)
    np.testing.assert_allclose(g.phases(), [0, math.pi / 2, math.pi, 3 * math.pi / 2])
    np.testing.assert_allclose(g.offsets(1.0), [-0.4, -0.2, 0.0, 0.2, 0.4])
    r = AveragingGrid(2, 3, 0.25).offsets(1.0)
    assert np.all(np.abs(r) >= 0.25) and np.all(np.abs(r) <= 0.5) and r.size == 6
    with pytest.raises(ValueError):
        AveragingGrid(0, 3)


def test_grid_refinement_converges():
    coarse = averaged_crb(0.1, OMEGA, 0.25, ONE_BIT, DEFAULT_ACQ)
    fine = averaged_crb(0.1, OMEGA, 0.25, ONE_BIT, DEFAULT_ACQ, AveragingGrid().refined(2))
    assert abs(fine.std_frequency / coarse.std_frequency - 1) < 0.01


def test_unbounded_points_make_mean_unbounded():
    rep = averaged_crb(0.1, OMEGA, 0.04, ONE_BIT, DEFAULT_ACQ)
    assert math.isinf(rep.crb_frequency)
    assert 0 < rep.bounded_fraction < 1
    assert math.isfinite(rep.median_std_rate_bpm())


def test_interior_minimum_near_quarter_step():
    sig = np.geomspace(0.05, 1.5, 25)
    std = [averaged_crb(0.1, OMEGA, s, ONE_BIT, DEFAULT_ACQ).std_rate_bpm for s in sig]
    i = int(np.argmin(std))
    assert 0 < i < len(sig) - 1
    assert 0.18 <= sig[i] <= 0.32


def test_unquantized_reference():
    p = SinusoidParams.from_hz(0.1, 0, 0.25, 0, 0.7)
    rep = unquantized_crb_reference(p, DEFAULT_ACQ)
    assert rep.crb_amplitude == pytest.approx(3.2667e-3, rel=1e-4)
    assert rep.std_amplitude_db == pytest.approx(0.05715, rel=1e-4)
    assert unquantized_crb_reference(p.replace(noise_sigma=0.0), DEFAULT_ACQ).crb_amplitude == 0
    double = unquantized_crb_reference(p, AcquisitionSpec(10.0, 600))
    assert double.crb_amplitude == pytest.approx(rep.crb_amplitude / 2)


def test_optimal_noise_default_and_scaling():
    o1 = find_optimal_noise(0.1, OMEGA, ONE_BIT, DEFAULT_ACQ)
    o2 = find_optimal_noise(0.1, OMEGA, QuantizerSpec(2.0, 0, "one-bit"), DEFAULT_ACQ)
    oa = find_optimal_noise(0.1, OMEGA, ONE_BIT, DEFAULT_ACQ, target="amplitude")
    assert 0.2 <= o1.sigma_opt <= 0.3 and not o1.at_boundary
    assert o2.sigma_opt / (2 * o1.sigma_opt) == pytest.approx(1, abs=0.15)
    assert oa.sigma_opt / o1.sigma_opt == pytest.approx(1, abs=0.15)
    assert o1.min_std == pytest.approx(o1.report.std_rate_bpm)


def test_optimal_noise_boundary_warns():
    with pytest.warns(RuntimeWarning, match="bracket edge"):
        o = find_optimal_noise(0.1, OMEGA, ONE_BIT, DEFAULT_ACQ, bracket=(0.5, 2.0))
    assert o.at_boundary and o.sigma_opt == pytest.approx(0.5, rel=0.02)
    with pytest.raises(ValueError):
        find_optimal_noise(0.1, OMEGA, ONE_BIT, DEFAULT_ACQ, bracket=(0.0, 1.0))


def test_weak_dependence_on_frequency():
    grid = AveragingGrid(8, 17)
    vals = [averaged_crb(0.1, w, 0.25, ONE_BIT, DEFAULT_ACQ, grid).std_frequency
            for w in np.linspace(0.8, 3.5, 7)]
    assert max(vals) / min(vals) < 1.2


def test_monotone_in_sample_rate():
    stds = [averaged_crb(0.1, OMEGA, 0.25, ONE_BIT, AcquisitionSpec.from_duration(fs, 30.0))
            for fs in (1, 2, 5, 10, 20, 50)]
    f = [r.std_rate_bpm for r in stds]
    a = [r.std_amplitude_db for r in stds]
    assert all(x > y for x, y in zip(f, f[1:])) and all(x > y for x, y in zip(a, a[1:]))


@given(st.floats(0.03, 0.3), st.floats(1.1, 3.0))
def test_larger_amplitude_lowers_frequency_bound(a, factor):
    grid = AveragingGrid(4, 9)
    lo = averaged_crb(a, OMEGA, 0.25, ONE_BIT, DEFAULT_ACQ, grid).std_frequency
    hi = averaged_crb(a * factor, OMEGA, 0.25, ONE_BIT, DEFAULT_ACQ, grid).std_frequency
    assert hi < lo
