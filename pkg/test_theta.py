# test_theta.py
import math

import numpy as np
import pytest

from errors import ParameterOutOfRange, SlowConvergence
from theta import (
    ThetaPoint,
    ThetaPoints,
    TruncationPolicy,
    dilation_check,
    dyadic_decomposition_check,
    gamma_invariance_report,
    geodesic_push,
    linearity_check,
    theta,
    theta_batch,
    theta_product_batch,
    weyl_identity_check,
)
from windows import chi, delta_block, dyadic_truncation, gaussian, trapezoid

POINTS = [
    ThetaPoint(0.3, 1.2, 0.7, 0.2, -0.4),
    ThetaPoint(-0.45, 0.9, 2.5, 0.0, 0.5),
    ThetaPoint(0.1, 3.0, 4.0, -0.3, 0.1),
]


def _classical(y):
    n = np.arange(-40, 41)
    return y ** 0.25 * float(np.sum(np.exp(-math.pi * n * n * y)))


@pytest.mark.parametrize("y", [0.5, 1.0, 2.0])
def test_gaussian_theta_constant(y):
    assert theta(gaussian(), ThetaPoint(0.0, y, 0.0)).value == pytest.approx(_classical(y), abs=1e-13)


def test_gaussian_theta_inversion():
    left = theta(gaussian(), ThetaPoint(0.0, 2.0, 0.0)).value
    right = theta(gaussian(), ThetaPoint(0.0, 0.5, 0.0)).value
    assert left == pytest.approx(right, abs=1e-12)


def test_squared_modulus_is_real():
    f = dyadic_truncation(1.0, 3)
    values = theta_product_batch(f, f, POINTS)
    assert np.all(values.imag == 0.0)
    assert np.all(values.real >= 0.0)
    single = abs(theta(f, POINTS[0]).value) ** 2
    assert values[0].real == pytest.approx(single)


@pytest.mark.parametrize("index", [1, 2, 3, 4])
def test_gaussian_gamma_invariance(index):
    for p in POINTS:
        assert gamma_invariance_report(gaussian(), gaussian(), p, index).change <= 1e-10


@pytest.mark.parametrize("index", [2, 3, 4])
def test_trapezoid_gamma_invariance_keeps_terms(index):
    f1, f2 = dyadic_truncation(1.0, 4), dyadic_truncation(2.0, 4)
    for p in POINTS:
        assert gamma_invariance_report(f1, f2, p, index).change <= 1e-9


def test_trapezoid_inversion_within_truncation_slack():
    f1, f2 = dyadic_truncation(1.0, 4), dyadic_truncation(2.0, 4)
    policy = TruncationPolicy(name="wide", w_max=1024.0, n_cap=None)
    for p in POINTS:
        check = gamma_invariance_report(f1, f2, p, 1, policy)
        assert check.holds(1e-8), check.to_dict()


def test_gamma_index_validation():
    with pytest.raises(ParameterOutOfRange):
        gamma_invariance_report(gaussian(), gaussian(), POINTS[0], 5)


@pytest.mark.parametrize("f", [gaussian(), chi(1.0), delta_block()], ids=["gaussian", "chi", "delta"])
@pytest.mark.parametrize("N, x, c, alpha", [(1, 0.3, 0.0, 0.0), (17, 0.123, 0.4, 0.9), (64, 0.71, 0.0, 0.25)])
def test_weyl_sum_identity(f, N, x, c, alpha):
    assert weyl_identity_check(f, N, x, c, alpha) <= 1e-10


def test_dyadic_identities():
    for p in POINTS:
        check = dyadic_decomposition_check(2.0, 4, p)
        assert check.linearity <= 1e-9
        assert check.orbit <= 1e-9
    with pytest.raises(ParameterOutOfRange):
        dyadic_decomposition_check(2.0, 9, POINTS[0])


def test_linearity_and_dilation():
    f, g = delta_block(), trapezoid(0.1, 0.4, 0.05, 0.2)
    for p in POINTS:
        assert linearity_check(f, g, p) <= 1e-10
        assert dilation_check(f, 0.8, p) <= 1e-10


def test_geodesic_push_at_zero_time():
    p = POINTS[2]
    q = geodesic_push(p, 0.0)
    assert (q.x, q.y, q.phi) == pytest.approx((p.x, p.y, p.phi), abs=1e-12)


def test_batch_matches_single_points():
    f = dyadic_truncation(1.0, 2)
    batch = theta_batch(f, ThetaPoints.from_points(POINTS))
    for k, p in enumerate(POINTS):
        assert batch.values[k] == pytest.approx(theta(f, p).value, abs=1e-13)
    assert np.all(batch.tail_estimate >= 0.0)


def test_small_y_needs_reduction():
    with pytest.raises(SlowConvergence):
        theta(gaussian(), ThetaPoint(0.2, 1e-8, 0.5))
    # the phi = 0 branch sums the compact window exactly
    value = theta(chi(1.0), ThetaPoint(0.0, 1e-8, 0.0))
    assert value.tail_estimate == 0.0
    assert value.value == pytest.approx(1e-2 * 9999, rel=1e-12)


def test_truncation_presets():
    assert TruncationPolicy.from_preset("paper-repro").n_cap == 100
    fallback = TruncationPolicy.from_preset("no-such-preset")
    assert fallback.name == "default"
    assert fallback.w_max == 64.0
    with pytest.raises(ParameterOutOfRange):
        ThetaPoint(0.0, 0.0, 0.0)
