# test_oscillator.py
import cmath
import math

import numpy as np
import pytest
from scipy import special

from errors import InvalidWindow, NearSingularPhase, ParameterOutOfRange, QuadratureFailure
from oscillator import (
    FresnelMomentQuery,
    GridSpec,
    evaluate_transform,
    fresnel_moment,
    bound_uniform,
    kappa_eta,
    l2_norm_of_transform,
    quadrature_transform,
    schrodinger_residual,
    sigma_phi,
    transform,
    uniform_certificate,
)
from windows import chi, delta_block, gaussian, hermite1


@pytest.mark.parametrize("phi, expected", [(0.0, 0), (1.0, 1), (math.pi, 2), (4.0, 3), (-0.5, -1)])
def test_sigma_phi(phi, expected):
    assert sigma_phi(phi) == expected


def test_transform_at_zero_phase_is_identity():
    result = transform(delta_block(), 0.0, 0.25)
    assert result.value == pytest.approx(0.5)
    assert result.method == "closed_form"


@pytest.mark.parametrize("phi", [0.0, 0.3, 1.2, 3.0, 4.5, 7.0])
def test_gaussian_is_an_eigenfunction(phi):
    w = np.linspace(-3, 3, 25)
    expected = np.exp(-0.5j * phi) * np.exp(-math.pi * w * w)
    assert np.allclose(evaluate_transform(gaussian(), phi, w), expected, atol=1e-12)


def test_hermite_eigenvalue():
    w = np.array([-0.5, 0.2, 1.0])
    expected = np.exp(-1.5j * 0.8) * w * np.exp(-math.pi * w * w)
    assert np.allclose(evaluate_transform(hermite1(), 0.8, w), expected)


def test_indicator_quarter_turn_at_origin():
    value = transform(chi(1.0), math.pi / 2, 0.0).value
    assert abs(value) == pytest.approx(1.0, abs=1e-12)
    assert value == pytest.approx(cmath.exp(-0.25j * math.pi), abs=1e-12)


@pytest.mark.parametrize("phi, w", [(0.7, 0.3), (2.0, -1.5), (4.0, 0.2), (1.5, 6.0)])
def test_closed_form_matches_quadrature(phi, w):
    f = delta_block()
    closed = transform(f, phi, w).value
    assert closed == pytest.approx(quadrature_transform(f, phi, w), abs=1e-8)


def test_closed_form_matches_quadrature_for_indicator():
    f = chi(1.0)
    assert transform(f, 1.0, 0.7).value == pytest.approx(quadrature_transform(f, 1.0, 0.7), abs=1e-8)


def test_quadrature_failure_names_the_operation(mocker):
    mocker.patch("oscillator.integrate.quad", side_effect=ValueError("bad panel"))
    with pytest.raises(QuadratureFailure) as info:
        quadrature_transform(chi(1.0), 1.0, 0.7)
    assert info.value.operation == "quadrature_transform"


def test_near_singular_phase_uses_limit_branch():
    with pytest.warns(NearSingularPhase):
        result = transform(chi(1.0), 1e-10, 0.5)
    assert result.method == "limit"
    assert result.value == pytest.approx(1.0)


@pytest.mark.parametrize("k, expected", [(0, 2.0), (1, 2.0), (2, 8.0 / 3.0)])
def test_fresnel_moment_without_phase(k, expected):
    assert fresnel_moment(FresnelMomentQuery(0.0, 0.0, k, 0.0, 2.0)) == pytest.approx(expected, abs=1e-13)


def test_fresnel_moment_pure_quadratic():
    x = 10.0 * math.sqrt(2.0 / math.pi)
    S, C = special.fresnel(x)
    expected = math.sqrt(math.pi / 2.0) * complex(C, S)
    assert fresnel_moment(FresnelMomentQuery(1.0, 0.0, 0, 0.0, 10.0)) == pytest.approx(expected, abs=1e-10)
    first = (cmath.exp(100j) - 1.0) / 2j
    assert fresnel_moment(FresnelMomentQuery(1.0, 0.0, 1, 0.0, 10.0)) == pytest.approx(first, abs=1e-10)


def test_fresnel_moment_orientation():
    forward = fresnel_moment(FresnelMomentQuery(0.3, -1.0, 2, -1.0, 2.5))
    backward = fresnel_moment(FresnelMomentQuery(0.3, -1.0, 2, 2.5, -1.0))
    assert backward == pytest.approx(-forward)
    assert fresnel_moment(FresnelMomentQuery(0.3, -1.0, 1, 1.0, 1.0)) == 0j
    with pytest.raises(ParameterOutOfRange):
        fresnel_moment(FresnelMomentQuery(1.0, 0.0, 3, 0.0, 1.0))


def test_bound_uniform_requires_continuity_and_eta_range():
    with pytest.raises(InvalidWindow):
        bound_uniform(chi(1.0), 1.5)
    with pytest.raises(ParameterOutOfRange):
        bound_uniform(delta_block(), 3.0)
    assert uniform_certificate(chi(1.0), 1.5) is None
    assert bound_uniform(delta_block(), 1.5) > 0.0


def test_kappa_estimate_bounds(small_grid):
    f = delta_block()
    estimate = kappa_eta(f, 1.5, small_grid)
    ws = np.linspace(-small_grid.w_max, small_grid.w_max, small_grid.n_w + 1)
    zero_slice = float(np.max(f(ws) * (1.0 + ws * ws) ** 0.75))
    assert estimate.lower >= zero_slice
    assert estimate.certificate is not None
    assert estimate.lower <= estimate.certificate


def test_kappa_gaussian_peaks_at_origin(small_grid):
    estimate = kappa_eta(gaussian(), 2.0, small_grid)
    assert estimate.lower == pytest.approx(1.0, abs=1e-12)
    assert estimate.argmax_w == 0.0
    assert estimate.certificate is None


def test_kappa_is_thread_count_independent():
    grid = GridSpec(16, 256, 16.0)
    one = kappa_eta(delta_block(), 1.5, grid, threads=1)
    four = kappa_eta(delta_block(), 1.5, grid, threads=4)
    assert one.lower == four.lower
    assert (one.argmax_phi, one.argmax_w) == (four.argmax_phi, four.argmax_w)


def test_kappa_rejects_eta_at_most_one():
    with pytest.raises(ParameterOutOfRange):
        kappa_eta(delta_block(), 1.0)


def test_schrodinger_residual_gaussian():
    assert schrodinger_residual(gaussian(), 0.9, 0.4, h=1e-3) < 1e-5


@pytest.mark.parametrize("phi", [0.3, 1.0, 2.0])
def test_transform_preserves_l2_norm(phi):
    f = delta_block()
    result = l2_norm_of_transform(f, phi)
    assert result.norm == pytest.approx(f.norms.l2, rel=1e-5)
    assert l2_norm_of_transform(gaussian(), phi).norm == pytest.approx(2 ** -0.25, rel=1e-9)
