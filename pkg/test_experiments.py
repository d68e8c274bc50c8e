# test_experiments.py
import math

import numpy as np
import pytest
from scipy import stats

from errors import InvalidWindow, ParameterOutOfRange
from experiments import (
    TailCheck,
    TailCurve,
    compare_tail,
    empirical_survival,
    expected_exceedances,
    fluctuation_band_ok,
    histogram_from_values,
    limit_tail_checks,
    run_equidistribution_check,
    run_kappa_trend,
    run_l21_envelope_check,
    run_limit_law_sampling,
    run_markov_bound_check,
    run_product_tail,
    run_rational_vs_irrational,
    run_weyl_histogram,
    tail_curve_from_values,
    weyl_tail_checks,
)
from measures import RngStream
from oscillator import GridSpec
from windows import chi, delta_block, gaussian


def test_single_term_histogram():
    hist = run_weyl_histogram(1, 500, rng=RngStream(3))
    assert hist.total == 500
    assert hist.counts[-1] == 500
    assert float(np.sum(hist.density * np.diff(hist.bin_edges))) == pytest.approx(1.0)
    assert hist.tail_mass(0.5) == 1.0
    checks = weyl_tail_checks(hist, [1.5, 2.0])
    assert all(c.empirical == 0.0 for c in checks)


def test_histogram_is_reproducible_across_workers():
    one = run_weyl_histogram(50, 20000, rng=RngStream(9), threads=1)
    three = run_weyl_histogram(50, 20000, rng=RngStream(9), threads=3)
    assert np.array_equal(one.values, three.values)
    assert np.array_equal(one.counts, three.counts)


def test_histogram_with_custom_x_law():
    hist = run_weyl_histogram(10, 200, rng=RngStream(1), lam=stats.uniform(0.0, 0.5))
    assert hist.total == 200
    with pytest.raises(ParameterOutOfRange):
        run_weyl_histogram(0, 10)
    with pytest.raises(ParameterOutOfRange):
        histogram_from_values(np.ones(3), 0)


def test_empirical_survival_is_strict():
    values = np.array([3.0, 1.0, 2.0])
    assert list(empirical_survival(values, [0.0, 1.0, 2.5, 3.0])) == pytest.approx([1.0, 2 / 3, 1 / 3, 0.0])
    assert list(empirical_survival(np.array([]), [1.0])) == [0.0]


def test_compare_tail_uses_reference_stderr():
    values = np.arange(1, 101, dtype=float)
    (check,) = compare_tail(values, [7.0], lambda R: 0.5, power=2.0)
    assert check.exceedances == 51
    assert check.empirical == pytest.approx(0.51)
    assert check.stderr == pytest.approx(0.05)
    assert check.within(1.0)
    assert TailCheck(1.0, 0.1, 0.1, 0.0, 5).z_score == 0.0


def test_limit_law_sample_shape():
    sample = run_limit_law_sampling("rational", M=60, rng=RngStream(4))
    assert len(sample) == 60
    assert np.all(sample.values >= 0.0)
    assert sample.windows == ("chi_1", "chi_1")
    again = run_limit_law_sampling("rational", M=60, rng=RngStream(4))
    assert np.array_equal(sample.values, again.values)
    checks = limit_tail_checks(sample, [2.0, 3.0])
    assert [c.R for c in checks] == [2.0, 3.0]


def test_product_tail_rescaling_is_exact():
    frame = run_product_tail(200, 0.5, 1.0, 2000, [0.5, 1.0, 1.5], rng=RngStream(2))
    assert list(frame.columns) == ["R", "direct", "rescaled", "stderr"]
    gap = np.abs(frame["direct"].to_numpy() - frame["rescaled"].to_numpy())
    assert np.max(gap) <= 1.0 / 2000
    with pytest.raises(ParameterOutOfRange):
        run_product_tail(10, 2.0, 1.0, 10, [1.0])


def test_equidistribution_small_run():
    report = run_equidistribution_check([4.0, 8.0], M=200, case="rational", rng=RngStream(6))
    assert [row.t for row in report.rows] == [4.0, 8.0]
    for row in report.rows:
        assert row.on_atoms
        assert sum(row.atom_freqs) == pytest.approx(1.0)
        assert 0.0 <= row.ks_phi <= 1.0
    frame = report.to_frame()
    assert list(frame["t"]) == [4.0, 8.0]
    with pytest.raises(ParameterOutOfRange):
        run_equidistribution_check([8.0, 4.0], M=10)


def test_irrational_equidistribution_has_no_atoms():
    report = run_equidistribution_check([6.0], M=100, case="irrational", rng=RngStream(6))
    assert report.rows[0].atom_freqs is None
    assert report.rows[0].to_dict()["atom_freqs"] == ""


def test_tail_curve_and_band():
    values = np.linspace(0.0, 50.0, 1001)
    curve = tail_curve_from_values(values, "rational", [1.0, 2.0, 3.0], 2.0)
    expected = (curve.empirical - curve.asymptotic) * curve.R ** 2.0
    assert np.allclose(curve.fluct, expected)
    assert curve.samples == 1001

    R = np.linspace(1.0, 4.0, 7)
    stderr = np.full(7, 1e-3)
    flat = TailCurve(R, np.zeros(7), np.zeros(7), stderr, np.full(7, 0.2), 1.0, 1000)
    assert fluctuation_band_ok(flat, 1.0, 4.0)
    spiky = np.full(7, 0.2)
    spiky[3] = 5.0
    assert not fluctuation_band_ok(TailCurve(R, np.zeros(7), np.zeros(7), stderr, spiky, 1.0, 1000), 1.0, 4.0)


def test_expected_exceedances():
    assert expected_exceedances("rational", 1000, 2.0) == pytest.approx(1000 * 4 * math.log(2) / math.pi ** 2 / 16)
    assert expected_exceedances("irrational", 1000, 1.0) == pytest.approx(6000 / math.pi ** 2)


def test_envelope_needs_continuous_windows():
    with pytest.raises(InvalidWindow):
        run_l21_envelope_check(gaussian(), delta_block(), 1.5, 10)
    with pytest.raises(InvalidWindow):
        run_l21_envelope_check(chi(1.0), delta_block(), 1.5, 10)
    with pytest.raises(ParameterOutOfRange):
        run_l21_envelope_check(delta_block(), delta_block(), 2.5, 10)


def test_envelope_holds_for_delta_block():
    result = run_l21_envelope_check(delta_block(), delta_block(), 1.5, 200, rng=RngStream(8),
                                    grid=GridSpec(32, 256, 16.0))
    assert result.samples > 0
    assert result.holds


def test_markov_bound():
    frame = run_markov_bound_check(chi(1.0), chi(1.0), [1.0, 2.0, 4.0], 6.0, 500, rng=RngStream(12))
    assert list(frame["K"]) == [1.0, 2.0, 4.0]
    assert frame["holds"].all()
    with pytest.raises(ParameterOutOfRange):
        run_markov_bound_check(chi(1.0), chi(1.0), [0.0], 6.0, 10)


def test_kappa_trend_frame():
    trend = run_kappa_trend(1.5, [0.25, 0.5], GridSpec(16, 256, 16.0))
    frame = trend.to_frame()
    assert list(frame["eps"]) == [0.5, 0.25]
    assert np.all(frame["kappa"] > 0)
    assert np.allclose(frame["reference"], frame["eps"] ** -0.5)
    assert np.allclose(frame["ratio"], frame["kappa"] / frame["reference"])
    assert math.isfinite(trend.slope)
    with pytest.raises(ParameterOutOfRange):
        run_kappa_trend(1.0, [0.5])


def test_rational_vs_irrational_frame():
    frame = run_rational_vs_irrational(300, [1.5, 2.0], rng=RngStream(13))
    assert list(frame.columns) == ["R", "rational", "irrational", "stderr_rational", "stderr_irrational",
                                   "separated"]
    assert len(frame) == 2
