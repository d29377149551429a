import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.core.exceptions import DivergentMoment, OutOfRange
from src.symbol import (
    check_condition_D,
    exp_moment_exponent,
    h_of_t,
    phi,
    psi,
    psi_inverse,
    psi_max,
    psi_table,
    relativistic_moment_exponent,
)


def test_cauchy_normalization(cauchy):
    assert_allclose(phi(cauchy, np.array([[1.0]])).real, [1.0], rtol=1e-8)
    xi = np.array([[0.5], [-2.0], [10.0]])
    assert_allclose(psi(cauchy, xi).real, np.abs(xi[:, 0]), rtol=1e-7)
    assert_allclose(psi(cauchy, xi).imag, 0.0, atol=1e-9)


def test_cauchy_scale_function(cauchy):
    for t in (0.1, 0.5, 2.0):
        assert_allclose(h_of_t(cauchy, t), t, rtol=1e-7)


@pytest.mark.parametrize("s", [0.01, 0.1, 1.0, 10.0, 100.0])
def test_psi_inverse_round_trip(stable15, s):
    assert_allclose(psi_max(stable15, psi_inverse(stable15, s)), s, rtol=1e-8)


def test_relativistic_inverse_small_s(relativistic):
    s = 1e-4
    assert_allclose(psi_inverse(relativistic, s), np.sqrt(2.0 * s), rtol=1e-3)


def test_psi_inverse_bounds(pure_compound):
    with pytest.raises(OutOfRange):
        psi_inverse(pure_compound, 0.0)
    with pytest.raises(OutOfRange):
        psi_inverse(pure_compound, 3.0 * pure_compound.mass)


def test_psi_table_doubling(stable15):
    table = psi_table(stable15)
    assert_allclose(table.doubling_ratios(), 2.0**1.5, rtol=1e-8)
    assert np.all(np.diff(table.values) >= 0)


def test_finite_measure_psi_saturates(pure_compound):
    table = psi_table(pure_compound)
    assert np.isfinite(table.sup)
    assert table.sup <= 2.0 * pure_compound.mass * (1 + 1e-6)


def test_relativistic_moment_at_kappa(relativistic):
    assert_allclose(relativistic_moment_exponent(relativistic, np.array([1.0])), -1.0, atol=1e-12)
    assert_allclose(exp_moment_exponent(relativistic, np.array([1.0])), -1.0, atol=1e-6)
    with pytest.raises(DivergentMoment):
        relativistic_moment_exponent(relativistic, np.array([1.5]))


def test_moment_diverges_at_critical_order(counterexample):
    with pytest.raises(DivergentMoment):
        exp_moment_exponent(counterexample, np.array([1.0]))
    assert np.isfinite(exp_moment_exponent(counterexample, np.array([0.5])))


def test_condition_d(stable15, pure_compound):
    report = check_condition_D(stable15, [0.1, 1.0, 10.0])
    assert report.status == "ok"
    assert report.bounded
    assert check_condition_D(pure_compound, [1.0]).status == "diverges"
