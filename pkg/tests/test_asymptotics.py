import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.asymptotics import (
    RatioSeries,
    convolution_ratio_series,
    default_directions,
    diagnose,
    kernel_ratio_series,
    predicted_limit,
    probe_radii,
    sandwich_check,
)
from src.checks.asymptotic_checks import check_limit_identity, check_scaling
from src.checks.base import CheckContext
from src.convolve import RestrictedMeasure
from src.core.exceptions import ConfigException, NumericalException
from src.models import SphericalDensity, make_stable


def _series(ratios, limit=1.0, s=(1.0, 2.0, 4.0, 8.0)):
    s = np.asarray(s, dtype=float)
    return RatioSeries(kind="synthetic", s=s, ratios=np.asarray(ratios, dtype=float), accuracy=np.zeros(len(s)), limit=limit)


def test_limit_is_one_without_exponential_tail(stable15):
    assert predicted_limit(stable15, 1.0, np.array([1.0])) == 1.0
    assert predicted_limit(stable15, 2.0, np.array([-1.0]), np.array([3.0])) == 1.0


def test_relativistic_limit(relativistic):
    # psi~(kappa theta) = -m at the decay rate
    assert_allclose(predicted_limit(relativistic, 1.0, np.array([1.0])), np.e, rtol=1e-12)


@pytest.mark.parametrize("y", [0.5, -0.5, 2.0])
def test_limit_shift_identity(relativistic, y):
    base = predicted_limit(relativistic, 0.7, np.array([1.0]))
    shifted = predicted_limit(relativistic, 0.7, np.array([1.0]), np.array([y]))
    assert_allclose(shifted / base, np.exp(y), rtol=1e-12)


def test_limit_identity_check(jump_diffusion):
    result = check_limit_identity(jump_diffusion, {"t": 1.0}, 1e-10, CheckContext())
    assert result.passed, result.measured


def test_diagnose_limit_mode():
    verdict = diagnose(_series(1.0 + 0.1 / np.array([1.0, 2.0, 4.0, 8.0])), tolerance=0.02)
    assert verdict.mode == "limit"
    assert verdict.passed
    assert verdict.slope == pytest.approx(-1.0)
    assert verdict.final_deviation == pytest.approx(0.0125)


def test_diagnose_is_monotone_in_tolerance():
    series = _series(1.0 + 0.1 / np.array([1.0, 2.0, 4.0, 8.0]))
    outcomes = [diagnose(series, tol).passed for tol in (1e-3, 1e-2, 2e-2, 1e-1)]
    assert outcomes == sorted(outcomes)
    assert outcomes[0] is False and outcomes[-1] is True


def test_diagnose_rejects_growing_deviation():
    verdict = diagnose(_series([1.001, 1.002, 1.001, 1.005]), tolerance=0.1)
    assert not verdict.trend_ok
    assert not verdict.passed


def test_diagnose_self_mode():
    s = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
    verdict = diagnose(_series(2.0 + 1.0 / s**2, limit=None, s=s), tolerance=0.01)
    assert verdict.mode == "self"
    assert verdict.passed


def test_diagnose_needs_four_valid_points():
    with pytest.raises(NumericalException):
        diagnose(_series([1.0, np.nan, 1.0, np.nan]))


def test_series_rejects_unordered_radii():
    with pytest.raises(ConfigException):
        _series([1.0, 1.0, 1.0, 1.0], s=(1.0, 4.0, 2.0, 8.0))


def test_probe_radii_capped_for_exponential_tails(jump_diffusion, stable15):
    assert_allclose(probe_radii(stable15, 2.0), [16.0, 32.0, 64.0, 128.0, 256.0])
    capped = probe_radii(jump_diffusion, 1.0)
    assert capped.max() <= 60.0 / jump_diffusion.kappa
    assert len(capped) >= 4


def test_default_directions_follow_the_support():
    one_sided = make_stable(1, 1.5, SphericalDensity.two_point(1.0, 0.0))
    assert_allclose(default_directions(one_sided), [[1.0]])


def test_cauchy_kernel_ratio_converges(cauchy):
    series = kernel_ratio_series(cauchy, 1.0, np.array([1.0]), s_list=[10.0, 20.0, 40.0, 100.0])
    # p_1(s) / nu(s) = s^2 / (1 + s^2)
    assert_allclose(series.ratios, series.s**2 / (1.0 + series.s**2), rtol=1e-8)
    verdict = diagnose(series, 1e-2)
    assert verdict.passed
    assert verdict.slope == pytest.approx(-2.0, abs=0.3)
    assert series.ratios[-1] > 0.999


def test_stable_convolution_ratio(stable15):
    s_list = [62.5, 125.0, 250.0, 500.0, 1000.0]
    series = convolution_ratio_series(stable15, 1.0, 2, np.array([1.0]), s_list=s_list)
    expected = 2.0 * RestrictedMeasure(stable15, 1.0).mass
    assert_allclose(series.limit, expected, rtol=1e-8)
    assert abs(series.ratios[-1] / expected - 1.0) < 0.02


def test_sandwich_radius_for_cauchy(cauchy):
    kwargs = dict(t_set=[1.0], y_ball=[np.array([0.0])], s_list=[10.0, 20.0, 40.0, 100.0])
    report = sandwich_check(cauchy, epsilon=0.05, **kwargs)
    assert report.passed and report.radius <= 100.0
    # 1 / (1 + s^2) drops below 1e-3 between s = 20 and s = 40
    assert sandwich_check(cauchy, epsilon=1e-3, **kwargs).radius == 40.0
    assert sandwich_check(cauchy, epsilon=2.0, **kwargs).radius == 10.0


def test_sandwich_rejects_nonpositive_epsilon(cauchy):
    with pytest.raises(ConfigException):
        sandwich_check(cauchy, [1.0], [np.array([0.0])], epsilon=0.0)


def test_scaling_invariance(pure_compound):
    result = check_scaling(pure_compound, {"t": 1.0, "theta": [1.0], "factors": [0.5, 2.0]}, 1e-6, CheckContext())
    assert result.passed, result.measured
