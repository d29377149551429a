import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from src.core.exceptions import ConfigException
from src.models import (
    RadialProfile,
    SphericalDensity,
    Verdict,
    check_condition_B,
    check_condition_C,
    classify_profile,
    make_relativistic,
    make_stable,
    make_tempered,
    model_from_config,
    tilt,
)
from src.models.families import evaluate_closed_form

P, S, E, F = Verdict.POLY_OK, Verdict.STRETCHED_OK, Verdict.EXP_OK, Verdict.FAILS

# (m, beta, delta, d, verdict)
CLASSIFICATION_TABLE = [
    (0.0, 0.0, 1.5, 1, P),
    (0.0, 0.0, 1.0, 1, F),
    (0.0, 0.0, 0.5, 1, F),
    (0.0, 0.0, 3.0, 1, P),
    (0.0, 0.5, 2.0, 1, P),
    (0.0, 1.0, 2.0, 1, P),
    (1.0, 0.5, 0.0, 1, S),
    (1.0, 0.5, 3.0, 1, S),
    (2.0, 0.1, 1.0, 1, S),
    (0.5, 0.99, 0.2, 1, S),
    (1.0, 1.0, 1.0, 1, F),
    (1.0, 1.0, 1.01, 1, E),
    (1.0, 1.0, 2.0, 1, E),
    (3.0, 1.0, 0.5, 1, F),
    (1.0, 1.0, 0.0, 1, F),
    (1.0, 0.0, 2.0, 1, F),
    (1.0, 1.5, 2.0, 1, F),
    (0.1, 1.0, 5.0, 1, E),
    (0.0, 0.0, 2.5, 2, P),
    (0.0, 0.0, 2.0, 2, F),
    (0.0, 0.0, 1.5, 2, F),
    (0.0, 0.0, 4.0, 2, P),
    (1.0, 0.5, 0.0, 2, S),
    (1.0, 0.25, 1.0, 2, S),
    (1.0, 1.0, 1.5, 2, F),
    (1.0, 1.0, 1.6, 2, E),
    (1.0, 1.0, 3.5, 2, E),
    (1.0, 1.0, 1.0, 2, F),
    (2.0, 1.0, 2.0, 2, E),
    (1.0, 0.0, 3.0, 2, F),
    (1.0, 2.0, 3.0, 2, F),
    (0.0, 1.0, 2.1, 2, P),
    (0.01, 0.5, 0.0, 2, S),
    (0.0, 0.0, 0.0, 2, F),
    (0.0, 0.0, 3.5, 3, P),
    (0.0, 0.0, 3.0, 3, F),
    (0.0, 0.0, 2.5, 3, F),
    (0.0, 0.0, 5.0, 3, P),
    (1.0, 0.5, 0.0, 3, S),
    (1.0, 0.75, 4.0, 3, S),
    (1.0, 1.0, 2.0, 3, F),
    (1.0, 1.0, 2.5, 3, E),
    (1.0, 1.0, 1.5, 3, F),
    (1.0, 1.0, 4.0, 3, E),
    (1.0, 0.0, 4.0, 3, F),
    (1.0, 1.2, 4.0, 3, F),
    (0.0, 0.5, 3.2, 3, P),
    (0.0, 0.0, 4.5, 4, P),
    (1.0, 1.0, 2.5, 4, F),
    (1.0, 1.0, 3.0, 4, E),
]


def test_classification_table_has_fifty_rows():
    assert len(CLASSIFICATION_TABLE) == 50


@pytest.mark.parametrize("m, beta, delta, d, expected", CLASSIFICATION_TABLE)
def test_classify_profile(m, beta, delta, d, expected):
    result = classify_profile(m, beta, delta, d)
    assert result.verdict is expected
    assert result.ok == (expected is not F)


def test_classify_rejects_negative_parameters():
    with pytest.raises(ConfigException):
        classify_profile(-1.0, 1.0, 2.0, 1)
    with pytest.raises(ConfigException):
        classify_profile(1.0, 1.0, 2.0, 0)


def test_stable_density_formula():
    model = make_stable(2, 1.0, SphericalDensity.constant(2, 1.0))
    assert_allclose(model.nu(np.array([[1.0, 0.0]])), [1.0], rtol=1e-12)
    assert model.kappa == 0.0
    assert not model.finite


def test_stable_quadrant_density_doubles_off_diagonal():
    model = make_stable(2, 1.5, SphericalDensity.quadrant(1.0, 2.0))
    r = 3.0
    theta = np.array([[np.cos(0.3), -np.sin(0.3)]])
    assert_allclose(model.nu(r * theta), [2.0 * r ** (-3.5)], rtol=1e-12)
    assert_allclose(model.nu(-r * theta), [2.0 * r ** (-3.5)], rtol=1e-12)
    assert model.symmetric


@pytest.mark.parametrize("alpha", [0.0, 2.0, -0.5, 2.5])
def test_stable_rejects_alpha_outside_range(alpha):
    with pytest.raises(ConfigException):
        make_stable(1, alpha, SphericalDensity.constant(1, 1.0))


def test_stable_rejects_degenerate_g():
    with pytest.raises(ConfigException):
        make_stable(1, 1.0, SphericalDensity.constant(1, 0.0))


def test_closed_form_families_match_on_random_points():
    rng = np.random.default_rng(3)
    points = rng.uniform(0.05, 30.0, size=(1000, 1)) * rng.choice([-1.0, 1.0], size=(1000, 1))
    for model in (
        make_stable(1, 1.3, SphericalDensity.two_point(1.0, 0.4)),
        make_relativistic(1, 1.0, 1.0),
        make_relativistic(2, 0.8, 2.0),
    ):
        sample = points if model.d == 1 else np.column_stack([points[:, 0], points[::-1, 0]])
        assert_allclose(model.nu(sample), evaluate_closed_form(model, sample), rtol=1e-11)


def test_relativistic_tail_is_exponential_times_power():
    model = make_relativistic(1, 1.0, 1.0)
    assert model.kappa == 1.0
    r = np.linspace(2.0, 50.0, 40)
    envelope = np.exp(-r) * r ** (-(1 + 1.0 + 1) / 2)
    ratio = model.nu(r[:, None]) / envelope
    assert ratio.max() / ratio.min() < 5.0


def test_tempered_kappa_follows_beta():
    g = SphericalDensity.constant(1, 1.0)
    stretched = make_tempered(1, RadialProfile(d=1, eta_exponent=1.5, m=1.0, beta=0.5, delta=1.5), g)
    exponential = make_tempered(1, RadialProfile(d=1, eta_exponent=1.5, m=2.0, beta=1.0, delta=2.0), g)
    assert stretched.family == "stretched" and stretched.kappa == 0.0
    assert exponential.family == "exponential" and exponential.kappa == 2.0
    assert not stretched.finite


def test_failing_profile_needs_override(counterexample):
    profile = RadialProfile(d=1, eta_exponent=1.5, m=1.0, beta=1.0, delta=1.0)
    with pytest.raises(ConfigException):
        make_tempered(1, profile, SphericalDensity.constant(1, 1.0))
    assert "K_INFINITE" in counterexample.flags


def test_profile_is_nonincreasing():
    profile = RadialProfile(d=2, eta_exponent=3.0, m=1.0, beta=0.5, delta=2.0)
    s = np.geomspace(1e-3, 1e3, 500)
    assert np.all(np.diff(profile.f(s)) <= 0)
    with pytest.raises(ConfigException):
        RadialProfile(d=1, eta_value=1.0, m=0.0, delta=2.0, c0=5.0).validate()


def test_model_from_config_round_trip(jump_diffusion):
    rebuilt = model_from_config(jump_diffusion.to_config())
    x = np.array([[0.5], [-3.0], [12.0]])
    assert_allclose(rebuilt.nu(x), jump_diffusion.nu(x), rtol=1e-12)
    assert_allclose(rebuilt.A, jump_diffusion.A)


def test_model_from_config_errors():
    with pytest.raises(ConfigException):
        model_from_config({"family": "lognormal", "d": 1})
    with pytest.raises(ConfigException):
        model_from_config({"family": "stable"})
    with pytest.raises(ConfigException):
        model_from_config({"family": "stable", "d": 2, "alpha": 1.0, "g": {"type": "two_point", "values": [1, 2]}})


def test_tilted_mass_matches_quadrature(pure_compound):
    zeta = 0.5
    tilted = tilt(pure_compound, np.array([zeta]))
    expected, _ = integrate.quad(
        lambda y: np.exp(zeta * y) * pure_compound.nu(np.array([[y]]))[0], -np.inf, np.inf, epsrel=1e-12
    )
    assert_allclose(tilted.mass, expected, rtol=1e-8)
    assert tilted.family == "tilted-compound-poisson"


def test_condition_b_stable_and_counterexample(stable15, counterexample):
    report = check_condition_B(stable15, [0.01, 0.1, 1.0], k_grid=[2.0, 8.0])
    assert report.liminf_proxy > 0
    assert report.k_decreasing
    assert "K_INFINITE" not in report.flags

    failing = check_condition_B(counterexample, [0.1, 1.0], k_grid=[2.0])
    assert "K_INFINITE" in failing.flags


def test_condition_c_relativistic_deviation():
    model = make_relativistic(1, 1.0, 1.0)
    report = check_condition_C(model, np.array([[1.0]]), np.array([[0.5]]), [50.0])
    assert report.deviations[-1] < 1e-2


def test_condition_c_rejects_small_radii(stable15):
    with pytest.raises(ConfigException):
        check_condition_C(stable15, np.array([[1.0]]), np.array([[0.0]]), [1.0, 5.0])
