import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.checks.base import CheckContext
from src.checks.kernel_checks import check_semigroup
from src.convolve import DensityField, Grid, sample
from src.core.exceptions import AliasingError, ConfigException
from src.kernel import (
    FarFieldEvaluator,
    GridExponent,
    KernelField,
    cauchy_kernel,
    decomposition_check,
    far_field,
    gaussian_kernel,
    grid_exponent,
    heat_kernel_spectral,
    oracle_density,
    relativistic_bessel,
    relativistic_oracle,
    semigroup_check,
    small_jump_kernel,
    subordinator_laplace,
)
from src.models import SphericalDensity, make_gaussian, make_stable


@pytest.fixture(scope="module")
def oracle_grid():
    return Grid(1, 2**18, 256.0)


@pytest.mark.parametrize("t", [0.1, 0.5, 2.0])
def test_cauchy_spectral_matches_oracle(cauchy, oracle_grid, t):
    points = oracle_grid.points()
    points = points[np.abs(points[:, 0]) <= 20.0]
    spectral = heat_kernel_spectral(cauchy, t, oracle_grid).value_at(points)
    exact = oracle_density(cauchy, t, points)
    assert np.abs(spectral - exact).max() / exact.max() < 1e-6


def test_cauchy_oracle_is_normalized_cauchy_law():
    x = np.array([0.0, 1.0, 3.0])
    assert_allclose(cauchy_kernel(x, 2.0), 2.0 / (np.pi * (4.0 + x**2)), rtol=1e-14)


def test_spectral_kernel_mass(stable15, relativistic):
    grid = Grid(1, 2**12, 64.0)
    for model in (stable15, relativistic):
        assert heat_kernel_spectral(model, 1.0, grid).mass_defect < 1e-6


def test_compound_poisson_kernel_carries_atom(pure_compound):
    grid = Grid(1, 2**12, 64.0)
    kernel = heat_kernel_spectral(pure_compound, 1.0, grid)
    assert kernel.atom is not None
    assert_allclose(kernel.atom.weight, np.exp(-sample(pure_compound, grid).mass), rtol=1e-12)
    assert kernel.mass_defect < 1e-6


def test_gaussian_part_alone():
    grid = Grid(1, 2**12, 32.0)
    model = make_gaussian(1, A=1.0)
    kernel = heat_kernel_spectral(model, 0.5, grid)
    x = np.array([[0.0], [1.0], [2.5]])
    assert_allclose(kernel.value_at(x), gaussian_kernel(x, 0.5, np.eye(1)), rtol=1e-8)


def test_time_must_be_positive(stable15):
    with pytest.raises(ConfigException):
        heat_kernel_spectral(stable15, 0.0, Grid(1, 64, 8.0))


@pytest.mark.parametrize("t, s", [(0.25, 0.25), (0.5, 1.0)])
def test_semigroup(stable15, t, s):
    report = semigroup_check(stable15, t, s, Grid(1, 2**13, 64.0))
    assert report.passed, report.to_dict()


def test_semigroup_cauchy_wide_box(cauchy):
    report = semigroup_check(cauchy, 0.5, 1.0, Grid(1, 2**15, 256.0))
    assert report.passed, report.to_dict()


def test_semigroup_rejects_wrong_exponent(stable15):
    grid = Grid(1, 2**13, 64.0)
    exponent = grid_exponent(stable15, grid, 0.5)
    xi = grid.frequency_axis()
    # Still a Levy exponent, but not the one of the model
    wrong = GridExponent(grid=grid, values=3.0 * exponent.values + xi**2, method=exponent.method)
    report = semigroup_check(stable15, 0.5, 1.0, grid, exponent=wrong)
    assert not report.passed
    assert report.sup_residual > 1e-2


def test_semigroup_jump_diffusion(jump_diffusion):
    assert semigroup_check(jump_diffusion, 0.5, 1.0, Grid(1, 2**12, 64.0)).sup_residual < 1e-5


def _dipped_exponent(grid, depth):
    """Exponent of a heat kernel (A = 1, t = 1) minus a wide bump of relative height `depth` at x = 20."""
    xi = grid.frequency_axis()
    bump = np.exp(-2.0 * xi**2) * np.exp(1j * 20.0 * xi)
    peak = 1.0 / np.sqrt(4.0 * np.pi)
    return GridExponent(grid=grid, values=-np.log(np.exp(-(xi**2)) - depth * peak * bump), method="hybrid")


@pytest.mark.parametrize("depth", [1e-10, 1e-9, 1e-8])
def test_spectral_negatives_above_round_off_raise(depth):
    grid = Grid(1, 2**10, 64.0)
    with pytest.raises(AliasingError):
        heat_kernel_spectral(make_gaussian(1, 1.0), 1.0, grid, _dipped_exponent(grid, depth))


def test_spectral_clip_keeps_round_off():
    grid = Grid(1, 2**10, 64.0)
    kernel = heat_kernel_spectral(make_gaussian(1, 1.0), 1.0, grid, _dipped_exponent(grid, 0.0))
    assert kernel.values.min() >= 0.0
    assert kernel.mass_ok


def test_small_jump_kernel_under_shared_clip(stable15):
    kernel = small_jump_kernel(stable15, 1.0, 0.5)
    assert kernel.values.min() >= 0.0
    assert kernel.mass_ok, kernel.mass_defect


def test_mass_flag():
    grid = Grid(1, 64, 8.0)
    half = DensityField(grid, np.full(grid.shape, 0.5 / (2.0 * grid.length)))
    kernel = KernelField(field=half, t=1.0, provenance="spectral")
    assert kernel.mass_defect == pytest.approx(0.5)
    assert not kernel.mass_ok


def test_decomposition_cauchy(cauchy, oracle_grid):
    report = decomposition_check(cauchy, 0.5, oracle_grid)
    assert report.sup_residual < 1e-5


def test_decomposition_jump_diffusion(jump_diffusion):
    report = decomposition_check(jump_diffusion, 1.0, Grid(1, 2**12, 64.0))
    assert report.passed, report.to_dict()


def test_relativistic_oracle_against_bessel():
    x = np.array([0.0, 1.0, 5.0, 20.0, 60.0])
    for d in (1, 2, 3):
        points = np.column_stack([x] + [np.zeros_like(x)] * (d - 1))
        assert_allclose(relativistic_oracle(d, 1.0, 1.0, points), relativistic_bessel(d, 1.0, 1.0, points), rtol=1e-8)


@pytest.mark.parametrize("lam", [0.25, 1.0, 4.0, 9.0])
def test_subordinator_laplace_transform(lam):
    assert_allclose(subordinator_laplace(1.0, lam), np.exp(-np.sqrt(lam)), rtol=1e-10)


def test_relativistic_massless_limit():
    x = np.array([0.0, 1.0, 5.0, 20.0])
    assert_allclose(relativistic_oracle(1, 1e-10, 1.0, x), cauchy_kernel(x, 1.0), rtol=1e-8)


def test_oracle_needs_known_family(stable15):
    with pytest.raises(ConfigException):
        oracle_density(stable15, 1.0, np.array([1.0]))
    with pytest.raises(ConfigException):
        relativistic_oracle(1, 0.0, 1.0, np.array([1.0]))


def test_far_field_cauchy_decomposition(cauchy):
    evaluator = FarFieldEvaluator(cauchy, 1.0, "decomposition", probe_radius=1000.0)
    for x in (1000.0, -1000.0):
        value = evaluator(np.array([x]))
        exact = float(cauchy_kernel(np.array([x]), 1.0)[0])
        assert abs(value.value / exact - 1.0) < 1e-3


def test_far_field_relativistic_spectral(relativistic):
    value = far_field(relativistic, 1.0, np.array([40.0]), method="spectral")
    exact = float(relativistic_oracle(1, 1.0, 1.0, np.array([40.0]))[0])
    assert value.method == "spectral"
    assert abs(value.value / exact - 1.0) < 1e-2


def test_far_field_symmetry():
    model = make_stable(1, 1.5, SphericalDensity.constant(1, 1.0))
    evaluator = FarFieldEvaluator(model, 1.0, "spectral", probe_radius=100.0)
    assert_allclose(evaluator(np.array([50.0])).value, evaluator(np.array([-50.0])).value, rtol=1e-6)


def test_far_field_method_resolution(cauchy, relativistic, pure_compound):
    assert FarFieldEvaluator(cauchy, 1.0).method == "oracle"
    assert FarFieldEvaluator(relativistic, 1.0, "spectral").method == "spectral"
    with pytest.raises(ConfigException):
        FarFieldEvaluator(pure_compound, 1.0, "decomposition")
    with pytest.raises(ConfigException):
        FarFieldEvaluator(pure_compound, 1.0, "oracle")
    with pytest.raises(ConfigException):
        FarFieldEvaluator(cauchy, 1.0, "montecarlo")


def test_semigroup_check_default_pairs(stable15):
    result = check_semigroup(stable15, {}, None, CheckContext())
    frame = result.frames["semigroup"]
    assert list(zip(frame["t"], frame["s"])) == [(0.25, 0.25), (0.5, 1.0)]
    assert result.passed, result.measured
