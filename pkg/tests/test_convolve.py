import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.checks.base import CheckContext
from src.checks.convolve_checks import check_convolution_mass, check_factorization
from src.convolve import (
    DensityField,
    Grid,
    RestrictedMeasure,
    compound_poisson,
    compound_poisson_spectral,
    convolve,
    k_function,
    k_table,
    nfold,
    sample,
)
from src.core.exceptions import AliasingError, ConfigException, GridMismatch
from src.models import SphericalDensity, make_compound_poisson, make_stable


def _gaussian(grid, variance):
    x = grid.axis()
    return DensityField(grid, np.exp(-(x**2) / (2 * variance)) / np.sqrt(2 * np.pi * variance))


def test_grid_nodes():
    grid = Grid(1, 8, 4.0)
    assert grid.spacing == 1.0
    assert_allclose(grid.axis(), np.arange(-4.0, 4.0))
    with pytest.raises(ConfigException):
        Grid(1, 12, 4.0)
    with pytest.raises(ConfigException):
        Grid(4, 8, 4.0)


def test_gaussian_convolution():
    grid = Grid(1, 4096, 32.0)
    result = convolve(_gaussian(grid, 1.0), _gaussian(grid, 0.5))
    assert_allclose(result.values, _gaussian(grid, 1.5).values, atol=1e-8)


def test_convolve_rejects_grid_mismatch():
    with pytest.raises(GridMismatch):
        convolve(_gaussian(Grid(1, 64, 8.0), 1.0), _gaussian(Grid(1, 128, 8.0), 1.0))


def test_nfold_preserves_mass():
    grid = Grid(1, 4096, 64.0)
    field = DensityField(grid, 0.5 * _gaussian(grid, 1.0).values)
    power = nfold(field, 5)
    assert_allclose(power.mass, 0.5**5, rtol=1e-10)


def test_nfold_detects_aliasing():
    grid = Grid(1, 1024, 8.0)
    wide = DensityField(grid, (np.abs(grid.axis()) < 7.0).astype(float))
    with pytest.raises(AliasingError):
        nfold(wide, 2)
    with pytest.raises(ConfigException):
        nfold(wide, 0)


def test_stable_big_jump_mass(stable15):
    assert_allclose(RestrictedMeasure(stable15, 1.0).mass, 2.0 / 1.5, rtol=1e-8)
    with pytest.raises(ConfigException):
        RestrictedMeasure(stable15, 0.0)


def test_sample_excludes_cutoff_ball(stable15):
    grid = Grid(1, 1024, 16.0)
    field = sample(RestrictedMeasure(stable15, 1.0), grid)
    inside = np.abs(grid.axis()) < 1.0
    assert np.all(field.values[inside] == 0.0)
    assert np.all(field.values[~inside] > 0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_k_function_decays_like_r_to_minus_alpha(alpha):
    model = make_stable(1, alpha, SphericalDensity.constant(1, 1.0))
    frame = k_table(model, [1.0, 2.0, 4.0, 8.0])
    assert not frame["diverged"].any()
    assert frame.attrs["slope"] == pytest.approx(-alpha, abs=0.1)


def test_k_function_flags_divergence(counterexample):
    estimate = k_function(counterexample, 1.0)
    assert estimate.diverged
    with pytest.raises(ConfigException):
        k_function(counterexample, 0.5)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_compound_series_matches_spectral(pure_compound, t):
    jumps = sample(pure_compound, Grid(1, 4096, 64.0))
    series = compound_poisson(jumps, t, mass_rtol=None)
    spectral = compound_poisson_spectral(jumps, t)
    residual = np.abs(series.values - spectral.values).max() / np.abs(spectral.values).max()
    assert residual < 1e-8
    assert_allclose(series.mass, 1.0 - np.exp(-t * jumps.mass), rtol=1e-8)


def test_convolution_mass_check():
    model = make_compound_poisson(1, 1.0, 4.0, rate=1.0, A=0.5)
    result = check_convolution_mass(model, {"r": 1.0, "max_power": 4}, 1e-9, CheckContext())
    assert result.passed
    assert list(result.frames["convolution_mass"]["n"]) == [2, 3, 4]


def test_factorization_check():
    # the tilted measure decays like |z|^-4 and stays inside the box
    model = make_compound_poisson(1, 1.0, 4.0, rate=1.0, A=0.5)
    result = check_factorization(model, {"r": 1.0, "theta": [1.0], "max_power": 4}, 1e-4, CheckContext())
    assert result.passed, result.measured
    assert result.measured["kappa"] == 1.0
