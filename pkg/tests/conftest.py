import numpy as np
import pytest

from src.models import SphericalDensity, make_compound_poisson, make_relativistic, make_stable, model_from_config

CAUCHY_G = 1.0 / np.pi


@pytest.fixture(scope="session")
def cauchy():
    """Symmetric 1-stable model normalized so that psi(xi) = |xi|."""
    return make_stable(1, 1.0, SphericalDensity.constant(1, CAUCHY_G))


@pytest.fixture(scope="session")
def stable15():
    return make_stable(1, 1.5, SphericalDensity.constant(1, 1.0))


@pytest.fixture(scope="session")
def relativistic():
    return make_relativistic(1, 1.0, 1.0)


@pytest.fixture(scope="session")
def pure_compound():
    return make_compound_poisson(1, 1.0, 2.0, rate=1.0)


@pytest.fixture(scope="session")
def jump_diffusion():
    return make_compound_poisson(1, 1.0, 2.0, rate=1.0, A=1.0)


@pytest.fixture(scope="session")
def counterexample():
    return model_from_config(
        {
            "family": "exponential",
            "d": 1,
            "eta": {"type": "power", "value": 1.0, "exponent": 1.5},
            "m": 1.0,
            "beta": 1.0,
            "delta": 1.0,
            "allow_failing_profile": True,
        }
    )


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Run from a scratch directory so logs/ and out/ stay out of the repository."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("LEVYLAB_OUTPUT_DIR", raising=False)
    return tmp_path / "out"
