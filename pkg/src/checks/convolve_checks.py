"""Checks on lattice convolutions of the big-jump measure."""

import logging
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ..convolve.ops import nfold
from ..convolve.restricted import RestrictedMeasure, exp_moment_integral, field_exp_moment, sample
from ..core.exceptions import ConfigException
from ..models.levy_model import LevyModel
from .base import CheckContext, CheckResult, as_vector

logger = logging.getLogger(__name__)

CONVOLUTION_MASS_TOLERANCE = 1e-9
FACTORIZATION_TOLERANCE = 1e-4


def _restricted_field(model: Optional[LevyModel], params: Dict[str, Any], context: CheckContext):
    if model is None or not model.has_jumps:
        raise ConfigException("This check needs a model with a jump part")
    r = float(params.get("r", 1.0))
    grid = context.grid(params.get("grid"), model.d, n=2**16, length=64.0)
    measure = RestrictedMeasure(model, r)
    return measure, sample(measure, grid, boundary_weight=True)


def check_convolution_mass(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """mass(nu_r^{n*}) against mass(nu_r)^n on the lattice, n = 2..max_power."""
    _, field = _restricted_field(model, params, context)
    limit = tolerance if tolerance is not None else context.tolerance(CONVOLUTION_MASS_TOLERANCE)
    rows = []
    for n in range(2, int(params.get("max_power", 4)) + 1):
        power = nfold(field, n, mass_rtol=None)
        expected = field.mass**n
        rows.append({"n": n, "mass": power.mass, "expected": expected, "error": abs(power.mass / expected - 1.0)})
    frame = pd.DataFrame(rows)
    worst = float(frame["error"].max())
    return CheckResult(passed=worst <= limit, measured={"max_error": worst}, frames={"convolution_mass": frame})


def check_factorization(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Lattice int e^{kappa <theta, z>} nu_r^{n*}(z) dz against the n-th power of the quadrature integral.

    The grid should resolve r as a node and hold the tilted measure well inside the box.
    """
    measure, field = _restricted_field(model, params, context)
    theta = as_vector(params.get("theta", [1.0] * model.d), model.d)
    theta = theta / np.linalg.norm(theta)
    zeta = model.kappa * theta
    limit = tolerance if tolerance is not None else context.tolerance(FACTORIZATION_TOLERANCE)
    rows = []
    for n in range(1, int(params.get("max_power", 4)) + 1):
        power = field if n == 1 else nfold(field, n, mass_rtol=None)
        lattice = field_exp_moment(power, zeta)
        quadrature = exp_moment_integral(model, measure.r, theta, n)
        rows.append({"n": n, "lattice": lattice, "quadrature": quadrature, "error": abs(lattice / quadrature - 1.0)})
        logger.debug(f"Factorization n={n}: lattice {lattice:.10g}, quadrature {quadrature:.10g}")
    frame = pd.DataFrame(rows)
    worst = float(frame["error"].max())
    return CheckResult(
        passed=worst <= limit,
        measured={"max_error": worst, "r": measure.r, "kappa": model.kappa},
        frames={"factorization": frame},
    )
