"""Checks on heat kernels: oracles, mass, semigroup, decomposition and far-field values."""

import logging
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..convolve.grid import DensityField
from ..convolve.ops import compound_poisson, compound_poisson_spectral
from ..convolve.restricted import sample
from ..core.exceptions import ConfigException
from ..kernel.decomposition import (
    DECOMPOSITION_TOLERANCE,
    SEMIGROUP_TOLERANCE,
    decomposition_check,
    semigroup_check,
)
from ..kernel.far_field import FarFieldEvaluator
from ..kernel.field import MASS_TOLERANCE
from ..kernel.oracle import (
    cauchy_kernel,
    oracle_density,
    relativistic_bessel,
    relativistic_oracle,
    subordinator_laplace,
)
from ..kernel.spectral import heat_kernel_spectral
from ..models.levy_model import LevyModel
from .base import CheckContext, CheckResult, as_vector

logger = logging.getLogger(__name__)

ORACLE_TOLERANCE = 1e-6
SERIES_TOLERANCE = 1e-8
FAR_FIELD_TOLERANCE = 1e-2
LAPLACE_TOLERANCE = 1e-10
MASSLESS_TOLERANCE = 1e-8
SEMIGROUP_PAIRS = [[0.25, 0.25], [0.5, 1.0]]


def _require(model: Optional[LevyModel]) -> LevyModel:
    if model is None:
        raise ConfigException("This check needs a model section")
    return model


def _times(params: Dict[str, Any], default: List[float]) -> List[float]:
    return [float(t) for t in params.get("times", default)]


def check_oracle(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Spectral kernel against the closed form on |x| <= window, sup-norm relative."""
    model = _require(model)
    grid = context.grid(params.get("grid"), model.d, n=2**18, length=256.0)
    window = float(params.get("window", 20.0))
    limit = tolerance if tolerance is not None else context.tolerance(ORACLE_TOLERANCE)
    inside = np.all(np.abs(grid.points()) <= window, axis=1)
    points = grid.points()[inside]
    rows, errors = [], {}
    for t in _times(params, [0.1, 0.5, 2.0]):
        spectral = heat_kernel_spectral(model, t, grid).value_at(points)
        exact = oracle_density(model, t, points)
        errors[t] = float(np.abs(spectral - exact).max() / np.abs(exact).max())
        logger.info(f"Oracle error at t={t}: {errors[t]:.3e}")
        if model.d == 1:
            rows.append(pd.DataFrame({"t": t, "x": points[:, 0], "spectral": spectral, "oracle": exact}))
    frames = {"oracle": pd.concat(rows, ignore_index=True)} if rows else {}
    return CheckResult(
        passed=max(errors.values()) < limit,
        measured={"errors": {str(t): e for t, e in errors.items()}, "grid": {"n": grid.n, "length": grid.length}},
        frames=frames,
    )


def check_mass(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """|mass(p_t) - 1| (atom included) below tolerance."""
    model = _require(model)
    grid = context.grid(params.get("grid"), model.d)
    limit = tolerance if tolerance is not None else context.tolerance(MASS_TOLERANCE)
    kernels = {t: heat_kernel_spectral(model, t, grid) for t in _times(params, [0.5, 1.0, 2.0])}
    defects = {t: kernel.mass_defect for t, kernel in kernels.items()}
    frame = pd.DataFrame(
        {
            "t": list(defects),
            "mass_defect": list(defects.values()),
            "mass_ok": [kernel.mass_ok for kernel in kernels.values()],
        }
    )
    return CheckResult(
        passed=max(defects.values()) <= limit,
        measured={"max_mass_defect": max(defects.values())},
        frames={"mass": frame},
    )


def check_semigroup(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """||p_t * p_s - p_{t+s}|| / ||p_{t+s}|| for the listed (t, s) pairs."""
    model = _require(model)
    grid = context.grid(params.get("grid"), model.d, n=2**13)
    pairs = params.get("pairs", SEMIGROUP_PAIRS)
    limit = tolerance if tolerance is not None else context.tolerance(SEMIGROUP_TOLERANCE)
    reports = [semigroup_check(model, float(t), float(s), grid, tolerance=limit) for t, s in pairs]
    frame = pd.DataFrame([report.to_dict() for report in reports])
    return CheckResult(
        passed=all(report.passed for report in reports),
        measured={"max_residual": float(frame["sup_residual"].max())},
        frames={"semigroup": frame},
    )


def check_decomposition(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Factorized kernel against the spectral kernel, sup-norm relative on the central box."""
    model = _require(model)
    grid = context.grid(params.get("grid"), model.d, n=2**18, length=256.0)
    limit = tolerance if tolerance is not None else context.tolerance(DECOMPOSITION_TOLERANCE)
    reports = [decomposition_check(model, t, grid, tolerance=limit) for t in _times(params, [0.5])]
    frame = pd.DataFrame([report.to_dict() for report in reports])
    return CheckResult(
        passed=all(report.passed for report in reports),
        measured={"max_residual": float(frame["sup_residual"].max())},
        frames={"decomposition": frame},
    )


def check_compound_series(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Truncated series e^{-t|nu|} sum t^n nu^{n*}/n! against one spectral inversion."""
    model = _require(model)
    if not model.finite:
        raise ConfigException("The compound Poisson series check needs a finite Levy measure")
    grid = context.grid(params.get("grid"), model.d)
    limit = tolerance if tolerance is not None else context.tolerance(SERIES_TOLERANCE)
    jumps = sample(model, grid)
    rows = []
    for t in _times(params, [0.5, 1.0, 2.0]):
        series = compound_poisson(jumps, t, mass_rtol=None)
        spectral = compound_poisson_spectral(jumps, t)
        residual = float(np.abs(series.values - spectral.values).max() / np.abs(spectral.values).max())
        rows.append({"t": t, "sup_residual": residual, "series_mass": series.mass})
    frame = pd.DataFrame(rows)
    return CheckResult(
        passed=bool(frame["sup_residual"].max() < limit),
        measured={"max_residual": float(frame["sup_residual"].max())},
        frames={"compound_series": frame},
    )


def check_far_field(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Far-field values against the oracle and, for symmetric models, against p_t(-x)."""
    model = _require(model)
    t = float(params.get("t", 1.0))
    points = [as_vector(x, model.d) for x in params.get("points", [[40.0] * model.d])]
    grid = context.grid(params["grid"], model.d) if "grid" in params else None
    reach = max(float(np.linalg.norm(x)) for x in points)
    evaluator = FarFieldEvaluator(model, t, params.get("method", "auto"), grid, probe_radius=max(64.0, reach))
    limit = tolerance if tolerance is not None else context.tolerance(FAR_FIELD_TOLERANCE)
    rows = []
    for x in points:
        value = evaluator(x)
        row = {"x": x.tolist(), "value": value.value, "accuracy": value.accuracy, "method": value.method}
        if params.get("reference", "oracle") == "oracle":
            exact = float(oracle_density(model, t, x[None, :])[0])
            row["oracle"] = exact
            row["error"] = abs(value.value / exact - 1.0)
        if params.get("symmetry", model.symmetric):
            mirrored = evaluator(-x).value
            row["mirror_error"] = abs(mirrored / value.value - 1.0)
        rows.append(row)
    frame = pd.DataFrame(rows)
    worst = max((float(frame[c].max()) for c in ("error", "mirror_error") if c in frame), default=0.0)
    return CheckResult(
        passed=worst <= limit,
        measured={"max_error": worst, "method": evaluator.method},
        frames={"far_field": frame},
    )


def check_relativistic_oracle(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Subordination oracle: Laplace identity, Bessel form and the massless (Cauchy) limit."""
    d = int(params.get("d", model.d if model is not None else 1))
    m = float(params.get("m", model.params.get("m", 1.0) if model is not None else 1.0))
    t = float(params.get("t", 1.0))
    xs = np.asarray(params.get("x", [0.0, 1.0, 5.0, 20.0]), dtype=float)
    points = np.column_stack([xs] + [np.zeros_like(xs)] * (d - 1))

    laplace = {
        lam: abs(subordinator_laplace(t, lam) / np.exp(-t * np.sqrt(lam)) - 1.0)
        for lam in params.get("lambdas", [1.0, 4.0, 9.0])
    }
    oracle = relativistic_oracle(d, m, t, points)
    bessel = np.abs(oracle / relativistic_bessel(d, m, t, points) - 1.0)
    massless = np.abs(
        relativistic_oracle(d, float(params.get("m_small", 1e-10)), t, points) / cauchy_kernel(points, t, d) - 1.0
    )
    frame = pd.DataFrame(
        {"x": xs, "oracle": oracle, "bessel_error": bessel, "massless_error": massless}
    )
    passed = (
        max(laplace.values()) <= context.tolerance(LAPLACE_TOLERANCE)
        and massless.max() <= context.tolerance(MASSLESS_TOLERANCE)
        and bessel.max() <= (tolerance if tolerance is not None else context.tolerance(MASSLESS_TOLERANCE))
    )
    return CheckResult(
        passed=bool(passed),
        measured={
            "laplace_errors": {str(k): v for k, v in laplace.items()},
            "max_bessel_error": float(bessel.max()),
            "max_massless_error": float(massless.max()),
        },
        frames={"relativistic_oracle": frame},
    )


def check_field_export(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Spectral kernel at time t, returned as a field artifact; passes when its mass is 1."""
    model = _require(model)
    t = float(params.get("t", 1.0))
    grid = context.grid(params.get("grid"), model.d)
    kernel = heat_kernel_spectral(model, t, grid)
    limit = tolerance if tolerance is not None else context.tolerance(MASS_TOLERANCE)
    measured = {"t": t, "mass": kernel.mass, "grid": {"n": grid.n, "length": grid.length}}
    if kernel.atom is not None:
        measured["atom"] = {"weight": kernel.atom.weight, "location": kernel.atom.location.tolist()}
    field = kernel.corrected() if params.get("remove_images", True) else kernel.field
    return CheckResult(
        passed=kernel.mass_defect <= limit,
        measured=measured,
        fields={f"kernel_t{t:g}": DensityField(grid, field.values)},
    )
