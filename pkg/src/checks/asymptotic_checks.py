"""Checks on ratio series, their verdicts and the sandwich radius."""

import logging
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..asymptotics.limits import default_directions, predicted_limit, unit
from ..asymptotics.ratios import compound_ratio_series, convolution_ratio_series, kernel_ratio_series
from ..asymptotics.sandwich import sandwich_check
from ..asymptotics.series import DEFAULT_TOLERANCE, RatioSeries, diagnose
from ..core.exceptions import ConfigException
from ..kernel.far_field import FarFieldEvaluator
from ..models.levy_model import LevyModel
from .base import CheckContext, CheckResult, as_vector

logger = logging.getLogger(__name__)

DIRECTION_TOLERANCE = 0.05
SCALING_TOLERANCE = 1e-6
IDENTITY_TOLERANCE = 1e-10


def _require(model: Optional[LevyModel]) -> LevyModel:
    if model is None or not model.has_jumps:
        raise ConfigException("This check needs a model with a jump part")
    return model


def _theta(model: LevyModel, params: Dict[str, Any]) -> np.ndarray:
    if "theta" in params:
        return unit(as_vector(params["theta"], model.d), model.d)
    return default_directions(model)[0]


def _y(model: LevyModel, params: Dict[str, Any]) -> Optional[np.ndarray]:
    return as_vector(params["y"], model.d) if "y" in params else None


def _grid(model: LevyModel, params: Dict[str, Any], context: CheckContext):
    if "grid" not in params and context.grid_n is None and context.grid_l is None:
        return None
    return context.grid(params.get("grid"), model.d)


def _verdict_result(
    series: RatioSeries, params: Dict[str, Any], tolerance: Optional[float], context: CheckContext, name: str
) -> CheckResult:
    """diagnose() plus the optional slope target, final-ratio floor and limit requirement."""
    limit = tolerance if tolerance is not None else context.tolerance(DEFAULT_TOLERANCE)
    verdict = diagnose(series, limit)
    measured = verdict.to_dict()
    measured["refused"] = len(series.refused)
    passed = verdict.passed
    if params.get("require_limit") and series.limit is None:
        measured["limit_error"] = series.params.get("limit_error")
        passed = False
    if "target_slope" in params:
        slope_tolerance = float(params.get("slope_tolerance", 0.5))
        slope_ok = verdict.slope is not None and abs(verdict.slope - float(params["target_slope"])) <= slope_tolerance
        measured["slope_ok"] = slope_ok
        passed = passed and slope_ok
    if "min_final_ratio" in params:
        final = float(series.ratios[series.valid][-1])
        measured["final_ratio"] = final
        passed = passed and final > float(params["min_final_ratio"])
    logger.info(f"{name}: {verdict.mode} deviation {verdict.final_deviation:.3e}, slope {verdict.slope}")
    return CheckResult(passed=bool(passed), measured=measured, frames={name: series.to_frame()})


def check_kernel_ratio(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """p_t(s theta - y) / (t nu(s theta)) against its predicted limit."""
    model = _require(model)
    series = kernel_ratio_series(
        model,
        float(params.get("t", 1.0)),
        _theta(model, params),
        _y(model, params),
        s_list=params.get("s_list"),
        method=params.get("method", "auto"),
        grid=_grid(model, params, context),
    )
    return _verdict_result(series, params, tolerance, context, "kernel_ratio")


def check_direction_ratios(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Final ratio against the limit for every direction, time and shift.

    `axis_margin` drops directions with |prod theta_i| below it. The
    `normalized` column is R g(theta), which is p_t / (t rho(s)) for
    separable measures.
    """
    model = _require(model)
    thetas = (
        np.array([unit(as_vector(theta, model.d), model.d) for theta in params["directions"]])
        if "directions" in params
        else default_directions(model)
    )
    margin = params.get("axis_margin")
    if margin is not None:
        thetas = thetas[np.abs(np.prod(thetas, axis=1)) >= float(margin)]
    if len(thetas) == 0:
        raise ConfigException("No directions left to probe")
    shifts = [as_vector(y, model.d) for y in params.get("shifts", [[0.0] * model.d])]
    grid = _grid(model, params, context)
    limit = tolerance if tolerance is not None else context.tolerance(DIRECTION_TOLERANCE)
    s_list = params.get("s_list")

    rows: List[Dict[str, Any]] = []
    for t in params.get("times", [1.0]):
        t = float(t)
        evaluator = None
        for theta in thetas:
            for y in shifts:
                if evaluator is None:
                    reach = float(np.max(s_list)) if s_list else 64.0
                    evaluator = FarFieldEvaluator(
                        model, t, params.get("method", "auto"), grid, probe_radius=reach + float(np.linalg.norm(y))
                    )
                series = kernel_ratio_series(model, t, theta, y, s_list=s_list, evaluator=evaluator)
                final = float(series.ratios[series.valid][-1]) if series.valid.any() else np.nan
                g = float(model.g(theta[None, :])[0]) if model.separable else np.nan
                rows.append(
                    {
                        "t": t,
                        "theta": theta.tolist(),
                        "y": y.tolist(),
                        "s": float(series.s[series.valid][-1]) if series.valid.any() else np.nan,
                        "ratio": final,
                        "limit": series.limit,
                        "normalized": final * g,
                        "g": g,
                        "error": abs(final / series.limit - 1.0) if series.limit else np.nan,
                    }
                )
    frame = pd.DataFrame(rows)
    errors = frame["error"].to_numpy(dtype=float)
    worst = float(np.nanmax(errors)) if np.isfinite(errors).any() else np.inf
    return CheckResult(
        passed=bool(np.isfinite(errors).all() and worst <= limit),
        measured={"max_error": worst, "directions": len(thetas), "points": len(frame)},
        frames={"direction_ratios": frame},
    )


def check_convolution_ratio(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """nu_r^{n*}(s theta - y) / nu_r(s theta) against n e^{kappa <theta, y>} I^{n-1}."""
    model = _require(model)
    series = convolution_ratio_series(
        model,
        float(params.get("r", 1.0)),
        int(params.get("n", 2)),
        _theta(model, params),
        _y(model, params),
        s_list=params.get("s_list"),
        grid=_grid(model, params, context),
    )
    return _verdict_result(series, params, tolerance, context, "convolution_ratio")


def check_compound_ratio(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """p_bar_t(s theta - y) / (t nu(s theta)) with r = h(t)."""
    model = _require(model)
    series = compound_ratio_series(
        model,
        float(params.get("t", 1.0)),
        _theta(model, params),
        _y(model, params),
        s_list=params.get("s_list"),
        grid=_grid(model, params, context),
    )
    return _verdict_result(series, params, tolerance, context, "compound_ratio")


def check_sandwich(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Smallest probed radius with |R - limit| <= epsilon beyond it; `max_radius` bounds it."""
    model = _require(model)
    epsilon = tolerance if tolerance is not None else context.tolerance(float(params.get("epsilon", 0.05)))
    directions = (
        np.array([as_vector(theta, model.d) for theta in params["directions"]]) if "directions" in params else None
    )
    report = sandwich_check(
        model,
        [float(t) for t in params.get("times", [1.0])],
        [as_vector(y, model.d) for y in params.get("shifts", [[0.0] * model.d])],
        directions=directions,
        epsilon=epsilon,
        s_list=params.get("s_list"),
        method=params.get("method", "auto"),
        grid=_grid(model, params, context),
    )
    passed = report.passed
    if passed and "max_radius" in params:
        passed = report.radius <= float(params["max_radius"])
    measured = report.to_dict()
    measured["excluded_reasons"] = sorted({entry["reason"] for entry in report.excluded})
    return CheckResult(passed=bool(passed), measured=measured, frames={"sandwich": report.table})


def check_scaling(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """compound_ratio_series(c nu, t / c) reproduces compound_ratio_series(nu, t)."""
    model = _require(model)
    t = float(params.get("t", 1.0))
    theta = _theta(model, params)
    y = _y(model, params)
    grid = _grid(model, params, context)
    reference = compound_ratio_series(model, t, theta, y, s_list=params.get("s_list"), grid=grid)
    limit = tolerance if tolerance is not None else context.tolerance(SCALING_TOLERANCE)
    rows = []
    for c in params.get("factors", [0.5, 2.0]):
        c = float(c)
        scaled = compound_ratio_series(model.scaled(c), t / c, theta, y, s_list=reference.s, grid=grid)
        both = reference.valid & scaled.valid
        error = float(np.max(np.abs(scaled.ratios[both] / reference.ratios[both] - 1.0))) if both.any() else np.inf
        rows.append({"c": c, "points": int(both.sum()), "max_error": error})
    frame = pd.DataFrame(rows)
    worst = float(frame["max_error"].max())
    return CheckResult(passed=worst <= limit, measured={"max_error": worst}, frames={"scaling": frame})


def check_limit_identity(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """predicted_limit(y) / predicted_limit(0) = e^{kappa <theta, y>} (and = 1 when kappa = 0)."""
    model = _require(model)
    t = float(params.get("t", 1.0))
    limit = tolerance if tolerance is not None else context.tolerance(IDENTITY_TOLERANCE)
    thetas = (
        [unit(as_vector(theta, model.d), model.d) for theta in params["directions"]]
        if "directions" in params
        else list(default_directions(model))
    )
    rows = []
    for theta in thetas:
        base = predicted_limit(model, t, theta)
        for y in params.get("shifts", [[0.5] * model.d, [-0.5] * model.d]):
            y = as_vector(y, model.d)
            expected = float(np.exp(model.kappa * float(theta @ y)))
            ratio = predicted_limit(model, t, theta, y) / base
            error = abs(ratio / expected - 1.0)
            if model.kappa == 0:
                error = max(error, abs(base - 1.0))
            rows.append({"theta": theta.tolist(), "y": y.tolist(), "ratio": ratio, "expected": expected, "error": error})
    frame = pd.DataFrame(rows)
    worst = float(frame["error"].max())
    return CheckResult(passed=worst <= limit, measured={"max_error": worst}, frames={"limit_identity": frame})
