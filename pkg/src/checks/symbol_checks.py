"""Checks on the symbol: Psi and its inverse, doubling, psi~ and condition D."""

import logging
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ..core.exceptions import ConfigException, DivergentMoment
from ..models.levy_model import LevyModel
from ..symbol.condition_d import check_condition_D
from ..symbol.maximal import TABLE_RADII, h_of_t, psi_inverse, psi_max, psi_table
from ..symbol.moments import exp_moment_exponent
from .base import CheckContext, CheckResult, as_vector

logger = logging.getLogger(__name__)

INVERSE_TOLERANCE = 1e-8
DOUBLING_TOLERANCE = 1e-2
MOMENT_TOLERANCE = 1e-6


def _require(model: Optional[LevyModel]) -> LevyModel:
    if model is None or not model.has_jumps:
        raise ConfigException("This check needs a model with a jump part")
    return model


def check_psi(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Psi table, h(t) table and the round trip Psi(Psi_-(s)) = s."""
    model = _require(model)
    levels = np.asarray(params.get("s", [0.01, 0.1, 1.0, 10.0, 100.0]), dtype=float)
    times = np.asarray(params.get("times", [0.1, 0.5, 1.0, 2.0]), dtype=float)
    rows = []
    for s in levels:
        radius = psi_inverse(model, float(s))
        back = float(psi_max(model, radius))
        rows.append({"s": s, "psi_inverse": radius, "psi": back, "error": abs(back / s - 1.0)})
    inverse = pd.DataFrame(rows)
    scales = pd.DataFrame({"t": times, "h": [h_of_t(model, float(t)) for t in times]})
    worst = float(inverse["error"].max())
    limit = tolerance if tolerance is not None else context.tolerance(INVERSE_TOLERANCE)
    return CheckResult(
        passed=worst <= limit,
        measured={"max_inverse_error": worst},
        frames={"psi_table": psi_table(model).to_frame(), "psi_inverse": inverse, "h_of_t": scales},
    )


def check_doubling(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Psi(2r)/Psi(r) is finite and agrees between the default and a refined radius table."""
    model = _require(model)
    coarse = psi_table(model)
    fine = psi_table(model, tuple(np.geomspace(TABLE_RADII[0], TABLE_RADII[-1], 2 * len(TABLE_RADII) - 1)))
    ratios = coarse.doubling_ratios()
    refined = fine(2.0 * coarse.radii) / fine(coarse.radii)
    drift = float(np.max(np.abs(refined / ratios - 1.0)))
    limit = tolerance if tolerance is not None else context.tolerance(DOUBLING_TOLERANCE)
    finite = bool(np.all(np.isfinite(ratios)))
    return CheckResult(
        passed=finite and drift <= limit,
        measured={"max_doubling": float(ratios.max()), "grid_drift": drift},
        frames={"doubling": pd.DataFrame({"r": coarse.radii, "ratio": ratios, "refined": refined})},
    )


def check_moment(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """psi~(kappa theta) by quadrature against an expected value; divergence fails the check."""
    model = _require(model)
    theta = as_vector(params.get("theta", [1.0] * model.d), model.d)
    theta = theta / np.linalg.norm(theta)
    zeta = as_vector(params["zeta"], model.d) if "zeta" in params else model.kappa * theta
    expected = params.get("expected")
    try:
        value = exp_moment_exponent(model, zeta)
    except DivergentMoment as e:
        logger.info(f"psi~({zeta.tolist()}) diverges: {e}")
        return CheckResult(passed=False, measured={"zeta": zeta.tolist(), "diverged": True, "reason": str(e)})
    limit = tolerance if tolerance is not None else context.tolerance(MOMENT_TOLERANCE)
    error = None if expected is None else abs(value - float(expected))
    return CheckResult(
        passed=error is None or error <= limit,
        measured={"zeta": zeta.tolist(), "value": value, "expected": expected, "error": error, "diverged": False},
    )


def check_condition_d(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Condition D ratios over a time grid; passes when they stay bounded."""
    if model is None:
        raise ConfigException("This check needs a model section")
    report = check_condition_D(model, params.get("times", [0.01, 0.1, 1.0, 10.0]))
    return CheckResult(
        passed=report.status == "ok" and bool(report.bounded),
        measured={
            "status": report.status,
            "bounded": report.bounded,
            "max_ratio": report.max_ratio,
            "hartman_wintner": report.hartman_wintner,
            "eta_regular": report.eta_regular,
        },
        frames={"condition_d": report.table},
    )
