"""Checks on the Levy model itself: profile classes and conditions B and C."""

import logging
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ..convolve.kfunction import k_slope, k_table
from ..core.exceptions import ConfigException
from ..models.diagnostics import check_condition_B, check_condition_C
from ..models.levy_model import LevyModel
from ..models.profile import Verdict, classify_profile
from .base import CheckContext, CheckResult

logger = logging.getLogger(__name__)

K_RADII = (2.0, 4.0, 8.0, 16.0, 32.0, 64.0)
K_SLOPE_TOLERANCE = 0.1


def _require(model: Optional[LevyModel]) -> LevyModel:
    if model is None:
        raise ConfigException("This check needs a model section")
    return model


def check_classify(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Classify (m, beta, delta, d) rows; rows with an `expected` verdict must match it."""
    rows = params.get("table")
    if rows is None:
        rows = [{key: params[key] for key in ("m", "beta", "delta", "d") if key in params}]
        if "expected" in params:
            rows[0]["expected"] = params["expected"]
    records = []
    for row in rows:
        try:
            result = classify_profile(float(row["m"]), float(row["beta"]), float(row["delta"]), int(row["d"]))
        except KeyError as e:
            raise ConfigException(f"Classification row {row} misses key {e}")
        expected = row.get("expected")
        records.append(
            {
                "m": result.m,
                "beta": result.beta,
                "delta": result.delta,
                "d": result.d,
                "verdict": result.verdict.value,
                "expected": expected,
                "match": expected is None or Verdict(expected) is result.verdict,
            }
        )
    frame = pd.DataFrame(records)
    mismatches = int((~frame["match"]).sum())
    verdicts = frame["verdict"].tolist()
    return CheckResult(
        passed=mismatches == 0,
        measured={"rows": len(frame), "mismatches": mismatches, "verdicts": verdicts},
        frames={"classification": frame},
    )


def check_condition_c(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Deviation of nu(s theta - y)/nu(s theta) from e^{kappa <theta, y>} at the last radius."""
    model = _require(model)
    from ..asymptotics.limits import default_directions

    thetas = np.asarray(params["theta"], dtype=float) if "theta" in params else default_directions(model)
    ys = np.asarray(params.get("y", [[0.5] * model.d, [-0.5] * model.d]), dtype=float)
    s_grid = params.get("s_grid", [2.0, 5.0, 10.0, 20.0, 50.0])
    report = check_condition_C(model, thetas, ys, s_grid)
    final = float(report.deviations[-1])
    limit = tolerance if tolerance is not None else context.tolerance(0.05)
    return CheckResult(
        passed=final <= limit,
        measured={"final_deviation": final, "excluded": len(report.excluded)},
        frames={"condition_c": report.table},
    )


def check_condition_b(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """Lower regularity proxy and K(r) samples; fails when K is flagged infinite."""
    model = _require(model)
    report = check_condition_B(
        model,
        params.get("r_grid", [0.01, 0.05, 0.1, 0.5, 1.0]),
        k_grid=params.get("k_grid", [2.0, 8.0, 32.0]),
    )
    diverged = "K_INFINITE" in report.flags
    return CheckResult(
        passed=not diverged and report.liminf_proxy > 0,
        measured={
            "liminf_proxy": report.liminf_proxy,
            "k_decreasing": report.k_decreasing,
            "flags": sorted(report.flags),
        },
        frames={"low_regularity": report.low_regularity, "k_samples": report.k_table},
    )


def check_kfunction(
    model: Optional[LevyModel], params: Dict[str, Any], tolerance: Optional[float], context: CheckContext
) -> CheckResult:
    """K(r) over r in [2, 64]; the log-log slope must match `expected_slope` when given."""
    model = _require(model)
    frame = k_table(model, params.get("r_grid", K_RADII), params.get("x_max"))
    diverged = bool(frame["diverged"].any())
    slope = float(frame.attrs.get("slope", k_slope(frame)))
    expected = params.get("expected_slope")
    limit = tolerance if tolerance is not None else context.tolerance(K_SLOPE_TOLERANCE)
    slope_ok = expected is None or abs(slope - float(expected)) <= limit
    if diverged:
        logger.warning(f"K(r) diverges for {model.family}")
    return CheckResult(
        passed=slope_ok and not diverged,
        measured={"slope": slope, "expected_slope": expected, "diverged": diverged},
        frames={"kfunction": frame},
    )
