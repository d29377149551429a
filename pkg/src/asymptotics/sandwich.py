"""Two-sided bounds (l - eps) t nu(x) <= p_t(x - y) <= (l + eps) t nu(x) far out in a cone."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..convolve.grid import Grid
from ..core.exceptions import ConfigException
from ..kernel.far_field import DEFAULT_PROBE_RADIUS, FarFieldEvaluator
from ..models.levy_model import LevyModel
from .limits import default_directions, default_probe_radii
from .ratios import kernel_ratio_series

logger = logging.getLogger(__name__)


@dataclass
class SandwichReport:
    """Smallest probed radius beyond which the bounds hold, or None."""

    epsilon: float
    radius: Optional[float]
    table: pd.DataFrame
    excluded: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.radius is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "epsilon": self.epsilon,
            "radius": self.radius,
            "passed": self.passed,
            "points": int(len(self.table)),
            "excluded": len(self.excluded),
        }


def _holding_radius(table: pd.DataFrame) -> Optional[float]:
    if table.empty:
        return None
    failing = table.loc[~table["holds"], "s"]
    radii = np.sort(table["s"].unique())
    if failing.empty:
        return float(radii[0])
    beyond = radii[radii > failing.max()]
    return float(beyond[0]) if len(beyond) else None


def sandwich_check(
    model: LevyModel,
    t_set: Sequence[float],
    y_ball: Sequence[np.ndarray],
    directions: Optional[np.ndarray] = None,
    epsilon: float = 0.05,
    s_list: Optional[Sequence[float]] = None,
    method: str = "auto",
    grid: Optional[Grid] = None,
) -> SandwichReport:
    """Find the smallest probed R with the sandwich bounds for all |x| >= R.

    Every (t, y, theta, s) combination is probed through kernel_ratio_series.
    Points without a predicted limit or refused by the far-field evaluator
    are excluded with their reason.

    Args:
        model: Levy model
        t_set: Times
        y_ball: Shifts y
        directions: Directions in E (default: 32 uniform directions in the cone)
        epsilon: Width of the band around the limit
        s_list: Probe radii shared by all times (default: from the smallest time)
        method: Far-field method
        grid: Grid for the spectral method

    Returns:
        SandwichReport

    Raises:
        ConfigException: If epsilon <= 0 or t_set is empty
    """
    if epsilon <= 0 or not len(t_set):
        raise ConfigException("Sandwich checks need epsilon > 0 and at least one time")
    directions = default_directions(model) if directions is None else np.atleast_2d(directions)
    s = np.asarray(default_probe_radii(model, min(t_set)) if s_list is None else s_list, dtype=float)
    shifts = [np.atleast_1d(np.asarray(y, dtype=float)) for y in y_ball] or [np.zeros(model.d)]
    reach = max(DEFAULT_PROBE_RADIUS, float(s.max()) + max(float(np.linalg.norm(y)) for y in shifts))

    rows, excluded = [], []
    for t in t_set:
        evaluator = FarFieldEvaluator(model, t, method, grid, probe_radius=reach)
        for theta in directions:
            for y in shifts:
                series = kernel_ratio_series(model, t, theta, y, s, evaluator=evaluator)
                where = {"t": t, "theta": series.params["theta"], "y": y.tolist()}
                excluded.extend({**where, **point} for point in series.refused)
                if series.limit is None:
                    excluded.append({**where, "reason": series.params.get("limit_error", "no limit")})
                    continue
                for radius, ratio in zip(series.s[series.valid], series.ratios[series.valid]):
                    rows.append(
                        {
                            "t": t,
                            "theta": tuple(series.params["theta"]),
                            "y": tuple(y.tolist()),
                            "s": radius,
                            "ratio": ratio,
                            "limit": series.limit,
                            "holds": bool(abs(ratio - series.limit) <= epsilon),
                        }
                    )
    table = pd.DataFrame(rows, columns=["t", "theta", "y", "s", "ratio", "limit", "holds"])
    report = SandwichReport(epsilon=epsilon, radius=_holding_radius(table), table=table, excluded=excluded)
    if excluded:
        logger.warning(f"Sandwich check excluded {len(excluded)} points")
    logger.info(f"Sandwich bounds with eps={epsilon} hold from R={report.radius}")
    return report
