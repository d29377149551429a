"""Numerical diagnostics for conditions B and C on a Levy model."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Set

import numpy as np
import pandas as pd

from ..core.exceptions import ConfigException
from .levy_model import LevyModel, as_points, tail_mass

logger = logging.getLogger(__name__)


@dataclass
class ConditionCReport:
    """Per-radius maximal deviation of nu(s theta - y)/nu(s theta) from e^{kappa <theta, y>}."""

    table: pd.DataFrame
    excluded: List[dict] = field(default_factory=list)

    @property
    def deviations(self) -> np.ndarray:
        return self.table["max_deviation"].to_numpy()


def check_condition_C(
    model: LevyModel,
    theta_samples: np.ndarray,
    y_samples: np.ndarray,
    s_grid: Sequence[float],
) -> ConditionCReport:
    """Tabulate max_{theta, y} |nu(s theta - y)/nu(s theta) - e^{kappa <theta, y>}| per s.

    Directions where nu(s theta) vanishes, or which lie in the angular buffer
    of a declared discontinuity of g, are reported as excluded and skipped.

    Raises:
        ConfigException: If s_grid is not increasing or starts below 2
    """
    s_grid = np.asarray(s_grid, dtype=float)
    if s_grid.size == 0 or np.any(np.diff(s_grid) <= 0) or s_grid[0] < 2:
        raise ConfigException("s_grid must be increasing with min >= 2")
    thetas = as_points(theta_samples, model.d)
    thetas = thetas / np.linalg.norm(thetas, axis=1, keepdims=True)
    ys = as_points(y_samples, model.d)

    excluded = []
    keep = np.ones(len(thetas), dtype=bool)
    if model.g is not None:
        near = model.g.near_discontinuity(thetas)
        for theta in thetas[near]:
            excluded.append({"theta": theta.tolist(), "reason": "discontinuity of g"})
        keep &= ~near

    rows = []
    for s in s_grid:
        log_base = model.log_nu(s * thetas)
        vanishing = keep & ~np.isfinite(log_base)
        for theta in thetas[vanishing]:
            excluded.append({"theta": theta.tolist(), "s": float(s), "reason": "nu(s theta) = 0"})
        active = keep & np.isfinite(log_base)
        worst = 0.0
        for y in ys:
            log_shift = model.log_nu(s * thetas[active] - y[None, :])
            ratio = np.exp(log_shift - log_base[active])
            target = np.exp(model.kappa * (thetas[active] @ y))
            if ratio.size:
                worst = max(worst, float(np.max(np.abs(ratio - target))))
        rows.append({"s": float(s), "max_deviation": worst, "directions": int(active.sum())})
    if excluded:
        logger.warning(f"Condition C check excluded {len(excluded)} direction samples")
    return ConditionCReport(table=pd.DataFrame(rows), excluded=excluded)


@dataclass
class ConditionBReport:
    """Lower regularity proxy and K(r) samples for condition B."""

    low_regularity: pd.DataFrame
    k_table: pd.DataFrame
    flags: Set[str] = field(default_factory=set)

    @property
    def liminf_proxy(self) -> float:
        return float(self.low_regularity["ratio"].min())

    @property
    def k_decreasing(self) -> bool:
        values = self.k_table["K"].to_numpy()
        return bool(np.all(np.diff(values) <= 1e-9 * np.abs(values[:-1])))


def check_condition_B(
    model: LevyModel,
    r_grid: Sequence[float],
    x_grid: Optional[Sequence[float]] = None,
    k_grid: Optional[Sequence[float]] = None,
) -> ConditionBReport:
    """Report nu(B(0,r)^c)/(f(r) r^d) over r_grid and K(r) samples over k_grid.

    Args:
        model: Model with a dominating profile
        r_grid: Small radii for the lower regularity proxy
        x_grid: Optional |x| grid for the sup in K(r)
        k_grid: Radii >= 1 at which K is sampled (defaults to 2, 4, ..., 64)

    Returns:
        ConditionBReport; a divergent K estimate sets the K_INFINITE flag

    Raises:
        ConfigException: If the model has no profile or a grid is empty
    """
    from ..convolve.kfunction import k_function

    if model.profile is None:
        raise ConfigException("Condition B diagnostics need a dominating profile f")
    r_grid = np.asarray(r_grid, dtype=float)
    k_grid = np.asarray(k_grid if k_grid is not None else 2.0 ** np.arange(1, 7), dtype=float)
    if r_grid.size == 0 or k_grid.size == 0:
        raise ConfigException("Condition B grids must be nonempty")

    rows = []
    for r in r_grid:
        mass = tail_mass(model, r)
        ratio = mass / (float(model.profile.f(np.array([r]))[0]) * r**model.d)
        rows.append({"r": float(r), "tail_mass": mass, "ratio": ratio})
    low = pd.DataFrame(rows)

    flags = set(model.flags)
    k_rows = []
    for r in k_grid:
        estimate = k_function(model, r, x_grid=x_grid)
        mass = tail_mass(model, r)
        k_rows.append(
            {
                "r": float(r),
                "K": estimate.value,
                "diverged": estimate.diverged,
                "K_over_tail_mass": estimate.value / mass if mass > 0 else np.inf,
            }
        )
        if estimate.diverged:
            flags.add("K_INFINITE")
    report = ConditionBReport(low_regularity=low, k_table=pd.DataFrame(k_rows), flags=flags)
    logger.info(
        f"Condition B: liminf proxy {report.liminf_proxy:.4g}, flags {sorted(flags) or 'none'}"
    )
    return report
