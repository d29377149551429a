"""Estimates of K(r), the normalized second convolution of the tail profile f."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..core.exceptions import ConfigException
from ..models.levy_model import LevyModel
from ..models.profile import RadialProfile
from .pairs import radial_pair_integral

logger = logging.getLogger(__name__)

X_POINTS = 64
X_MIN = 1.0 + 1e-3
DEFAULT_X_MAX_FACTOR = 2048.0
POINTS_PER_DOUBLING = 8
SATURATION = 0.01
GROWTH_PERSISTENCE = 0.8
MAX_DOUBLINGS = 8


@dataclass
class KEstimate:
    """Lower-bound estimate of K(r) with the sup table it came from."""

    r: float
    value: float
    diverged: bool
    x_max: float
    table: pd.DataFrame

    @property
    def argmax(self) -> float:
        return float(self.table.loc[self.table["ratio"].idxmax(), "x"])


def k_ratio(profile: RadialProfile, r: float, x: float) -> float:
    """int_{|x-y|>r, |y|>r} f(|x-y|) f(|y|) dy / f(|x|) at one |x|."""
    log_fx = float(profile.log_f(np.array([x]))[0])
    return radial_pair_integral(profile.log_f, profile.d, x, r, log_scale=log_fx)


def k_function(
    model: LevyModel,
    r: float,
    x_max: Optional[float] = None,
    x_grid: Optional[Sequence[float]] = None,
) -> KEstimate:
    """Estimate K(r) = sup_{|x|>1} of the normalized pair integral of the profile.

    The sup is taken over 64 log-spaced |x| in (1 + 1e-3, x_max] and extended
    by doubling x_max. It is saturated once a doubling changes it by less
    than 1%. Growth of more than 1% in two successive doublings, with the
    second increment at least 0.8 of the first, is reported as divergence.

    Args:
        model: Model carrying a dominating profile
        r: Radius, r >= 1
        x_max: Largest |x| of the initial grid (2048 r by default)
        x_grid: Explicit initial |x| grid; overrides x_max

    Returns:
        KEstimate; divergence is a flag, never an exception

    Raises:
        ConfigException: If r < 1 or the model has no profile
    """
    if r < 1:
        raise ConfigException(f"K(r) is defined for r >= 1, got {r}")
    if model.profile is None:
        raise ConfigException("K(r) needs the dominating profile f of the model")
    profile = model.profile
    if x_grid is not None:
        xs = np.sort(np.asarray(x_grid, dtype=float))
        x_max = float(xs[-1])
    else:
        x_max = float(x_max if x_max is not None else DEFAULT_X_MAX_FACTOR * r)
        xs = np.geomspace(X_MIN, x_max, X_POINTS)

    rows = [{"x": float(x), "ratio": k_ratio(profile, r, x)} for x in xs]
    sups = [max(row["ratio"] for row in rows)]
    diverged = False
    saturated = False
    for _ in range(MAX_DOUBLINGS):
        new = np.geomspace(x_max, 2.0 * x_max, POINTS_PER_DOUBLING + 1)[1:]
        rows.extend({"x": float(x), "ratio": k_ratio(profile, r, x)} for x in new)
        x_max *= 2.0
        sups.append(max(sups[-1], max(row["ratio"] for row in rows[-POINTS_PER_DOUBLING:])))
        if sups[-1] <= sups[-2] * (1.0 + SATURATION):
            saturated = True
            break
        if len(sups) >= 3:
            first = sups[-2] - sups[-3]
            second = sups[-1] - sups[-2]
            grew_twice = sups[-2] > sups[-3] * (1.0 + SATURATION)
            if grew_twice and first > 0 and second / first >= GROWTH_PERSISTENCE:
                diverged = True
                break
    if not saturated and not diverged:
        logger.warning(f"K({r}) did not saturate up to |x|={x_max:.4g}; reporting divergence")
        diverged = True

    table = pd.DataFrame(rows)
    estimate = KEstimate(r=float(r), value=float(sups[-1]), diverged=diverged, x_max=x_max, table=table)
    logger.debug(
        f"K({r}) estimate {estimate.value:.6g} (x_max={x_max:.4g}, diverged={diverged})"
    )
    return estimate


def k_table(model: LevyModel, r_grid: Sequence[float], x_max: Optional[float] = None) -> pd.DataFrame:
    """K(r) estimates over r_grid with a common x_max, plus the log-log slope fit."""
    common = x_max if x_max is not None else DEFAULT_X_MAX_FACTOR * max(r_grid)
    estimates = [k_function(model, r, x_max=common) for r in r_grid]
    frame = pd.DataFrame(
        {
            "r": [e.r for e in estimates],
            "K": [e.value for e in estimates],
            "diverged": [e.diverged for e in estimates],
            "x_max": [e.x_max for e in estimates],
        }
    )
    frame.attrs["slope"] = k_slope(frame)
    return frame


def k_slope(frame: pd.DataFrame) -> float:
    """Least-squares slope of log K against log r over the finite estimates."""
    finite = frame[~frame["diverged"] & (frame["K"] > 0)]
    if len(finite) < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(finite["r"]), np.log(finite["K"]), 1)
    return float(slope)
