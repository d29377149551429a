"""Ratio series R(s) and their convergence verdicts."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..core.exceptions import ConfigException, NumericalException

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-2
TREND_POINTS = 3
MIN_VALID_POINTS = 4


@dataclass
class RatioSeries:
    """Probed ratios R(s) along one direction.

    Points the evaluator refused carry NaN ratios; the reason is kept in
    `refused`. `limit` is the predicted limit, or None when only
    self-convergence can be judged.
    """

    kind: str
    s: np.ndarray
    ratios: np.ndarray
    accuracy: np.ndarray
    limit: Optional[float]
    params: Dict[str, Any] = field(default_factory=dict)
    refused: List[Dict[str, Any]] = field(default_factory=list)

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=float)
        self.ratios = np.asarray(self.ratios, dtype=float)
        self.accuracy = np.asarray(self.accuracy, dtype=float)
        if not (self.s.shape == self.ratios.shape == self.accuracy.shape):
            raise ConfigException("Ratio series arrays must have matching shapes")
        if np.any(np.diff(self.s) <= 0):
            raise ConfigException("Probe radii must be strictly increasing")

    @property
    def valid(self) -> np.ndarray:
        return np.isfinite(self.ratios)

    def deviations(self) -> np.ndarray:
        """|R(s)/limit - 1| on the valid points."""
        if self.limit is None:
            raise ConfigException(f"Series {self.kind} has no predicted limit")
        return np.abs(self.ratios[self.valid] / self.limit - 1.0)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            {
                "s": self.s,
                "ratio": self.ratios,
                "accuracy": self.accuracy,
                "limit": np.nan if self.limit is None else self.limit,
                "status": np.where(self.valid, "ok", "refused"),
            }
        )
        frame.attrs.update(self.params)
        return frame


@dataclass
class ConvergenceVerdict:
    """Outcome of diagnose(): final deviation, trend and empirical rate."""

    mode: str
    final_deviation: float
    trend_ok: bool
    tolerance: float
    slope: Optional[float]
    n_points: int
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.final_deviation <= self.tolerance and self.trend_ok)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "passed": self.passed,
            "final_deviation": float(self.final_deviation),
            "trend_ok": bool(self.trend_ok),
            "tolerance": float(self.tolerance),
            "slope": None if self.slope is None else float(self.slope),
            "n_points": int(self.n_points),
            "note": self.note,
        }


def _nonincreasing(values: np.ndarray, slack: np.ndarray) -> bool:
    tail = values[-TREND_POINTS:]
    allowance = slack[-TREND_POINTS:]
    return bool(np.all(np.diff(tail) <= allowance[1:] + 1e-15))


def _slope(s: np.ndarray, deviations: np.ndarray) -> Optional[float]:
    positive = deviations > 0
    if positive.sum() < 2:
        return None
    coefficients = np.polyfit(np.log(s[positive]), np.log(deviations[positive]), 1)
    return float(coefficients[0])


def diagnose(series: RatioSeries, tolerance: float = DEFAULT_TOLERANCE) -> ConvergenceVerdict:
    """Judge whether R(s) approaches its limit (or converges at all).

    With a predicted limit the deviations |R/limit - 1| must end below
    `tolerance` and be nonincreasing over the last three probes (up to the
    reported accuracy of each point). Without a limit the same test runs on
    the successive increments |R(s_{i+1})/R(s_i) - 1|. The slope of
    log(deviation) against log(s) is reported as the empirical rate.

    Args:
        series: Probed ratios
        tolerance: Allowed final deviation

    Returns:
        ConvergenceVerdict

    Raises:
        NumericalException: If fewer than four probes are valid
    """
    valid = series.valid
    n_valid = int(valid.sum())
    if n_valid < MIN_VALID_POINTS:
        raise NumericalException(
            f"Series {series.kind} has {n_valid} valid points; at least {MIN_VALID_POINTS} are needed"
        )
    s = series.s[valid]
    accuracy = series.accuracy[valid]
    if series.limit is not None:
        mode = "limit"
        deviations = series.deviations()
        slack = accuracy
    else:
        mode = "self"
        ratios = series.ratios[valid]
        deviations = np.abs(ratios[1:] / ratios[:-1] - 1.0)
        slack = accuracy[1:] + accuracy[:-1]
        s = s[1:]

    slope = _slope(s, deviations)
    verdict = ConvergenceVerdict(
        mode=mode,
        final_deviation=float(deviations[-1]),
        trend_ok=_nonincreasing(deviations, slack),
        tolerance=tolerance,
        slope=slope,
        n_points=n_valid,
        note="" if slope is not None else "deviations vanish; rate indeterminate",
    )
    logger.info(
        f"Series {series.kind}: deviation {verdict.final_deviation:.3e} "
        f"(tolerance {tolerance:g}, {mode}) -> {'pass' if verdict.passed else 'fail'}"
    )
    return verdict
