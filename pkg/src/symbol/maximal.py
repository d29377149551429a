"""The maximal function Psi, its generalized inverse, h(t) and the drift b_r."""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from ..core.exceptions import NumericalException, OutOfRange
from ..models.levy_model import LevyModel, first_moment, tail_mass
from ..models.sphere import sphere_quadrature
from .closed_forms import _angle_tables, stable_constants
from .exponent import phi

logger = logging.getLogger(__name__)

TABLE_RADII = np.geomspace(1e-3, 1e3, 97)
TABLE_DIRECTIONS = {1: 1, 2: 16, 3: 32}


@dataclass(frozen=True)
class PsiTable:
    """Nondecreasing table r -> Psi(r) with monotone log-log interpolation.

    Below the table the first segment is extrapolated as a power law; above
    it the table saturates for finite measures and extends the last segment
    as a power law otherwise.
    """

    radii: np.ndarray
    values: np.ndarray
    finite: bool = False

    def __post_init__(self):
        if np.any(np.diff(self.radii) <= 0):
            raise NumericalException("PsiTable radii must be increasing")
        if np.any(np.diff(self.values) < 0):
            raise NumericalException("PsiTable values must be nondecreasing")

    @property
    def _log_interp(self) -> PchipInterpolator:
        return PchipInterpolator(np.log(self.radii), np.log(self.values))

    def _slope(self, i: int, j: int) -> float:
        return float(
            np.log(self.values[j] / self.values[i]) / np.log(self.radii[j] / self.radii[i])
        )

    @property
    def sup(self) -> float:
        """Psi(infinity) for finite measures, infinity otherwise."""
        return float(self.values[-1]) if self.finite else np.inf

    def __call__(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        log_r = np.log(np.clip(r, 1e-300, None))
        lo, hi = np.log(self.radii[0]), np.log(self.radii[-1])
        inside = self._log_interp(np.clip(log_r, lo, hi))
        below = np.log(self.values[0]) + self._slope(0, 1) * (log_r - lo)
        if self.finite:
            above = np.full_like(log_r, np.log(self.values[-1]))
        else:
            above = np.log(self.values[-1]) + self._slope(-2, -1) * (log_r - hi)
        out = np.where(log_r < lo, below, np.where(log_r > hi, above, inside))
        return np.where(r > 0, np.exp(out), 0.0)

    def doubling_ratios(self) -> np.ndarray:
        """Psi(2r)/Psi(r) on the table radii."""
        return self(2.0 * self.radii) / self.values

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"r": self.radii, "Psi": self.values})


def _homogeneous_constant(model: LevyModel) -> float:
    """sup_{|xi|=1} Re Phi(xi) for a stable model."""
    c_alpha, _ = stable_constants(model.alpha)
    if model.d == 2 and model.g.kind in ("constant", "quadrant"):
        tables = _angle_tables(model.g.values, model.g.kind, model.alpha)
        return float(c_alpha * tables[0].max())
    if model.d == 1:
        return float(phi(model, np.array([1.0])).real[0])
    nodes, _ = sphere_quadrature(model.d, 256)
    return float(phi(model, nodes).real.max())


def _closed_radial(model: LevyModel) -> bool:
    return model.family in ("stable", "relativistic") and model.d <= 3


@lru_cache(maxsize=64)
def psi_table(model: LevyModel, radii: Optional[tuple] = None) -> PsiTable:
    """Tabulate Psi over `radii` (default 1e-3..1e3) for any model with jumps.

    Re Phi is evaluated on sampled directions and the running maximum over
    the radii is taken, which is the sup over the ball up to the ray sampling.
    """
    radii = np.asarray(radii if radii is not None else TABLE_RADII, dtype=float)
    if _closed_radial(model):
        values = psi_max(model, radii)
    else:
        n_dirs = TABLE_DIRECTIONS[model.d]
        if model.d == 1:
            directions = np.array([[1.0]])
        else:
            directions, _ = sphere_quadrature(model.d, n_dirs)
        real = np.zeros((len(directions), len(radii)))
        for k, theta in enumerate(directions):
            real[k] = phi(model, radii[:, None] * theta[None, :]).real
        values = np.maximum.accumulate(real.max(axis=0))
        logger.debug(f"Tabulated Psi for {model.family} on {len(radii)} radii")
    values = np.maximum(values, np.finfo(float).tiny)
    return PsiTable(radii=radii, values=np.maximum.accumulate(values), finite=model.finite)


def psi_max(model: LevyModel, r: np.ndarray) -> np.ndarray:
    """Psi(r) = sup_{|xi| <= r} Re Phi(xi).

    Stable models are homogeneous and relativistic symbols radial increasing,
    so both use closed forms; other models interpolate their PsiTable.

    Args:
        model: Levy model with jumps
        r: Radii > 0

    Returns:
        Psi(r) with the shape of r
    """
    r = np.asarray(r, dtype=float)
    if model.family == "stable" and model.d <= 3:
        return _homogeneous_constant(model) * r**model.alpha
    if model.family == "relativistic":
        m, alpha = model.params["m"], model.alpha
        return m * np.expm1(0.5 * alpha * np.log1p(r**2 / m ** (2.0 / alpha)))
    return psi_table(model)(r)


def psi_inverse(model: LevyModel, s: float) -> float:
    """Generalized right inverse Psi_-(s) = sup{r : Psi(r) = s}.

    Raises:
        OutOfRange: If s <= 0 or s >= Psi(infinity)
    """
    if s <= 0:
        raise OutOfRange(f"Psi_- is defined for s > 0, got {s}")
    if model.family == "stable" and model.d <= 3:
        return float((s / _homogeneous_constant(model)) ** (1.0 / model.alpha))
    if model.family == "relativistic":
        m, alpha = model.params["m"], model.alpha
        return float(np.sqrt((s + m) ** (2.0 / alpha) - m ** (2.0 / alpha)))

    table = psi_table(model)
    if s >= table.sup:
        raise OutOfRange(f"s={s} is not below Psi(infinity)={table.sup}")
    lo, hi = table.radii[0], table.radii[-1]
    while table(lo) > s:
        lo /= 2.0
    while table(hi) < s:
        hi *= 2.0
    root = brentq(lambda r: float(table(r)) - s, lo, hi, xtol=1e-14, rtol=1e-13)
    # move to the right end of a flat stretch
    step = root * 1e-6
    while table(root + step) <= s * (1 + 1e-13) and root + step < hi:
        root += step
        step *= 2.0
    return float(root)


def h_of_t(model: LevyModel, t: float) -> float:
    """h(t) = 1/Psi_-(1/t).

    Raises:
        OutOfRange: If 1/t is not below Psi(infinity)
    """
    return 1.0 / psi_inverse(model, 1.0 / t)


def drift_correction(model: LevyModel, r: float) -> np.ndarray:
    """b_r: b - int_{r<=|y|<1} y nu for r < 1, b for r = 1, b + int_{1<=|y|<r} y nu for r > 1."""
    if r == 1.0 or model.symmetric or not model.has_jumps:
        return model.b.copy()
    if r < 1.0:
        return model.b - first_moment(model, r, 1.0)
    return model.b + first_moment(model, 1.0, r)


def tail_psi_ratio(model: LevyModel, r_grid: Sequence[float]) -> pd.DataFrame:
    """|nu_r| / Psi(1/r) over r_grid; stays bounded for infinite-mass families."""
    rows = []
    for r in r_grid:
        mass = tail_mass(model, r)
        psi_value = float(psi_max(model, 1.0 / r))
        rows.append({"r": float(r), "tail_mass": mass, "ratio": mass / psi_value})
    return pd.DataFrame(rows)
