"""Diagnostics for the density regularity condition D."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from ..core.exceptions import ConfigException, OutOfRange
from ..models.levy_model import LevyModel
from ..models.sphere import sphere_quadrature
from .exponent import phi
from .maximal import psi_inverse

logger = logging.getLogger(__name__)

POINTS_PER_DECADE = 32
MAX_SCALED_RADIUS = 1e8
D_SPHERE_NODES = {1: 2, 2: 32, 3: 64}


@dataclass
class ConditionDReport:
    """Ratios int e^{-t Re Phi}|xi| dxi / Psi_-(1/t)^{d+1} and the sufficient tests."""

    status: str
    table: pd.DataFrame = field(default_factory=pd.DataFrame)
    bounded: Optional[bool] = None
    hartman_wintner: Dict[str, float] = field(default_factory=dict)
    eta_regular: Optional[bool] = None

    @property
    def max_ratio(self) -> float:
        return float(self.table["ratio"].max()) if len(self.table) else np.nan


def _scaled_integral(model: LevyModel, t: float, scale: float) -> float:
    """int e^{-t Re Phi(xi)} |xi| dxi in polar form with radii scale*u."""
    nodes, weights = sphere_quadrature(model.d, D_SPHERE_NODES[model.d])
    total = 0.0
    for theta, weight in zip(nodes, weights):
        u_max = 10.0
        while True:
            u = np.geomspace(1e-4, u_max, int(POINTS_PER_DECADE * np.log10(u_max / 1e-4)) + 1)
            rho = scale * u
            real = phi(model, rho[:, None] * theta[None, :]).real
            integrand = np.exp(-t * real) * rho ** (model.d + 1)
            if integrand[-1] <= 1e-14 * integrand.max():
                break
            u_max *= 10.0
            if u_max > MAX_SCALED_RADIUS:
                return np.inf
        total += weight * trapezoid(integrand, np.log(rho))
    return total


def hartman_wintner(model: LevyModel, radii: Sequence[float] = (1e2, 1e3, 1e4)) -> Dict[str, float]:
    """min over sampled directions of Re Phi(xi)/log|xi| at growing radii."""
    nodes, _ = sphere_quadrature(model.d, D_SPHERE_NODES[model.d])
    out = {}
    for r in radii:
        real = phi(model, r * nodes).real
        out[f"{r:g}"] = float(real.min() / np.log(r))
    return out


def eta_regularity(model: LevyModel) -> Optional[bool]:
    """d < beta1 <= beta2 < d+2 for power-law eta, where beta1 = beta2 = the eta exponent."""
    if model.profile is None:
        return None
    exponent = model.profile.eta_exponent
    return bool(model.d < exponent < model.d + 2)


def check_condition_D(model: LevyModel, t_grid: Sequence[float]) -> ConditionDReport:
    """Tabulate int e^{-t Re Phi(xi)}|xi| dxi / (Psi_-(1/t))^{d+1} over t_grid.

    A model without jumps is reported as inapplicable; a finite Levy measure
    without Gaussian part, or a radial integral that never decays, as
    diverging. Unbounded growth across the grid is flagged, not raised.

    Raises:
        ConfigException: If t_grid is empty or not positive
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or np.any(t_grid <= 0):
        raise ConfigException("t_grid must be nonempty with positive times")
    if not model.has_jumps:
        logger.info("Condition D is inapplicable: the model has no jump part")
        return ConditionDReport(status="inapplicable")
    if model.finite:
        logger.warning("Condition D fails: Re Phi is bounded for a finite Levy measure")
        return ConditionDReport(status="diverges", eta_regular=eta_regularity(model))

    rows = []
    status = "ok"
    for t in t_grid:
        try:
            scale = psi_inverse(model, 1.0 / t)
        except OutOfRange as e:
            logger.warning(f"Condition D skipped t={t}: {e}")
            continue
        integral = _scaled_integral(model, t, scale)
        if not np.isfinite(integral):
            status = "diverges"
        rows.append(
            {"t": float(t), "integral": integral, "scale": scale, "ratio": integral / scale ** (model.d + 1)}
        )
    table = pd.DataFrame(rows)
    ratios = table["ratio"].to_numpy() if len(table) else np.array([])
    bounded = bool(np.all(np.isfinite(ratios)) and ratios.size and ratios.max() <= 10.0 * ratios.min())
    if not bounded:
        logger.warning("Condition D ratio grows across the time grid")
    return ConditionDReport(
        status=status,
        table=table,
        bounded=bounded,
        hartman_wintner=hartman_wintner(model),
        eta_regular=eta_regularity(model),
    )
