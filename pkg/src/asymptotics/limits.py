"""Predicted limits of the far-field ratios and default probe layouts."""

import logging
from typing import Optional, Sequence

import numpy as np

from ..core.exceptions import ConfigException
from ..kernel.oracle import oracle_kind
from ..models.levy_model import LevyModel
from ..models.sphere import sample_sphere
from ..symbol.maximal import h_of_t
from ..symbol.moments import exp_moment_exponent, relativistic_moment_exponent

logger = logging.getLogger(__name__)

PROBE_MULTIPLES = (8.0, 16.0, 32.0, 64.0, 128.0)
DYNAMIC_RANGE = 60.0
DEFAULT_DIRECTIONS = 32


def unit(theta: np.ndarray, d: int) -> np.ndarray:
    """theta as a unit vector of R^d.

    Raises:
        ConfigException: If theta has the wrong shape or vanishes
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float)).reshape(-1)
    if theta.shape != (d,):
        raise ConfigException(f"Direction must have {d} components, got {theta.tolist()}")
    norm = np.linalg.norm(theta)
    if norm == 0:
        raise ConfigException("Direction must be nonzero")
    return theta / norm


def moment_exponent(model: LevyModel, zeta: np.ndarray) -> float:
    """psi~(zeta), in closed form for the relativistic family."""
    if model.family == "relativistic":
        return relativistic_moment_exponent(model, zeta)
    return exp_moment_exponent(model, zeta)


def predicted_limit(model: LevyModel, t: float, theta: np.ndarray, y: Optional[np.ndarray] = None) -> float:
    """Limit of p_t(s theta - y) / (t nu(s theta)) as s -> infinity.

    Equals 1 for kappa = 0 and e^{-t psi~(kappa theta) + kappa <theta, y>}
    otherwise.

    Raises:
        DivergentMoment: If psi~(kappa theta) does not exist
    """
    theta = unit(theta, model.d)
    y = np.zeros(model.d) if y is None else np.atleast_1d(np.asarray(y, dtype=float))
    if model.kappa == 0:
        return 1.0
    zeta = model.kappa * theta
    return float(np.exp(-t * moment_exponent(model, zeta) + float(zeta @ y)))


def probe_radii(model: LevyModel, base: float, multiples: Sequence[float] = PROBE_MULTIPLES) -> np.ndarray:
    """s in {8, ..., 128} max(1, base), capped at 60/kappa for exponential tails.

    Models with a closed-form kernel are not capped. When fewer than four
    radii survive the cap, five geometric radii up to the cap are used.
    """
    radii = np.asarray(multiples, dtype=float) * max(1.0, base)
    if model.kappa > 0 and not oracle_kind(model):
        cap = DYNAMIC_RANGE / model.kappa
        radii = radii[radii <= cap]
        if len(radii) < 4:
            radii = np.geomspace(cap / 16.0, cap, 5)
            logger.debug(f"Probe radii capped at {cap:.4g} by the exponential tail")
    return radii


def default_probe_radii(model: LevyModel, t: float) -> np.ndarray:
    """probe_radii scaled by h(t)."""
    return probe_radii(model, h_of_t(model, t) if model.has_jumps else 1.0)


def in_cone(model: LevyModel, theta: np.ndarray) -> bool:
    """True when theta carries mass of nu and keeps away from jumps of g."""
    theta = unit(theta, model.d)
    if model.separable:
        if float(model.g(theta[None, :])[0]) <= 0:
            return False
        return not bool(model.g.near_discontinuity(theta[None, :])[0])
    return bool(model.log_nu(2.0 * theta[None, :])[0] > -np.inf)


def default_directions(model: LevyModel, n: int = DEFAULT_DIRECTIONS) -> np.ndarray:
    """n uniform directions intersected with the cone of nu (both signs in d = 1)."""
    if model.d == 1:
        candidates = np.array([[1.0], [-1.0]])
    elif model.d == 2:
        angles = (np.arange(n) + 0.5) * 2.0 * np.pi / n
        candidates = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        candidates = sample_sphere(model.d, n, seed=11)
    kept = np.array([theta for theta in candidates if in_cone(model, theta)])
    if len(kept) < len(candidates):
        logger.debug(f"{len(candidates) - len(kept)} of {len(candidates)} directions lie outside E")
    return kept
