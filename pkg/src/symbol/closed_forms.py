"""Closed-form characteristic exponents of the stable and relativistic families."""

import logging
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import gamma

from ..core.exceptions import ConfigException
from ..models.levy_model import LevyModel, as_points
from ..models.sphere import sphere_quadrature

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.5772156649015329

# Angular resolution of the d=2 direction tables.
ANGLE_TABLE_SIZE = 2048
ANGLE_NODES = 8192


def stable_constants(alpha: float) -> Tuple[float, float]:
    """Return (C_alpha, S_alpha) for the one-dimensional stable integrals.

    C_alpha = int_0^inf (1 - cos r) r^{-1-alpha} dr and S_alpha is the
    regularized sine integral; S_alpha is unused at alpha = 1.
    """
    if alpha == 1:
        return np.pi / 2, 0.0
    return -gamma(-alpha) * np.cos(np.pi * alpha / 2), -gamma(-alpha) * np.sin(np.pi * alpha / 2)


def stable_odd_part(u: np.ndarray, alpha: float) -> np.ndarray:
    """J(u) = int_0^inf (sin(u r) - u r 1_{r<1}) r^{-1-alpha} dr."""
    u = np.asarray(u, dtype=float)
    if alpha == 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = u * (1.0 - EULER_GAMMA - np.log(np.abs(u)))
        return np.where(u == 0, 0.0, out)
    _, s_alpha = stable_constants(alpha)
    return np.sign(u) * np.abs(u) ** alpha * s_alpha + u / (alpha - 1)


@lru_cache(maxsize=16)
def _angle_tables(values: Tuple[float, ...], kind: str, alpha: float):
    """Angular integrals of g against |cos|^alpha, sign*|cos|^alpha, cos and cos*log|cos|."""
    from ..models.sphere import SphericalDensity

    if kind == "constant":
        g = SphericalDensity.constant(2, values[0])
    elif kind == "quadrant":
        g = SphericalDensity.quadrant(*values)
    else:
        raise ConfigException(f"No angular table for spherical density type {kind}")
    nodes, weights = sphere_quadrature(2, ANGLE_NODES)
    gw = g(nodes) * weights
    node_angles = np.arctan2(nodes[:, 1], nodes[:, 0])
    table_angles = np.arange(ANGLE_TABLE_SIZE) * 2.0 * np.pi / ANGLE_TABLE_SIZE
    tables = np.zeros((4, ANGLE_TABLE_SIZE))
    for start in range(0, ANGLE_TABLE_SIZE, 256):
        block = table_angles[start : start + 256]
        c = np.cos(node_angles[None, :] - block[:, None])
        abs_c = np.abs(c)
        with np.errstate(divide="ignore", invalid="ignore"):
            clog = np.where(abs_c > 0, c * np.log(abs_c), 0.0)
        tables[0, start : start + 256] = (abs_c**alpha) @ gw
        tables[1, start : start + 256] = (np.sign(c) * abs_c**alpha) @ gw
        tables[2, start : start + 256] = c @ gw
        tables[3, start : start + 256] = clog @ gw
    logger.debug(f"Built stable angle tables for {kind} g, alpha={alpha}")
    return tables


def _interp_periodic(table: np.ndarray, angles: np.ndarray) -> np.ndarray:
    period = 2.0 * np.pi
    position = np.mod(angles, period) / period * ANGLE_TABLE_SIZE
    lower = np.floor(position).astype(int) % ANGLE_TABLE_SIZE
    upper = (lower + 1) % ANGLE_TABLE_SIZE
    frac = position - np.floor(position)
    return (1 - frac) * table[..., lower] + frac * table[..., upper]


def stable_phi(model: LevyModel, xi: np.ndarray) -> np.ndarray:
    """Complex Phi(xi) for a stable model, shape (n,)."""
    xi = as_points(xi, model.d)
    alpha = model.alpha
    c_alpha, s_alpha = stable_constants(alpha)
    if model.d == 1:
        g_plus, g_minus = model.g(np.array([[1.0], [-1.0]]))
        u = xi[:, 0]
        return (g_plus + g_minus) * c_alpha * np.abs(u) ** alpha - 1j * (
            g_plus - g_minus
        ) * stable_odd_part(u, alpha)

    radius = np.linalg.norm(xi, axis=1)
    if model.d == 2 and model.g.kind in ("constant", "quadrant"):
        a, sgn, lin, clog = _interp_periodic(
            _angle_tables(model.g.values, model.g.kind, alpha),
            np.arctan2(xi[:, 1], xi[:, 0]),
        )
    else:
        nodes, weights = sphere_quadrature(model.d)
        gw = model.g(nodes) * weights
        with np.errstate(invalid="ignore"):
            c = (xi / np.where(radius > 0, radius, 1.0)[:, None]) @ nodes.T
        abs_c = np.abs(c)
        with np.errstate(divide="ignore", invalid="ignore"):
            clog = np.where(abs_c > 0, c * np.log(abs_c), 0.0) @ gw
        a = (abs_c**alpha) @ gw
        sgn = (np.sign(c) * abs_c**alpha) @ gw
        lin = c @ gw

    real = c_alpha * radius**alpha * a
    if alpha == 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            odd = radius * (1.0 - EULER_GAMMA - np.log(radius)) * lin - radius * clog
        odd = np.where(radius > 0, odd, 0.0)
    else:
        odd = s_alpha * radius**alpha * sgn + radius * lin / (alpha - 1)
    return real - 1j * odd


def relativistic_phi_closed(model: LevyModel, xi: np.ndarray) -> np.ndarray:
    """(m^{2/alpha} + |xi|^2)^{alpha/2} - m, computed without cancellation near 0."""
    xi = as_points(xi, model.d)
    m = model.params["m"]
    alpha = model.alpha
    mu2 = m ** (2.0 / alpha)
    r2 = np.sum(xi**2, axis=1)
    # m * ((1 + r2/mu2)^{alpha/2} - 1)
    return m * np.expm1(0.5 * alpha * np.log1p(r2 / mu2)) + 0j


def has_closed_form(model: LevyModel) -> bool:
    if model.family == "stable":
        return model.d <= 3
    return model.family == "relativistic"


def closed_form_phi(model: LevyModel, xi: np.ndarray) -> np.ndarray:
    """Closed-form Phi for the stable and relativistic families.

    Raises:
        ConfigException: If the family has no closed form
    """
    if model.family == "stable":
        return stable_phi(model, xi)
    if model.family == "relativistic":
        return relativistic_phi_closed(model, xi)
    raise ConfigException(f"Family {model.family} has no closed-form exponent")
