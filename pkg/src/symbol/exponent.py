"""The characteristic exponent: Phi by compensated quadrature or closed form, and psi."""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import integrate

from ..core.exceptions import QuadratureError
from ..models.levy_model import QUAD_LIMIT, LevyModel, as_points
from ..models.sphere import sphere_quadrature
from .closed_forms import closed_form_phi, has_closed_form

logger = logging.getLogger(__name__)

GENERIC_SPHERE_NODES = {1: 2, 2: 128, 3: 256}
SERIES_SWITCH = 0.1


@dataclass(frozen=True)
class SymbolValue:
    """Phi evaluated at frequencies xi (shape (n, d))."""

    xi: np.ndarray
    real: np.ndarray
    imag: np.ndarray

    @property
    def value(self) -> np.ndarray:
        return self.real + 1j * self.imag


def _sin_minus_linear(x: np.ndarray) -> np.ndarray:
    """sin(x) - x without cancellation for small |x|."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    series = -x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    return np.where(np.abs(x) < SERIES_SWITCH, series, np.sin(x) - x)


def _quad(func, a, b, **kwargs) -> float:
    value, error = integrate.quad(func, a, b, limit=QUAD_LIMIT, **kwargs)
    if not np.isfinite(value):
        raise QuadratureError(f"Quadrature on [{a}, {b}] returned {value}", achieved=error)
    return value


def ray_transform(
    model: LevyModel,
    theta: np.ndarray,
    u: float,
    lower: float = 0.0,
    upper: float = np.inf,
    compensation: float = 1.0,
    epsabs: float = 1e-13,
    epsrel: float = 1e-10,
) -> Tuple[float, float]:
    """Return (F, G) along one ray of the sphere rule.

    F = int (1 - cos(u rho)) w(rho) drho and
    G = int (sin(u rho) - u rho 1_{rho < compensation}) w(rho) drho over
    [lower, upper), where w(rho) = nu(rho theta) rho^{d-1}. The oscillatory far
    part uses the cosine/sine weighted rules of QUADPACK.
    """
    if u == 0.0 or upper <= lower:
        return 0.0, 0.0
    sign = np.sign(u)
    u = abs(u)
    d = model.d

    def w(rho):
        return float(model.ray(theta, np.array([rho]))[0]) * rho ** (d - 1)

    opts = dict(epsabs=epsabs, epsrel=epsrel)
    split = min(upper, max(lower, 2.0 * np.pi / u))
    f_near = g_near = 0.0
    if split > lower:
        f_near = _quad(lambda rho: 2.0 * np.sin(0.5 * u * rho) ** 2 * w(rho), lower, split, **opts)
        g_near = _quad(
            lambda rho: (
                _sin_minus_linear(u * rho) + (u * rho if rho >= compensation else 0.0)
            )
            * w(rho),
            lower,
            split,
            **opts,
        )
    f_far = g_far = 0.0
    if upper > split:
        if np.isfinite(upper):
            mass = _quad(w, split, upper, **opts)
            cos_part = _quad(w, split, upper, weight="cos", wvar=u, **opts)
            sin_part = _quad(w, split, upper, weight="sin", wvar=u, **opts)
        else:
            mass = _quad(w, split, np.inf, **opts)
            cos_part = _quad(w, split, np.inf, weight="cos", wvar=u, epsabs=epsabs)
            sin_part = _quad(w, split, np.inf, weight="sin", wvar=u, epsabs=epsabs)
        linear = 0.0
        if compensation > split:
            linear = u * _quad(lambda rho: rho * w(rho), split, min(upper, compensation), **opts)
        f_far = mass - cos_part
        g_far = sin_part - linear
    return f_near + f_far, sign * (g_near + g_far)


def restricted_phi(
    model: LevyModel,
    xi: np.ndarray,
    lower: float = 0.0,
    upper: float = np.inf,
    compensation: float = 1.0,
    n_dirs: Optional[int] = None,
    epsrel: float = 1e-10,
) -> np.ndarray:
    """Complex int_{lower<=|y|<upper} (1 - e^{i<xi,y>} + i<xi,y> 1_{|y|<compensation}) nu(y) dy.

    Raises:
        QuadratureError: If one of the ray quadratures fails
    """
    xi = as_points(xi, model.d)
    out = np.zeros(len(xi), dtype=complex)
    if not model.has_jumps:
        return out
    nodes, weights = sphere_quadrature(model.d, n_dirs or GENERIC_SPHERE_NODES[model.d])
    for theta, weight in zip(nodes, weights):
        if model.separable and float(model.g(theta[None, :])[0]) == 0.0:
            continue
        for i, u in enumerate(xi @ theta):
            f, g = ray_transform(model, theta, float(u), lower, upper, compensation, epsrel=epsrel)
            out[i] += weight * (f - 1j * g)
    return out


def phi(model: LevyModel, xi: np.ndarray) -> SymbolValue:
    """Evaluate Phi(xi) = int (1 - e^{i<xi,y>} + i<xi,y> 1_{B(0,1)}(y)) nu(dy).

    Closed forms are used for the stable and relativistic families, compensated
    polar quadrature otherwise.

    Args:
        model: Levy model
        xi: Frequencies, shape (n, d) or (n,) in d=1

    Returns:
        SymbolValue with real and imaginary parts

    Raises:
        QuadratureError: If a quadrature does not converge
    """
    points = as_points(xi, model.d)
    if not model.has_jumps:
        values = np.zeros(len(points), dtype=complex)
    elif has_closed_form(model):
        values = closed_form_phi(model, points)
    else:
        values = restricted_phi(model, points)
    return SymbolValue(xi=points, real=values.real, imag=values.imag)


def psi(model: LevyModel, xi: np.ndarray) -> np.ndarray:
    """Complex exponent psi(xi) = -i<xi,b> + <xi,A xi> + Phi(xi)."""
    points = as_points(xi, model.d)
    gaussian = np.einsum("ni,ij,nj->n", points, model.A, points)
    return -1j * (points @ model.b) + gaussian + phi(model, points).value
