"""Exponential moments: the exponent psi~ and nested-cutoff tail integrals."""

import logging
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from ..core.exceptions import DivergentMoment
from ..models.levy_model import QUAD_LIMIT, LevyModel
from ..models.sphere import sphere_quadrature

logger = logging.getLogger(__name__)

MAX_DOUBLINGS = 200
GROWTH_RATIO = 0.99
GROWTH_STREAK = 5
MOMENT_SPHERE_NODES = {1: 2, 2: 128, 3: 256}


def nested_exp_integral(
    log_integrand: Callable[[float], float],
    start: float,
    rtol: float = 1e-10,
    context: str = "",
) -> float:
    """int_start^inf exp(log_integrand(rho)) drho on nested cutoffs start * 2^k.

    Each shell [R, 2R] is integrated in log(rho). The integral is declared
    convergent once the increment, extended by its geometric tail, falls
    below `rtol` of the partial value.

    Raises:
        DivergentMoment: If shells stop shrinking or overflow
    """
    total = 0.0
    previous = None
    streak = 0
    lo = start
    for _ in range(MAX_DOUBLINGS):
        hi = 2.0 * lo

        def integrand(s):
            return np.exp(log_integrand(np.exp(s)) + s)

        with np.errstate(over="ignore", invalid="ignore"):
            piece, _ = integrate.quad(
                integrand, np.log(lo), np.log(hi), epsabs=0.0, epsrel=1e-12, limit=QUAD_LIMIT
            )
        if not np.isfinite(piece):
            raise DivergentMoment(f"Exponential moment overflows beyond |y|={lo:.3g} {context}")
        total += piece
        if previous is not None:
            if piece == 0.0:
                return total
            if previous > 0:
                q = piece / previous
                streak = streak + 1 if q >= GROWTH_RATIO else 0
                if streak >= GROWTH_STREAK:
                    raise DivergentMoment(
                        f"Exponential moment diverges: shells stopped shrinking "
                        f"at |y|={hi:.3g} {context}"
                    )
                if q < 1 and piece * q / (1 - q) <= rtol * abs(total):
                    return total + piece * q / (1 - q)
        previous = piece
        lo = hi
    raise DivergentMoment(f"Exponential moment not settled after {MAX_DOUBLINGS} doublings {context}")


def _expm1_minus_linear(x: float) -> float:
    if abs(x) < 0.1:
        return x * x / 2.0 * (1.0 + x / 3.0 * (1.0 + x / 4.0 * (1.0 + x / 5.0 * (1.0 + x / 6.0))))
    return np.expm1(x) - x


def _ray_moment(model: LevyModel, theta: np.ndarray, v: float) -> float:
    """int_0^inf (1 - e^{v rho} + v rho 1_{rho<1}) nu(rho theta) rho^{d-1} drho."""
    d = model.d

    def log_w(rho):
        return float(model.log_ray(theta, np.array([rho]))[0]) + (d - 1) * np.log(rho)

    def w(rho):
        return np.exp(log_w(rho))

    inner, _ = integrate.quad(
        lambda rho: _expm1_minus_linear(v * rho) * w(rho),
        0.0,
        1.0,
        epsabs=1e-14,
        epsrel=1e-11,
        limit=QUAD_LIMIT,
    )
    tail, _ = integrate.quad(w, 1.0, np.inf, epsabs=1e-14, epsrel=1e-11, limit=QUAD_LIMIT)
    exponential = nested_exp_integral(
        lambda rho: v * rho + log_w(rho), 1.0, context=f"along theta={np.round(theta, 6).tolist()}"
    )
    return -inner + tail - exponential


def exp_moment_exponent(model: LevyModel, xi: np.ndarray, n_dirs: Optional[int] = None) -> float:
    """psi~(xi) = -<xi,b> - <xi,A xi> + int (1 - e^{<xi,y>} + <xi,y> 1_{B(0,1)}(y)) nu(dy).

    Args:
        model: Levy model
        xi: Real vector in R^d

    Returns:
        psi~(xi), so that int e^{<xi,y>} P_t(dy) = e^{-t psi~(xi)}

    Raises:
        DivergentMoment: If int_{|y|>1} e^{<xi,y>} nu(dy) does not converge
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float)).reshape(model.d)
    value = -float(xi @ model.b) - float(xi @ model.A @ xi)
    if not model.has_jumps or not np.any(xi):
        return value
    nodes, weights = sphere_quadrature(model.d, n_dirs or MOMENT_SPHERE_NODES[model.d])
    for theta, weight in zip(nodes, weights):
        if model.separable and float(model.g(theta[None, :])[0]) == 0.0:
            continue
        value += weight * _ray_moment(model, theta, float(xi @ theta))
    logger.debug(f"psi~({xi.tolist()}) = {value:.12g} for {model.family}")
    return value


def relativistic_moment_exponent(model: LevyModel, xi: np.ndarray) -> float:
    """Closed form psi~(xi) = (m^{2/alpha} - |xi|^2)^{alpha/2} - m for |xi| <= m^{1/alpha}.

    Raises:
        DivergentMoment: If |xi| exceeds m^{1/alpha}
    """
    m, alpha = model.params["m"], model.alpha
    mu2 = m ** (2.0 / alpha)
    r2 = float(np.sum(np.asarray(xi, dtype=float) ** 2))
    if r2 > mu2 * (1 + 1e-14):
        raise DivergentMoment(f"|xi|={np.sqrt(r2):.6g} exceeds the decay rate {np.sqrt(mu2):.6g}")
    return max(mu2 - r2, 0.0) ** (alpha / 2) - m


def restricted_exp_moment(model: LevyModel, zeta: np.ndarray, r: float, n_dirs: Optional[int] = None) -> float:
    """int_{|z|>=r} e^{<zeta,z>} nu(z) dz.

    Raises:
        DivergentMoment: As in exp_moment_exponent
    """
    zeta = np.atleast_1d(np.asarray(zeta, dtype=float)).reshape(model.d)
    nodes, weights = sphere_quadrature(model.d, n_dirs or MOMENT_SPHERE_NODES[model.d])
    total = 0.0
    for theta, weight in zip(nodes, weights):
        if model.separable and float(model.g(theta[None, :])[0]) == 0.0:
            continue
        v = float(zeta @ theta)
        log_w = lambda rho, theta=theta, v=v: (
            v * rho + float(model.log_ray(theta, np.array([rho]))[0]) + (model.d - 1) * np.log(rho)
        )
        total += weight * nested_exp_integral(log_w, r, context=f"for nu_r with r={r}")
    return total
