"""Direct quadrature of pair integrals int f(x - y) g(y) dy away from the origin.

Far-field values of nu_r^{2*} and the K(r) functional are dominated by the
neighbourhoods of the two centres 0 and x; the integration range is split
geometrically towards both so that adaptive quadrature sees the peaks.
"""

import logging
from typing import Callable, List, Tuple

import numpy as np
from scipy import integrate

from ..core.exceptions import QuadratureError
from ..models.levy_model import QUAD_LIMIT

logger = logging.getLogger(__name__)

LogDensity = Callable[[np.ndarray], np.ndarray]

SPLIT_LEVELS = 24
FINEST_PIECE = 0.25


def _excluded_pieces(x: float, r: float) -> List[Tuple[float, float]]:
    """Complement of (-r, r) U (x - r, x + r) on the line, as closed intervals."""
    lo, hi = sorted((0.0, x))
    pieces = [(-np.inf, lo - r), (hi + r, np.inf)]
    if hi - r > lo + r:
        pieces.append((lo + r, hi - r))
    return pieces


def _breakpoints(a: float, b: float, anchors: Tuple[float, ...], finest: float) -> np.ndarray:
    """Geometric breakpoints accumulating at the anchors inside [a, b]."""
    points = {a, b}
    for anchor in anchors:
        if not a <= anchor <= b:
            continue
        width = max(b - anchor, anchor - a)
        for k in range(SPLIT_LEVELS):
            step = width * 2.0**-k
            if step < finest:
                break
            for p in (anchor - step, anchor + step):
                if a < p < b:
                    points.add(p)
    return np.array(sorted(points))


def _segment(func: Callable[[float], float], a: float, b: float) -> float:
    value, error = integrate.quad(func, a, b, epsabs=0.0, epsrel=1e-10, limit=QUAD_LIMIT)
    if not np.isfinite(value):
        raise QuadratureError(f"Pair quadrature on [{a}, {b}] returned {value}", achieved=error)
    return value


def pair_integral(
    log_left: LogDensity,
    log_right: LogDensity,
    x: float,
    r: float,
    log_scale: float = 0.0,
) -> float:
    """exp(-log_scale) * int f(x - y) g(y) dy over |y| >= r, |x - y| >= r (d = 1).

    Args:
        log_left: log f, evaluated at the real numbers x - y
        log_right: log g, evaluated at the real numbers y
        x: Evaluation point
        r: Exclusion radius around both centres (r > 0)
        log_scale: Subtracted in the exponent so that ratios to tiny values stay finite

    Returns:
        The normalized pair integral

    Raises:
        QuadratureError: If a quadrature returns a non-finite value
    """

    def integrand(y: float) -> float:
        arr = np.array([y])
        with np.errstate(over="ignore", divide="ignore"):
            return float(np.exp(log_left(x - arr)[0] + log_right(arr)[0] - log_scale))

    total = 0.0
    for a, b in _excluded_pieces(x, r):
        if np.isinf(a):
            total += _segment(integrand, -np.inf, b - max(1.0, abs(x)))
            a = b - max(1.0, abs(x))
        if np.isinf(b):
            total += _segment(integrand, a + max(1.0, abs(x)), np.inf)
            b = a + max(1.0, abs(x))
        points = _breakpoints(a, b, (-r, r, x - r, x + r), FINEST_PIECE * r)
        for lo, hi in zip(points[:-1], points[1:]):
            total += _segment(integrand, lo, hi)
    return total


def radial_pair_integral(
    log_f: LogDensity,
    d: int,
    x: float,
    r: float,
    log_scale: float = 0.0,
) -> float:
    """exp(-log_scale) * int f(|x - y|) f(|y|) dy over |y| >= r, |x - y| >= r in R^d.

    For a radial f the integral reduces to the two-centre form
    |S^{d-2}| int_r^inf rho^{d-1} f(rho) int_0^pi f(w) 1_{w >= r} sin^{d-2}(phi) dphi drho
    with w^2 = x^2 + rho^2 - 2 x rho cos(phi). In d = 1 the line formula is used.
    """
    if d == 1:
        log_abs = lambda s: log_f(np.abs(s))
        return pair_integral(log_abs, log_abs, x, r, log_scale)
    sphere = 2.0 if d == 2 else 2.0 * np.pi

    def inner(rho: float) -> float:
        def angular(phi: float) -> float:
            w = np.sqrt(max(x * x + rho * rho - 2.0 * x * rho * np.cos(phi), 0.0))
            if w < r:
                return 0.0
            return float(np.exp(log_f(np.array([w]))[0] + log_f(np.array([rho]))[0] - log_scale)) * np.sin(
                phi
            ) ** (d - 2)

        # the excluded ball around x cuts the angular range at cos(phi) = (x^2 + rho^2 - r^2) / (2 x rho)
        cut = (x * x + rho * rho - r * r) / (2.0 * x * rho)
        points = [float(np.arccos(cut))] if -1.0 < cut < 1.0 else None
        value, _ = integrate.quad(angular, 0.0, np.pi, points=points, epsabs=0.0, epsrel=1e-9, limit=QUAD_LIMIT)
        return value * rho ** (d - 1)

    points = _breakpoints(r, x + r + max(1.0, x), (r, x - r, x + r), FINEST_PIECE * r)
    total = sum(_segment(inner, lo, hi) for lo, hi in zip(points[:-1], points[1:]))
    total += _segment(inner, points[-1], np.inf)
    return sphere * total
