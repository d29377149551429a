"""Closed-form and subordinator oracles for heat kernels."""

import logging

import numpy as np
from scipy import integrate
from scipy.special import gammaln, kve

from ..core.exceptions import ConfigException, QuadratureError
from ..models.levy_model import QUAD_LIMIT, LevyModel, as_points
from ..symbol.maximal import psi_max

logger = logging.getLogger(__name__)

LOG_WINDOW = 60.0
ORACLE_RTOL = 1e-11


def cauchy_kernel(x: np.ndarray, t: float, d: int = 1, scale: float = 1.0) -> np.ndarray:
    """Kernel of psi(xi) = scale * |xi|: Gamma((d+1)/2) pi^{-(d+1)/2} s / (s^2 + |x|^2)^{(d+1)/2}, s = scale t."""
    points = as_points(x, d)
    s = scale * t
    r2 = np.sum(points**2, axis=1)
    log_c = gammaln((d + 1) / 2) - (d + 1) / 2 * np.log(np.pi)
    return np.exp(log_c) * s / (s * s + r2) ** ((d + 1) / 2)


def gaussian_kernel(x: np.ndarray, t: float, A: np.ndarray, b: np.ndarray = None) -> np.ndarray:
    """Density of N(t b, 2 t A), the kernel of psi(xi) = <xi, A xi> - i<xi, b>."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    d = A.shape[0]
    points = as_points(x, d)
    if b is not None:
        points = points - t * np.asarray(b, dtype=float).reshape(1, d)
    inverse = np.linalg.inv(A)
    quadratic = np.einsum("ni,ij,nj->n", points, inverse, points)
    norm = (4.0 * np.pi * t) ** (-d / 2) / np.sqrt(np.linalg.det(A))
    return norm * np.exp(-quadratic / (4.0 * t))


def subordinator_log_density(t: float, s: np.ndarray) -> np.ndarray:
    """log eta(t, s) for the 1/2-stable subordinator, eta = t (4 pi)^{-1/2} s^{-3/2} e^{-t^2/(4s)}."""
    s = np.asarray(s, dtype=float)
    return np.log(t) - 0.5 * np.log(4.0 * np.pi) - 1.5 * np.log(s) - t * t / (4.0 * s)


def _log_integral(log_f, peak: float, curvature: float) -> float:
    """log int exp(log_f(u)) du for a concave log_f with maximum near `peak`."""
    top = log_f(peak)
    width = 1.0 / np.sqrt(max(curvature, 1e-300))
    lo, hi = peak - width, peak + width
    while log_f(lo) - top > -LOG_WINDOW:
        lo -= 2.0 * (peak - lo)
    while log_f(hi) - top > -LOG_WINDOW:
        hi += 2.0 * (hi - peak)
    value, error = integrate.quad(
        lambda u: np.exp(log_f(u) - top),
        lo,
        hi,
        points=[peak],
        epsabs=0.0,
        epsrel=ORACLE_RTOL,
        limit=QUAD_LIMIT,
    )
    if not np.isfinite(value) or value <= 0:
        raise QuadratureError(f"Oracle quadrature returned {value}", achieved=error)
    return top + np.log(value)


def subordinator_laplace(t: float, lam: float) -> float:
    """int_0^inf e^{-lam s} eta(t, s) ds by quadrature in log s (equals e^{-t sqrt(lam)})."""
    log_f = lambda u: float(subordinator_log_density(t, np.exp(u))) - lam * np.exp(u) + u
    a = t * t / 4.0
    # maximum of -0.5 u - a e^{-u} - lam e^{u}
    s_peak = 2.0 * a / (0.5 + np.sqrt(0.25 + 4.0 * lam * a))
    peak = np.log(s_peak)
    curvature = a / s_peak + lam * s_peak
    return float(np.exp(_log_integral(log_f, peak, curvature)))


def relativistic_log_oracle(d: int, m: float, t: float, x: np.ndarray) -> np.ndarray:
    """log p_t(x) for the relativistic model with alpha = 1 by subordination.

    p_t(x) = e^{mt} int_0^inf (4 pi s)^{-d/2} e^{-|x|^2/(4s)} e^{-m^2 s} eta(t, s) ds;
    the integrand is positive, so large |x| is computed without cancellation.
    """
    if m <= 0 or t <= 0:
        raise ConfigException("The relativistic oracle needs m > 0 and t > 0")
    points = as_points(x, d)
    out = np.empty(len(points))
    half = (d + 1) / 2
    log_const = np.log(t) - 0.5 * np.log(4.0 * np.pi) - 0.5 * d * np.log(4.0 * np.pi)
    for i, point in enumerate(points):
        a = (float(point @ point) + t * t) / 4.0
        log_f = lambda u, a=a: log_const - half * u - a * np.exp(-u) - m * m * np.exp(u)
        s_peak = 2.0 * a / (half + np.sqrt(half * half + 4.0 * m * m * a))
        curvature = a / s_peak + m * m * s_peak
        out[i] = m * t + _log_integral(log_f, np.log(s_peak), curvature)
    return out


def relativistic_oracle(d: int, m: float, t: float, x: np.ndarray) -> np.ndarray:
    """p_t(x) for the relativistic model with alpha = 1 (see relativistic_log_oracle)."""
    return np.exp(relativistic_log_oracle(d, m, t, x))


def relativistic_bessel(d: int, m: float, t: float, x: np.ndarray) -> np.ndarray:
    """Bessel form 2 t e^{mt} (m / 2 pi)^{(d+1)/2} K_{(d+1)/2}(m w) / w^{(d+1)/2}, w = sqrt(|x|^2 + t^2)."""
    points = as_points(x, d)
    w = np.sqrt(np.sum(points**2, axis=1) + t * t)
    order = (d + 1) / 2
    log_value = (
        np.log(2.0 * t)
        + m * t
        + order * np.log(m / (2.0 * np.pi))
        + np.log(kve(order, m * w))
        - m * w
        - order * np.log(w)
    )
    return np.exp(log_value)


def oracle_kind(model: LevyModel) -> str:
    """'cauchy', 'relativistic' or '' for models without an oracle."""
    if model.elliptic or np.any(model.b != 0):
        return ""
    if model.family == "stable" and model.alpha == 1 and model.symmetric:
        if model.d == 1 or model.isotropic:
            return "cauchy"
    if model.family == "relativistic" and model.alpha == 1:
        return "relativistic"
    return ""


def oracle_density(model: LevyModel, t: float, x: np.ndarray) -> np.ndarray:
    """Closed-form p_t(x) for models with an oracle.

    Raises:
        ConfigException: If the model has no oracle
    """
    kind = oracle_kind(model)
    if kind == "cauchy":
        return cauchy_kernel(x, t, model.d, scale=float(psi_max(model, 1.0)))
    if kind == "relativistic":
        return relativistic_oracle(model.d, model.params["m"], t, x)
    raise ConfigException(f"No closed-form kernel for family {model.family}")
