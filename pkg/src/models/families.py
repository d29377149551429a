"""Constructors for the example families of Levy models."""

import logging
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy import integrate
from scipy.special import gamma, roots_genlaguerre

from ..core.exceptions import ConfigException, QuadratureError
from .levy_model import LevyModel, as_points
from .profile import RadialProfile, Verdict
from .sphere import SphericalDensity

logger = logging.getLogger(__name__)

LAGUERRE_START = 32
LAGUERRE_MAX = 512


def _split(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    r = np.linalg.norm(x, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = x / r[:, None]
    return r, theta


def _radial_mass(log_radial, d: int) -> float:
    integrand = lambda s: np.exp(log_radial(np.array([s]))[0]) * s ** (d - 1)
    head, _ = integrate.quad(integrand, 0.0, 1.0, limit=200)
    tail, _ = integrate.quad(integrand, 1.0, np.inf, limit=200)
    return head + tail


def _separable_log_nu(g: SphericalDensity, log_radial):
    def log_nu(x: np.ndarray) -> np.ndarray:
        r, theta = _split(x)
        with np.errstate(divide="ignore"):
            values = np.log(g(np.nan_to_num(theta))) + log_radial(r)
        return np.where(r > 0, values, np.inf)

    return log_nu


def make_stable(
    d: int,
    alpha: float,
    g: SphericalDensity,
    strictly_stable: bool = True,
    b: Optional[np.ndarray] = None,
    A: Any = 0.0,
) -> LevyModel:
    """Stable model nu(x) = |x|^{-alpha-d} g(x/|x|).

    With `strictly_stable` the drift is chosen so that the semigroup is
    strictly stable (b is then ignored).

    Raises:
        ConfigException: If alpha is outside (0, 2) or g is degenerate
    """
    if not 0 < alpha < 2:
        raise ConfigException(f"Stability index must lie in (0, 2), got {alpha}")
    if g.d != d:
        raise ConfigException("Spherical density dimension does not match d")
    g.validate()

    exponent = alpha + d
    log_radial = lambda s: -exponent * np.log(np.asarray(s, dtype=float))
    radial = lambda s: np.asarray(s, dtype=float) ** (-exponent)

    if strictly_stable:
        mean = g.mean_direction()
        if alpha < 1:
            drift = mean / (1 - alpha)
        elif alpha > 1:
            drift = -mean / (alpha - 1)
        else:
            drift = np.zeros(d)
            if np.linalg.norm(mean) > 1e-12:
                logger.warning(
                    "alpha=1 with nonzero mean direction: the model is not strictly stable"
                )
    else:
        drift = np.zeros(d) if b is None else np.asarray(b, dtype=float)

    return LevyModel(
        d=d,
        b=drift,
        A=A,
        family="stable",
        log_nu_fn=_separable_log_nu(g, log_radial),
        g=g,
        radial=radial,
        log_radial=log_radial,
        profile=RadialProfile(
            d=d, eta_value=1.0, eta_exponent=exponent, delta=exponent, c0=1.0
        ),
        kappa=0.0,
        alpha=alpha,
        singularity=exponent,
        params={
            "family": "stable",
            "d": d,
            "alpha": alpha,
            "g": g.to_config(),
            "strictly_stable": strictly_stable,
        },
    )


@lru_cache(maxsize=32)
def _laguerre_rule(n: int, p: float) -> Tuple[np.ndarray, np.ndarray]:
    return roots_genlaguerre(n, p)


def log_relativistic_phi(xi: np.ndarray, p: float, rtol: float = 1e-10) -> np.ndarray:
    """log of phi(xi) = int_0^inf e^{-v} v^p (xi + v/2)^p dv.

    Gauss-Laguerre rules with weight v^p e^{-v} are doubled until successive
    values agree to `rtol`; entries that do not settle fall back to adaptive
    quadrature.

    Raises:
        QuadratureError: If the fallback quadrature misses 1e-8 relative accuracy
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.full(xi.shape, np.log(2.0 ** (-p) * gamma(2 * p + 1)))
    positive = xi > 0
    x = xi[positive]
    if x.size == 0:
        return out

    def scaled_sum(n):
        nodes, weights = _laguerre_rule(n, p)
        return ((1.0 + nodes[None, :] / (2.0 * x[:, None])) ** p) @ weights

    n = LAGUERRE_START
    previous = scaled_sum(n)
    pending = np.ones(x.size, dtype=bool)
    while n < LAGUERRE_MAX and pending.any():
        n *= 2
        current = scaled_sum(n)
        pending = np.abs(current - previous) > rtol * np.abs(current)
        previous = current
    values = p * np.log(x) + np.log(previous)

    for index in np.flatnonzero(pending):
        point = x[index]
        result, error = integrate.quad(
            lambda v: np.exp(-v) * v**p * (point + v / 2.0) ** p,
            0.0,
            np.inf,
            epsabs=0.0,
            epsrel=1e-12,
            limit=200,
        )
        if error > 1e-8 * abs(result):
            raise QuadratureError(
                f"phi quadrature failed at xi={point}: error {error:.3g}", achieved=error
            )
        values[index] = np.log(result)
    out[positive] = values
    return out


def relativistic_phi(xi: np.ndarray, p: float) -> np.ndarray:
    return np.exp(log_relativistic_phi(xi, p))


def relativistic_constant(d: int, alpha: float) -> float:
    """Normalization making psi(xi) = (m^{2/alpha} + |xi|^2)^{alpha/2} - m."""
    p = (d + alpha - 1) / 2
    phi0 = 2.0 ** (-p) * gamma(2 * p + 1)
    return (
        2.0**alpha
        * gamma((d + alpha) / 2)
        / (np.pi ** (d / 2) * abs(gamma(-alpha / 2)) * phi0)
    )


def make_relativistic(d: int, alpha: float, m: float) -> LevyModel:
    """Relativistic stable model with symbol (m^{2/alpha} + |xi|^2)^{alpha/2} - m.

    Raises:
        ConfigException: If alpha is outside (0, 2) or m <= 0
    """
    if not 0 < alpha < 2:
        raise ConfigException(f"Stability index must lie in (0, 2), got {alpha}")
    if m <= 0:
        raise ConfigException(f"Mass parameter m must be positive, got {m}")
    mu = m ** (1.0 / alpha)
    p = (d + alpha - 1) / 2
    log_c = np.log(relativistic_constant(d, alpha))

    def log_radial(s):
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        with np.errstate(divide="ignore"):
            values = log_c - (d + alpha) * np.log(flat) - mu * flat
        values = values + log_relativistic_phi(mu * flat, p)
        return values.reshape(s.shape)

    g = SphericalDensity.constant(d, 1.0)
    return LevyModel(
        d=d,
        b=np.zeros(d),
        A=0.0,
        family="relativistic",
        log_nu_fn=_separable_log_nu(g, log_radial),
        g=g,
        radial=lambda s: np.exp(log_radial(s)),
        log_radial=log_radial,
        profile=RadialProfile(
            d=d,
            eta_value=np.exp(-mu),
            eta_exponent=d + alpha,
            m=mu,
            beta=1.0,
            delta=(d + alpha + 1) / 2,
            c0=1.0,
        ),
        kappa=mu,
        alpha=alpha,
        singularity=d + alpha,
        params={"family": "relativistic", "d": d, "alpha": alpha, "m": m},
    )


def make_tempered(
    d: int,
    profile: RadialProfile,
    g: SphericalDensity,
    allow_failing_profile: bool = False,
    b: Optional[np.ndarray] = None,
    A: Any = 0.0,
) -> LevyModel:
    """Tempered model nu(x) = g(x/|x|) f(|x|) with f the given profile.

    Raises:
        ConfigException: If the profile fails the three-case test without the
            override, has superexponential tails or does not define a Levy measure
    """
    profile.validate()
    g.validate()
    verdict = profile.classification.verdict
    if verdict is Verdict.FAILS and not allow_failing_profile:
        raise ConfigException(
            f"Profile (m={profile.m}, beta={profile.beta}, delta={profile.delta}, d={d}) "
            "fails the K(r) -> 0 classification; set allow_failing_profile to use it"
        )
    if profile.beta > 1:
        raise ConfigException("Stretch exponent beta > 1 is not supported")
    if (profile.m == 0 or profile.beta == 0) and profile.delta <= d:
        raise ConfigException("Polynomial tail with delta <= d is not a Levy measure")

    kappa = profile.m if profile.beta == 1 else 0.0
    if 0 < profile.beta < 1:
        family = "stretched"
    elif profile.beta == 1 and profile.m > 0:
        family = "exponential"
    else:
        family = "tempered"
    mass = None
    if profile.finite_mass:
        mass = g.integral() * _radial_mass(profile.log_f, d)

    flags = frozenset({"K_INFINITE"}) if verdict is Verdict.FAILS else frozenset()
    if flags:
        logger.warning(f"Tempered model built with failing profile: {sorted(flags)}")
    return LevyModel(
        d=d,
        b=np.zeros(d) if b is None else b,
        A=A,
        family=family,
        log_nu_fn=_separable_log_nu(g, profile.log_f),
        g=g,
        radial=profile.f,
        log_radial=profile.log_f,
        profile=profile,
        kappa=kappa,
        mass=mass,
        singularity=profile.eta_exponent,
        params={
            "family": "tempered",
            "d": d,
            "profile": profile.to_config(),
            "g": g.to_config(),
            "allow_failing_profile": allow_failing_profile,
        },
        flags=flags,
    )


def make_compound_poisson(
    d: int,
    m: float,
    delta: float,
    rate: float = 1.0,
    g: Optional[SphericalDensity] = None,
    b: Optional[np.ndarray] = None,
    A: Any = 0.0,
    allow_failing_profile: bool = False,
) -> LevyModel:
    """Finite smooth Levy density rate * g(theta) e^{-m sqrt(1+s^2)} (1+s^2)^{-delta/2}.

    Raises:
        ConfigException: If the dominating profile fails without the override
    """
    g = g or SphericalDensity.constant(d, 1.0)
    g.validate()
    profile = RadialProfile(
        d=d, eta_value=rate * np.exp(-m), m=m, beta=1.0 if m > 0 else 0.0, delta=delta, c0=rate
    )
    if profile.classification.verdict is Verdict.FAILS and not allow_failing_profile:
        raise ConfigException(
            f"Compound Poisson tail (m={m}, delta={delta}, d={d}) fails the classification"
        )

    def log_radial(s):
        s = np.asarray(s, dtype=float)
        return np.log(rate) - m * np.sqrt(1.0 + s**2) - 0.5 * delta * np.log1p(s**2)

    def log_nu(x):
        r, theta = _split(x)
        with np.errstate(divide="ignore"):
            angular = np.where(r > 0, np.log(g(np.nan_to_num(theta))), np.log(g.upper))
        return angular + log_radial(r)

    return LevyModel(
        d=d,
        b=np.zeros(d) if b is None else b,
        A=A,
        family="compound-poisson",
        log_nu_fn=log_nu,
        g=g,
        radial=lambda s: np.exp(log_radial(s)),
        log_radial=log_radial,
        profile=profile,
        kappa=m,
        mass=g.integral() * _radial_mass(log_radial, d),
        singularity=0.0,
        params={
            "family": "compound-poisson",
            "d": d,
            "m": m,
            "delta": delta,
            "rate": rate,
            "g": g.to_config(),
        },
    )


def make_gaussian(d: int, A: Any = 1.0, b: Optional[np.ndarray] = None) -> LevyModel:
    """Pure diffusion model (nu = 0).

    Raises:
        ConfigException: If A is zero
    """
    model = LevyModel(
        d=d,
        b=np.zeros(d) if b is None else b,
        A=A,
        family="gaussian",
        params={"family": "gaussian", "d": d},
    )
    if not model.elliptic:
        raise ConfigException("Gaussian model needs an elliptic matrix A")
    return model


def model_from_config(section: Dict[str, Any]) -> LevyModel:
    """Build a LevyModel from a `model` configuration section.

    Raises:
        ConfigException: If the family is unknown or a key is missing
    """
    try:
        family = section["family"]
        d = int(section["d"])
    except KeyError as e:
        raise ConfigException(f"Missing model key: {e}")

    g = SphericalDensity.from_config(d, section.get("g", {"type": "constant", "value": 1.0}))
    A = section.get("A", 0.0)
    b = section.get("b")
    if b is not None:
        b = np.asarray(b, dtype=float)
    logger.debug(f"Building {family} model in d={d}")

    if family == "stable":
        return make_stable(
            d,
            float(section["alpha"]),
            g,
            strictly_stable=bool(section.get("strictly_stable", True)),
            b=b,
            A=A,
        )
    if family == "relativistic":
        return make_relativistic(d, float(section["alpha"]), float(section["m"]))
    if family in ("tempered", "stretched", "exponential"):
        profile_section = section.get("profile") or {
            "eta": section.get("eta", {"type": "constant", "value": 1.0}),
            "m": section.get("m", 0.0),
            "beta": section.get("beta", 0.0),
            "delta": section.get("delta", 0.0),
        }
        return make_tempered(
            d,
            RadialProfile.from_config(d, profile_section),
            g,
            allow_failing_profile=bool(section.get("allow_failing_profile", False)),
            b=b,
            A=A,
        )
    if family == "compound-poisson":
        return make_compound_poisson(
            d,
            float(section["m"]),
            float(section["delta"]),
            rate=float(section.get("rate", 1.0)),
            g=g,
            b=b,
            A=A,
            allow_failing_profile=bool(section.get("allow_failing_profile", False)),
        )
    if family == "gaussian":
        return make_gaussian(d, A=A if np.any(np.asarray(A)) else 1.0, b=b)
    raise ConfigException(f"Unknown model family: {family}")


def evaluate_closed_form(model: LevyModel, x: np.ndarray) -> np.ndarray:
    """Defining formula of nu for the closed-form families (used by invariant checks)."""
    points = as_points(x, model.d)
    r, theta = _split(points)
    if model.family == "stable":
        return r ** (-model.alpha - model.d) * model.g(theta)
    if model.family == "relativistic":
        m = model.params["m"]
        mu = m ** (1.0 / model.alpha)
        p = (model.d + model.alpha - 1) / 2
        return (
            relativistic_constant(model.d, model.alpha)
            * r ** (-model.d - model.alpha)
            * np.exp(-mu * r)
            * relativistic_phi(mu * r, p)
        )
    raise ConfigException(f"Family {model.family} has no closed-form density")
