"""The Levy model (nu, A, b) and polar integration against its Levy density."""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, FrozenSet, Optional

import numpy as np
from scipy import integrate

from ..core.exceptions import ConfigException, QuadratureError
from .profile import RadialProfile
from .sphere import SphericalDensity, sphere_quadrature

logger = logging.getLogger(__name__)

FAMILIES = (
    "stable",
    "relativistic",
    "stretched",
    "exponential",
    "tempered",
    "compound-poisson",
    "gaussian",
    "custom",
)

QUAD_LIMIT = 400


def as_points(x: np.ndarray, d: int) -> np.ndarray:
    """Reshape x into an (n, d) array of points."""
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        return x.reshape(-1, 1)
    return x.reshape(-1, d)


@dataclass(frozen=True, eq=False)
class LevyModel:
    """Levy triplet with a density nu on R^d \\ {0}.

    Separable models satisfy nu(s theta) = g(theta) * radial(s); other models
    (tilted ones) only provide `log_nu_fn`. `profile` is the nonincreasing
    dominating function f of condition B.
    """

    d: int
    b: np.ndarray
    A: np.ndarray
    family: str
    log_nu_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    g: Optional[SphericalDensity] = None
    radial: Optional[Callable[[np.ndarray], np.ndarray]] = None
    log_radial: Optional[Callable[[np.ndarray], np.ndarray]] = None
    profile: Optional[RadialProfile] = None
    kappa: float = 0.0
    alpha: Optional[float] = None
    mass: Optional[float] = None
    singularity: float = 0.0
    params: Dict[str, Any] = field(default_factory=dict)
    flags: FrozenSet[str] = frozenset()

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        A = np.asarray(self.A, dtype=float)
        if A.ndim == 0:
            A = A * np.eye(self.d)
        if b.shape != (self.d,) or A.shape != (self.d, self.d):
            raise ConfigException(f"Drift/Gaussian shapes do not match d={self.d}")
        if not np.allclose(A, A.T):
            raise ConfigException("Gaussian matrix A must be symmetric")
        eigenvalues = np.linalg.eigvalsh(A)
        if np.any(eigenvalues < -1e-14):
            raise ConfigException("Gaussian matrix A must be nonnegative definite")
        if np.any(eigenvalues > 0) and eigenvalues.min() <= 1e-12 * eigenvalues.max():
            raise ConfigException("Gaussian matrix A must be zero or uniformly elliptic")
        if self.family not in FAMILIES and not self.family.startswith("tilted"):
            raise ConfigException(f"Unknown family tag: {self.family}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "A", A)

    @property
    def has_jumps(self) -> bool:
        return self.log_nu_fn is not None

    @property
    def finite(self) -> bool:
        return self.mass is not None

    @property
    def elliptic(self) -> bool:
        return bool(np.any(self.A != 0))

    @property
    def separable(self) -> bool:
        return self.g is not None and self.radial is not None

    @property
    def symmetric(self) -> bool:
        """True when nu(-x) = nu(x)."""
        return self.separable and self.g.is_symmetric

    @property
    def isotropic(self) -> bool:
        return self.separable and self.g.is_isotropic

    def log_nu(self, x: np.ndarray) -> np.ndarray:
        if not self.has_jumps:
            return np.full(len(as_points(x, self.d)), -np.inf)
        return np.asarray(self.log_nu_fn(as_points(x, self.d)), dtype=float)

    def nu(self, x: np.ndarray) -> np.ndarray:
        return np.exp(self.log_nu(x))

    def ray(self, theta: np.ndarray, rho: np.ndarray) -> np.ndarray:
        """nu(rho * theta) for one unit vector theta and radii rho."""
        rho = np.asarray(rho, dtype=float)
        theta = np.asarray(theta, dtype=float).reshape(self.d)
        if self.separable:
            return float(self.g(theta[None, :])[0]) * self.radial(rho)
        return self.nu(rho.reshape(-1, 1) * theta[None, :]).reshape(rho.shape)

    def log_ray(self, theta: np.ndarray, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        theta = np.asarray(theta, dtype=float).reshape(self.d)
        if self.separable and self.log_radial is not None:
            g_value = float(self.g(theta[None, :])[0])
            with np.errstate(divide="ignore"):
                return np.log(g_value) + self.log_radial(rho)
        return self.log_nu(rho.reshape(-1, 1) * theta[None, :]).reshape(rho.shape)

    def scaled(self, c: float) -> "LevyModel":
        """The model with Levy density c * nu (drift and A unchanged).

        Stable models rescale g so their closed forms stay valid; relativistic
        models lose their closed form and become generic.
        """
        if c <= 0:
            raise ConfigException("Scale factor for nu must be positive")
        log_c = np.log(c)
        base = self.log_nu_fn
        g, radial, log_radial = self.g, self.radial, self.log_radial
        family = self.family
        params = dict(self.params)
        if g is not None and g.kind != "custom":
            g = SphericalDensity.from_config(self.d, {"type": g.kind, "values": [c * v for v in g.values]})
            if "g" in params:
                params["g"] = g.to_config()
        else:
            params["rate"] = params.get("rate", 1.0) * c
            radial = (lambda s: c * self.radial(s)) if radial else None
            log_radial = (lambda s: self.log_radial(s) + log_c) if log_radial else None
        if family == "relativistic":
            family, params = "custom", {}
        return replace(
            self,
            family=family,
            log_nu_fn=(lambda x: base(x) + log_c) if base else None,
            g=g,
            radial=radial,
            log_radial=log_radial,
            mass=None if self.mass is None else c * self.mass,
            params=params,
        )

    def to_config(self) -> Dict[str, Any]:
        """Configuration section that rebuilds this model."""
        if not self.params:
            raise ConfigException(f"Model of family {self.family} carries no config")
        section = dict(self.params)
        section["b"] = self.b.tolist()
        section["A"] = self.A.tolist()
        return section


def integrate_polar(
    model: LevyModel,
    weight: Callable[[np.ndarray, np.ndarray], np.ndarray],
    a: float,
    b: float,
    n_dirs: int = 128,
    epsabs: float = 1e-13,
    epsrel: float = 1e-11,
    points=None,
) -> float:
    """Integral of weight(theta, y) nu(y) over the shell a <= |y| < b.

    The radial integral is done with adaptive quadrature along each ray of a
    sphere rule; `weight` receives the unit direction and the radii.

    Raises:
        QuadratureError: If a radial quadrature reports failure
    """
    if not model.has_jumps or b <= a:
        return 0.0
    nodes, weights = sphere_quadrature(model.d, n_dirs)
    total = 0.0
    for theta, w in zip(nodes, weights):
        if model.separable and float(model.g(theta[None, :])[0]) == 0.0:
            continue

        def integrand(rho, theta=theta):
            y = np.array([rho])
            return float(
                weight(theta, y)[0] * model.ray(theta, y)[0] * rho ** (model.d - 1)
            )

        kwargs = dict(epsabs=epsabs, epsrel=epsrel, limit=QUAD_LIMIT)
        if points is not None and np.isfinite(b):
            kwargs["points"] = [p for p in points if a < p < b] or None
        value, error = integrate.quad(integrand, a, b, **kwargs)
        if not np.isfinite(value):
            raise QuadratureError(
                f"Radial quadrature on [{a}, {b}] returned {value}", achieved=error
            )
        total += w * value
    return float(total)


def tail_mass(model: LevyModel, r: float) -> float:
    """nu({|y| >= r})."""
    return integrate_polar(model, lambda theta, y: np.ones_like(y), r, np.inf)


def first_moment(model: LevyModel, a: float, b: float) -> np.ndarray:
    """Vector integral of y nu(y) over a <= |y| < b."""
    return np.array(
        [
            integrate_polar(model, lambda theta, y, k=k: theta[k] * y, a, b)
            for k in range(model.d)
        ]
    )
