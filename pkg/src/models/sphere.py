"""Spherical densities g on the unit sphere and quadrature rules on it."""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from ..core.exceptions import ConfigException

logger = logging.getLogger(__name__)

# Uniform angular nodes used by default in d=2 (multiple of 4 so quadrant
# boundaries fall on cell boundaries).
DEFAULT_SPHERE_NODES = 512


def sphere_quadrature(d: int, n: int = DEFAULT_SPHERE_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """Return nodes (K, d) and weights (K,) integrating over S^{d-1}.

    In d=1 the sphere is {-1, +1} with counting measure. In d=2 a uniform
    midpoint rule in the angle is used, in d=3 a Gauss-Legendre rule in the
    polar cosine times a uniform rule in the azimuth.

    Raises:
        ConfigException: If d is outside 1..3
    """
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if d == 2:
        phi = (np.arange(n) + 0.5) * 2.0 * np.pi / n
        nodes = np.column_stack([np.cos(phi), np.sin(phi)])
        return nodes, np.full(n, 2.0 * np.pi / n)
    if d == 3:
        n_polar = max(n // 4, 8)
        n_azimuth = max(n // 2, 16)
        cos_t, w_t = np.polynomial.legendre.leggauss(n_polar)
        phi = (np.arange(n_azimuth) + 0.5) * 2.0 * np.pi / n_azimuth
        sin_t = np.sqrt(1.0 - cos_t**2)
        nodes = np.column_stack(
            [
                np.outer(sin_t, np.cos(phi)).ravel(),
                np.outer(sin_t, np.sin(phi)).ravel(),
                np.repeat(cos_t, n_azimuth),
            ]
        )
        weights = np.outer(w_t, np.full(n_azimuth, 2.0 * np.pi / n_azimuth)).ravel()
        return nodes, weights
    raise ConfigException(f"Spherical quadrature is available for d <= 3, got d={d}")


def sample_sphere(d: int, n: int, seed: int = 0) -> np.ndarray:
    """Draw n deterministic pseudo-random unit vectors in R^d."""
    rng = np.random.default_rng(seed)
    if d == 1:
        return rng.choice([-1.0, 1.0], size=(n, 1))
    points = rng.standard_normal((n, d))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def _as_directions(theta: np.ndarray, d: int) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.ndim == 1:
        theta = theta.reshape(-1, d) if d > 1 else theta.reshape(-1, 1)
    return theta


@dataclass(frozen=True, eq=False)
class SphericalDensity:
    """Nonnegative bounded function g on S^{d-1}.

    The `kind` and `values` fields are what the configuration layer writes
    back out; `func` is the evaluable map. Directions listed in
    `discontinuities` (angles in d=2) are skipped, with an angular `buffer`,
    by the ratio checks.
    """

    d: int
    func: Callable[[np.ndarray], np.ndarray]
    upper: float
    kind: str = "custom"
    values: Tuple[float, ...] = ()
    lower: Optional[float] = None
    discontinuities: Tuple[float, ...] = ()
    buffer: float = 0.05

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(_as_directions(theta, self.d)), dtype=float)

    @property
    def is_isotropic(self) -> bool:
        return self.kind == "constant"

    @property
    def is_symmetric(self) -> bool:
        """True when g(-theta) = g(theta)."""
        if self.kind in ("constant", "quadrant"):
            return True
        if self.kind == "two_point":
            return self.values[0] == self.values[1]
        nodes, _ = sphere_quadrature(self.d, 64)
        return bool(np.allclose(self(nodes), self(-nodes)))

    def integral(self, n: int = DEFAULT_SPHERE_NODES) -> float:
        """Quadrature of g over the sphere (nondegeneracy functional)."""
        nodes, weights = sphere_quadrature(self.d, n)
        return float(np.sum(weights * self(nodes)))

    def mean_direction(self, n: int = DEFAULT_SPHERE_NODES) -> np.ndarray:
        """Vector integral of theta * g(theta) over the sphere."""
        nodes, weights = sphere_quadrature(self.d, n)
        return (weights * self(nodes)) @ nodes

    def near_discontinuity(self, theta: np.ndarray) -> np.ndarray:
        """Boolean mask of directions within the buffer of a declared jump of g."""
        theta = _as_directions(theta, self.d)
        if self.d != 2 or not self.discontinuities:
            return np.zeros(len(theta), dtype=bool)
        angles = np.arctan2(theta[:, 1], theta[:, 0])
        mask = np.zeros(len(theta), dtype=bool)
        for jump in self.discontinuities:
            gap = np.abs(np.angle(np.exp(1j * (angles - jump))))
            mask |= gap < self.buffer
        return mask

    def validate(self, n_samples: int = 1000) -> None:
        """Check 0 <= g <= upper on samples and the nondegeneracy integral.

        Raises:
            ConfigException: If g is negative, exceeds its bound or integrates to 0
        """
        sample = sample_sphere(self.d, n_samples, seed=7)
        values = self(sample)
        if np.any(values < 0) or np.any(values > self.upper * (1 + 1e-12)):
            raise ConfigException(
                f"Spherical density violates 0 <= g <= {self.upper} on sampled directions"
            )
        if self.integral() <= 0:
            raise ConfigException("Spherical density is degenerate: integral of g is 0")

    def to_config(self) -> Dict[str, Any]:
        if self.kind == "custom":
            raise ConfigException("Custom spherical densities cannot be serialized")
        return {"type": self.kind, "values": [float(v) for v in self.values]}

    # Constructors

    @classmethod
    def constant(cls, d: int, value: float) -> "SphericalDensity":
        value = float(value)
        return cls(
            d=d,
            func=lambda theta: np.full(len(theta), value),
            upper=value,
            kind="constant",
            values=(value,),
            lower=value,
        )

    @classmethod
    def two_point(cls, plus: float, minus: float) -> "SphericalDensity":
        """Density on S^0 = {-1, +1} with g(+1) = plus and g(-1) = minus."""
        plus, minus = float(plus), float(minus)
        return cls(
            d=1,
            func=lambda theta: np.where(theta[:, 0] > 0, plus, minus),
            upper=max(plus, minus),
            kind="two_point",
            values=(plus, minus),
            lower=min(plus, minus),
        )

    @classmethod
    def quadrant(cls, same_sign: float, opposite_sign: float) -> "SphericalDensity":
        """Piecewise constant g in d=2: `same_sign` where theta1*theta2 >= 0."""
        same_sign, opposite_sign = float(same_sign), float(opposite_sign)
        return cls(
            d=2,
            func=lambda theta: np.where(
                theta[:, 0] * theta[:, 1] >= 0, same_sign, opposite_sign
            ),
            upper=max(same_sign, opposite_sign),
            kind="quadrant",
            values=(same_sign, opposite_sign),
            lower=min(same_sign, opposite_sign),
            discontinuities=(0.0, np.pi / 2, np.pi, -np.pi / 2),
        )

    @classmethod
    def from_config(cls, d: int, section: Dict[str, Any]) -> "SphericalDensity":
        """Build g from a config section {type, values} (or {type, value})."""
        kind = section.get("type", "constant")
        values = section.get("values", [section.get("value", 1.0)])
        if kind == "constant":
            return cls.constant(d, values[0])
        if kind == "two_point":
            if d != 1 or len(values) != 2:
                raise ConfigException("two_point g needs d=1 and two values [plus, minus]")
            return cls.two_point(*values)
        if kind == "quadrant":
            if d != 2 or len(values) != 2:
                raise ConfigException(
                    "quadrant g needs d=2 and two values [same_sign, opposite_sign]"
                )
            return cls.quadrant(*values)
        raise ConfigException(f"Unknown spherical density type: {kind}")
