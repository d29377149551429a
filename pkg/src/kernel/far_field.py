"""Point evaluation of p_t(x) far from the origin."""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from ..convolve.grid import Grid
from ..convolve.pairs import pair_integral
from ..convolve.restricted import RestrictedMeasure
from ..core.exceptions import ConfigException, DivergentMoment, FarFieldRefused
from ..models.levy_model import LevyModel
from ..models.tilting import tilt
from ..symbol.maximal import drift_correction, h_of_t, psi_max
from ..symbol.moments import exp_moment_exponent, relativistic_moment_exponent
from .field import KernelField
from .oracle import cauchy_kernel, oracle_kind, relativistic_log_oracle
from .spectral import heat_kernel_spectral, small_jump_kernel

logger = logging.getLogger(__name__)

METHODS = ("auto", "oracle", "spectral", "decomposition")
DEFAULT_PROBE_RADIUS = 64.0
WINDOW_FACTOR = 8.0
GRID_POINTS = {1: 2**16, 2: 2**10, 3: 2**7}
TILT_BACKOFF = 0.98
ROUNDOFF = 1e-13
SPLINE_POINTS = 17
SUPPORT_FLOOR = 1e-6
TERM_SHARE_LIMIT = 0.1
USABLE_FRACTION = 0.9


@dataclass(frozen=True)
class FarFieldValue:
    """p_t(x) with its logarithm and an estimated relative accuracy."""

    x: Tuple[float, ...]
    log_value: float
    accuracy: float
    method: str

    @property
    def value(self) -> float:
        return float(np.exp(self.log_value))


class FarFieldEvaluator:
    """Evaluates p_t at single points, caching kernels between calls.

    Methods: "oracle" (closed forms), "spectral" (grid kernel with image
    correction, exponentially tilted towards x when kappa > 0) and
    "decomposition" (d = 1, kappa = 0: small-jump kernel convolved with the
    compound Poisson series whose second term is a direct pair quadrature).
    "auto" picks the first applicable of oracle, decomposition, spectral.
    """

    def __init__(
        self,
        model: LevyModel,
        t: float,
        method: str = "auto",
        grid: Optional[Grid] = None,
        probe_radius: float = DEFAULT_PROBE_RADIUS,
    ):
        if method not in METHODS:
            raise ConfigException(f"Unknown far-field method {method}; choose from {METHODS}")
        if t <= 0:
            raise ConfigException(f"Time must be positive, got {t}")
        self.model = model
        self.t = t
        self.method = self._resolve(method)
        self.fallback = method == "auto" and self.method == "decomposition"
        self.grid = grid if grid is not None else Grid(
            d=model.d, n=GRID_POINTS[model.d], length=WINDOW_FACTOR * probe_radius
        )
        self._kernels: Dict[Tuple[float, ...], Tuple[KernelField, np.ndarray, float]] = {}
        self._decomposition = None

    def _resolve(self, method: str) -> str:
        model = self.model
        if method == "oracle" and not oracle_kind(model):
            raise ConfigException(f"No oracle for family {model.family}")
        decomposable = model.d == 1 and model.kappa == 0 and model.has_jumps and not model.finite
        if method == "decomposition" and not decomposable:
            raise ConfigException("The far-field decomposition needs d = 1, kappa = 0 and infinite nu")
        if method != "auto":
            return method
        if oracle_kind(model):
            return "oracle"
        if decomposable:
            return "decomposition"
        return "spectral"

    def __call__(self, x: np.ndarray, direction: Optional[np.ndarray] = None) -> FarFieldValue:
        """p_t(x); `direction` overrides the tilt direction x/|x| of the spectral method."""
        x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(self.model.d)
        if self.method == "oracle":
            return self._oracle(x)
        if self.method == "decomposition":
            try:
                return self._decomposed(x)
            except FarFieldRefused as e:
                if not self.fallback:
                    raise
                logger.debug(f"Decomposition refused, using the spectral kernel: {e}")
        return self._spectral(x, direction)

    def _oracle(self, x: np.ndarray) -> FarFieldValue:
        kind = oracle_kind(self.model)
        if kind == "cauchy":
            scale = float(psi_max(self.model, 1.0))
            log_value = float(np.log(cauchy_kernel(x, self.t, self.model.d, scale)[0]))
        else:
            log_value = float(relativistic_log_oracle(self.model.d, self.model.params["m"], self.t, x)[0])
        return FarFieldValue(tuple(x), log_value, 1e-8, "oracle")

    def _tilt_for(self, direction: np.ndarray) -> Tuple[KernelField, np.ndarray, float]:
        """Kernel of the model tilted along `direction`, the tilt and t * psi~(tilt)."""
        model = self.model
        norm = np.linalg.norm(direction)
        theta = direction / norm if norm > 0 else np.eye(model.d)[0]
        key = tuple(np.round(theta, 12)) if model.kappa > 0 else ()
        if key in self._kernels:
            return self._kernels[key]
        if model.kappa == 0:
            zeta = np.zeros(model.d)
            kernel = heat_kernel_spectral(model, self.t, self.grid)
            entry = (kernel, zeta, 0.0)
        else:
            zeta = model.kappa * theta
            try:
                exponent = self._moment_exponent(zeta)
            except DivergentMoment:
                zeta = TILT_BACKOFF * zeta
                logger.warning(
                    f"Exponential moment diverges at kappa; tilting with {TILT_BACKOFF} kappa instead"
                )
                exponent = self._moment_exponent(zeta)
            kernel = heat_kernel_spectral(tilt(model, zeta), self.t, self.grid)
            entry = (kernel, zeta, self.t * exponent)
        self._kernels[key] = entry
        return entry

    def _moment_exponent(self, zeta: np.ndarray) -> float:
        if self.model.family == "relativistic":
            return relativistic_moment_exponent(self.model, zeta)
        return exp_moment_exponent(self.model, zeta)

    def _spectral(self, x: np.ndarray, direction: Optional[np.ndarray] = None) -> FarFieldValue:
        if np.abs(x).max() > USABLE_FRACTION * self.grid.length:
            raise FarFieldRefused(
                f"|x|={np.linalg.norm(x):.4g} lies outside the usable grid window "
                f"(L={self.grid.length}); raise the probe radius"
            )
        kernel, zeta, t_psi = self._tilt_for(x if direction is None else np.asarray(direction, dtype=float))
        q = float(kernel.value_at(x[None, :])[0])
        floor = ROUNDOFF * kernel.field.sup
        if q <= floor:
            raise FarFieldRefused(f"Kernel value at x={x.tolist()} is below the FFT round-off floor")
        log_value = -float(zeta @ x) - t_psi + np.log(q)
        return FarFieldValue(tuple(x), log_value, min(1.0, floor / q + kernel.mass_defect), "spectral")

    def _decomposition_parts(self):
        if self._decomposition is None:
            model, t = self.model, self.t
            r = h_of_t(model, t)
            measure = RestrictedMeasure(model, r)
            lam = small_jump_kernel(model, r, t, include_gaussian=model.elliptic)
            keep = lam.values > SUPPORT_FLOOR * lam.field.sup
            nodes = lam.grid.axis()[keep]
            weights = lam.values[keep] * lam.grid.spacing
            drift = drift_correction(model, r)[0]
            self._decomposition = (r, measure, lam, nodes, weights, drift)
            logger.debug(
                f"Far-field decomposition: r={r:.4g}, |nu_r|={measure.mass:.6g}, "
                f"small-jump support {np.abs(nodes).max():.4g}"
            )
        return self._decomposition

    def _decomposed(self, x: np.ndarray) -> FarFieldValue:
        r, measure, lam, nodes, weights, drift = self._decomposition_parts()
        t, mass = self.t, measure.mass
        center = float(x[0]) - t * drift
        width = float(np.abs(nodes).max())
        if abs(center) - width <= 2.0 * r:
            raise FarFieldRefused(f"x={x.tolist()} is inside the small-jump support; use the spectral method")

        log_nu = measure.log_density
        log_scale = float(log_nu(np.array([center]))[0])
        probes = np.linspace(center - width, center + width, SPLINE_POINTS)
        second = np.array([pair_integral(log_nu, log_nu, y, r, log_scale) for y in probes])
        spline = CubicSpline(probes, second)
        points = center - nodes
        first = np.exp(log_nu(points) - log_scale)
        higher = np.expm1(t * mass) - t * mass
        p_bar = np.exp(-t * mass) * (t * first + 0.5 * t * t * spline(points) + t * higher * first)
        value = float(weights @ p_bar)

        nu_center = 1.0
        nu2_center = float(spline(center))
        c1 = t * nu_center
        c2 = 0.5 * t * t * nu2_center
        c3 = t * higher * nu_center
        share = c3 / (c1 + c2 + c3)
        deviation = abs(nu2_center / (2.0 * mass * nu_center) - 1.0)
        accuracy = share * max(2.0 * deviation, 1e-6) + 1e-6 + lam.mass_defect
        if share > TERM_SHARE_LIMIT and accuracy > TERM_SHARE_LIMIT:
            raise FarFieldRefused(
                f"Series terms n >= 3 carry {share:.1%} of p_bar at x={x.tolist()} and their "
                f"single-jump approximation is off by {deviation:.1%}"
            )
        if value <= 0:
            raise FarFieldRefused(f"Decomposition returned a nonpositive value at x={x.tolist()}")
        return FarFieldValue(tuple(x), float(np.log(value)) + log_scale, accuracy, "decomposition")


def far_field(
    model: LevyModel,
    t: float,
    x: np.ndarray,
    method: str = "auto",
    grid: Optional[Grid] = None,
) -> FarFieldValue:
    """p_t(x) at a single far point with an accuracy estimate.

    Raises:
        FarFieldRefused: If the requested method cannot certify the value
        ConfigException: If the method does not apply to the model
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    probe = max(DEFAULT_PROBE_RADIUS, float(np.linalg.norm(x)))
    return FarFieldEvaluator(model, t, method, grid, probe_radius=probe)(x)
