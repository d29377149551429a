"""Far-field ratio series for heat kernels, convolution powers and compound Poisson laws."""

import logging
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ..convolve.grid import Grid
from ..convolve.ops import compound_poisson, nfold
from ..convolve.pairs import pair_integral
from ..convolve.restricted import RestrictedMeasure, exp_moment_integral, sample
from ..core.exceptions import ConfigException, DivergentMoment, FarFieldRefused, QuadratureError
from ..kernel.far_field import DEFAULT_PROBE_RADIUS, FarFieldEvaluator
from ..models.levy_model import LevyModel
from ..models.tilting import tilt
from ..symbol.maximal import h_of_t
from .limits import default_probe_radii, predicted_limit, probe_radii, unit
from .series import RatioSeries

logger = logging.getLogger(__name__)

MAX_CONVOLUTION_POWER = 4
SERIES_GRID_POINTS = 2**16
WINDOW_FACTOR = 8.0
TILT_BACKOFF = 0.98
ROUNDOFF = 1e-13
PAIR_ACCURACY = 1e-9

PointResult = Tuple[float, float]


def _prepare(model: LevyModel, theta, y, s_list, default: Callable[[], np.ndarray]):
    theta = unit(theta, model.d)
    y = np.zeros(model.d) if y is None else np.atleast_1d(np.asarray(y, dtype=float)).reshape(model.d)
    s = np.asarray(default() if s_list is None else s_list, dtype=float)
    return theta, y, s


def _collect(
    kind: str,
    s: np.ndarray,
    point: Callable[[float], PointResult],
    limit: Optional[float],
    params: dict,
) -> RatioSeries:
    """Evaluate `point` at every radius, recording refusals instead of dropping them."""
    ratios = np.full(len(s), np.nan)
    accuracy = np.zeros(len(s))
    refused = []
    for i, radius in enumerate(s):
        try:
            ratios[i], accuracy[i] = point(float(radius))
        except (FarFieldRefused, QuadratureError) as e:
            refused.append({"s": float(radius), "reason": str(e)})
            logger.warning(f"{kind}: point s={radius:.4g} refused: {e}")
    return RatioSeries(
        kind=kind, s=s, ratios=ratios, accuracy=accuracy, limit=limit, params=params, refused=refused
    )


def _limit_or_none(compute: Callable[[], float], params: dict) -> Optional[float]:
    try:
        return compute()
    except DivergentMoment as e:
        params["limit_error"] = str(e)
        logger.warning(f"No predicted limit: {e}")
        return None


def _line_grid(s: np.ndarray, y: np.ndarray, grid: Optional[Grid]) -> Grid:
    if grid is not None:
        return grid
    reach = float(s.max()) + float(np.abs(y).max())
    return Grid(d=1, n=SERIES_GRID_POINTS, length=WINDOW_FACTOR * reach)


def kernel_ratio_series(
    model: LevyModel,
    t: float,
    theta: np.ndarray,
    y: Optional[np.ndarray] = None,
    s_list: Optional[Sequence[float]] = None,
    method: str = "auto",
    grid: Optional[Grid] = None,
    evaluator: Optional[FarFieldEvaluator] = None,
) -> RatioSeries:
    """R(s) = p_t(s theta - y) / (t nu(s theta)) with the predicted limit attached.

    Args:
        model: Levy model with jumps
        t: Time > 0
        theta: Direction in the cone of nu
        y: Shift (default 0)
        s_list: Increasing probe radii (default: default_probe_radii)
        method: Far-field method passed to FarFieldEvaluator
        grid: Grid for the spectral method
        evaluator: Reused evaluator (overrides method and grid)

    Returns:
        RatioSeries of kind "kernel"
    """
    theta, y, s = _prepare(model, theta, y, s_list, lambda: default_probe_radii(model, t))
    if evaluator is None:
        reach = max(DEFAULT_PROBE_RADIUS, float(s.max()) + float(np.linalg.norm(y)))
        evaluator = FarFieldEvaluator(model, t, method, grid, probe_radius=reach)
    params = {"t": t, "theta": theta.tolist(), "y": y.tolist(), "method": evaluator.method}
    limit = _limit_or_none(lambda: predicted_limit(model, t, theta, y), params)
    log_t = np.log(t)

    def point(radius: float) -> PointResult:
        log_nu = float(model.log_nu(radius * theta[None, :])[0])
        if not np.isfinite(log_nu):
            raise FarFieldRefused(f"nu vanishes at s={radius} along theta={theta.tolist()}")
        value = evaluator(radius * theta - y, direction=theta)
        return float(np.exp(value.log_value - log_t - log_nu)), value.accuracy

    return _collect("kernel", s, point, limit, params)


def convolution_limit(model: LevyModel, r: float, n: int, theta: np.ndarray, y: np.ndarray) -> float:
    """e^{kappa <theta, y>} n (int e^{kappa <theta, z>} nu_r(z) dz)^{n-1}.

    Raises:
        DivergentMoment: If the exponential moment of nu_r diverges
    """
    shift = np.exp(model.kappa * float(theta @ y))
    if n == 1:
        return float(shift)
    return float(shift * n * exp_moment_integral(model, r, theta, n - 1))


def convolution_ratio_series(
    model: LevyModel,
    r: float,
    n: int,
    theta: np.ndarray,
    y: Optional[np.ndarray] = None,
    s_list: Optional[Sequence[float]] = None,
    grid: Optional[Grid] = None,
) -> RatioSeries:
    """R(s) = nu_r^{n*}(s theta - y) / nu_r(s theta) in d = 1.

    n = 1 and n = 2 are evaluated directly (n = 2 by the pair quadrature);
    n = 3, 4 use the n-fold lattice convolution of nu_r, tilted by
    kappa theta when kappa > 0 so that the far values stay in range.

    Raises:
        ConfigException: If d != 1, r <= 0 or n is outside 1..4
    """
    if model.d != 1:
        raise ConfigException("Convolution ratio series are computed in d = 1")
    if r <= 0 or not 1 <= n <= MAX_CONVOLUTION_POWER:
        raise ConfigException(f"Need r > 0 and 1 <= n <= {MAX_CONVOLUTION_POWER}, got r={r}, n={n}")
    theta, y, s = _prepare(model, theta, y, s_list, lambda: probe_radii(model, r))
    params = {"r": r, "n": n, "theta": theta.tolist(), "y": y.tolist()}
    limit = _limit_or_none(lambda: convolution_limit(model, r, n, theta, y), params)
    measure = RestrictedMeasure(model, r)
    log_nu = measure.log_density

    def log_reference(radius: float) -> float:
        value = float(log_nu(np.array([radius * theta[0]]))[0])
        if not np.isfinite(value):
            raise FarFieldRefused(f"nu_r vanishes at s={radius}")
        return value

    if n <= 2:

        def point(radius: float) -> PointResult:
            x = radius * theta[0] - y[0]
            scale = log_reference(radius)
            if n == 1:
                return float(np.exp(log_nu(np.array([x]))[0] - scale)), 1e-14
            return pair_integral(log_nu, log_nu, x, r, scale), PAIR_ACCURACY

        return _collect("convolution", s, point, limit, params)

    zeta = model.kappa * theta if limit is not None else TILT_BACKOFF * model.kappa * theta
    tilted = tilt(model, zeta)
    grid = _line_grid(s, y, grid)
    power = nfold(sample(RestrictedMeasure(tilted, r), grid, boundary_weight=True), n, mass_rtol=None)
    floor = ROUNDOFF * power.sup
    params["grid"] = {"n": grid.n, "length": grid.length}

    def lattice_point(radius: float) -> PointResult:
        x = radius * theta[0] - y[0]
        q = float(power.at(np.array([x]))[0])
        if q <= floor:
            raise FarFieldRefused(f"Convolution power at x={x:.4g} is below the FFT round-off floor")
        log_value = np.log(q) - float(zeta[0]) * x - log_reference(radius)
        return float(np.exp(log_value)), floor / q

    return _collect("convolution", s, lattice_point, limit, params)


def compound_ratio_series(
    model: LevyModel,
    t: float,
    theta: np.ndarray,
    y: Optional[np.ndarray] = None,
    s_list: Optional[Sequence[float]] = None,
    grid: Optional[Grid] = None,
    tolerance: float = 1e-12,
) -> RatioSeries:
    """R(s) = p_bar_t(s theta - y) / (t nu(s theta)) in d = 1.

    p_bar_t = e^{-t|nu_r|} sum_{n>=1} t^n nu_r^{n*} / n! is computed on a line
    grid from the measure tilted by kappa theta; the predicted limit is
    e^{kappa <theta, y>} exp(t int (e^{kappa <theta, z>} - 1) nu_r(z) dz).
    r = h(t) for infinite Levy measures; finite ones use all jumps (r = 0),
    which gives the absolutely continuous part p~_t of P_t.

    Raises:
        ConfigException: If d != 1
    """
    if model.d != 1:
        raise ConfigException("Compound Poisson ratio series are computed in d = 1")
    theta, y, s = _prepare(model, theta, y, s_list, lambda: default_probe_radii(model, t))
    r = 0.0 if model.finite else h_of_t(model, t)
    measure = RestrictedMeasure(model, r)
    params = {"t": t, "r": r, "theta": theta.tolist(), "y": y.tolist()}

    zeta = model.kappa * theta
    limit = None
    if model.kappa == 0:
        limit = 1.0
    else:
        try:
            tilted_mass = tilt(model, zeta).mass if r == 0 else exp_moment_integral(model, r, theta)
            limit = float(np.exp(float(zeta @ y) + t * (tilted_mass - measure.mass)))
        except DivergentMoment as e:
            params["limit_error"] = str(e)
            logger.warning(f"No predicted compound Poisson limit: {e}")
            zeta = TILT_BACKOFF * zeta

    tilted = RestrictedMeasure(tilt(model, zeta), r)
    grid = _line_grid(s, y, grid)
    series = compound_poisson(
        sample(tilted, grid, boundary_weight=True),
        t,
        tolerance=tolerance,
        mass_rtol=None,
        total_mass=tilted.mass,
    )
    floor = ROUNDOFF * series.sup
    offset = t * (tilted.mass - measure.mass) - np.log(t)
    params["grid"] = {"n": grid.n, "length": grid.length}
    logger.debug(f"Compound Poisson ratios: r={r:.4g}, |nu_r|={measure.mass:.6g}")

    def point(radius: float) -> PointResult:
        x = radius * theta[0] - y[0]
        q = float(series.at(np.array([x]))[0])
        if q <= floor:
            raise FarFieldRefused(f"Series value at x={x:.4g} is below the FFT round-off floor")
        log_nu = float(model.log_nu(np.array([[radius * theta[0]]]))[0])
        log_value = offset + np.log(q) - float(zeta[0]) * x - log_nu
        return float(np.exp(log_value)), floor / q + tolerance

    return _collect("compound", s, point, limit, params)
