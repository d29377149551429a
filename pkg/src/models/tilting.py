"""Exponential tilting of Levy models."""

import logging

import numpy as np

from ..core.exceptions import ConfigException
from .levy_model import LevyModel, integrate_polar

logger = logging.getLogger(__name__)


def tilt(model: LevyModel, zeta: np.ndarray) -> LevyModel:
    """Return the tilted model with density e^{<zeta, y>} nu(y).

    The drift becomes b + 2 A zeta + int_{|y|<1} y (e^{<zeta,y>} - 1) nu(dy), so
    that the tilted kernel q_t satisfies
    p_t(x) = e^{-<zeta, x>} e^{-t psi~(zeta)} q_t(x).

    Args:
        model: Model with a finite exponential moment at zeta
        zeta: Tilting vector

    Returns:
        The tilted LevyModel (not separable, no dominating profile)

    Raises:
        ConfigException: If zeta has the wrong shape
    """
    zeta = np.atleast_1d(np.asarray(zeta, dtype=float))
    if zeta.shape != (model.d,):
        raise ConfigException(f"Tilt vector must have shape ({model.d},)")
    if not np.any(zeta):
        return model

    drift = model.b + 2.0 * model.A @ zeta
    mass = None
    log_nu_fn = None
    if model.has_jumps:
        for k in range(model.d):
            drift[k] += integrate_polar(
                model,
                lambda theta, y, k=k: theta[k] * y * np.expm1(float(theta @ zeta) * y),
                0.0,
                1.0,
            )
        base = model.log_nu_fn
        log_nu_fn = lambda x: base(x) + x @ zeta
        if model.finite:
            mass = model.mass + integrate_polar(
                model, lambda theta, y: np.expm1(float(theta @ zeta) * y), 0.0, np.inf
            )
    logger.debug(f"Tilted {model.family} model by zeta={zeta.tolist()}, drift={drift.tolist()}")

    params = dict(model.params)
    params["tilt"] = zeta.tolist()
    return LevyModel(
        d=model.d,
        b=drift,
        A=model.A,
        family=f"tilted-{model.family}",
        log_nu_fn=log_nu_fn,
        alpha=model.alpha,
        mass=mass,
        singularity=model.singularity,
        params=params,
    )
