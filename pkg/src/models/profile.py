"""Radial profiles f and the three-case classification of their tails."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from ..core.exceptions import ConfigException

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    POLY_OK = "POLY_OK"
    STRETCHED_OK = "STRETCHED_OK"
    EXP_OK = "EXP_OK"
    FAILS = "FAILS"


@dataclass(frozen=True)
class ProfileClass:
    """Tail parameters (m, beta, delta) in dimension d with their verdict on K(r) -> 0."""

    m: float
    beta: float
    delta: float
    d: int
    verdict: Verdict

    @property
    def ok(self) -> bool:
        return self.verdict is not Verdict.FAILS


def classify_profile(m: float, beta: float, delta: float, d: int) -> ProfileClass:
    """Classify the tail e^{-m s^beta} s^{-delta} in dimension d.

    Args:
        m: Exponential rate
        beta: Stretch exponent
        delta: Polynomial order
        d: Dimension

    Returns:
        ProfileClass with one of POLY_OK, STRETCHED_OK, EXP_OK or FAILS

    Raises:
        ConfigException: If a parameter is negative or d < 1
    """
    if m < 0 or beta < 0 or delta < 0 or d < 1:
        raise ConfigException(
            f"Profile parameters must satisfy m, beta, delta >= 0 and d >= 1, "
            f"got m={m}, beta={beta}, delta={delta}, d={d}"
        )
    if m == 0 and delta > d:
        verdict = Verdict.POLY_OK
    elif m > 0 and 0 < beta < 1:
        verdict = Verdict.STRETCHED_OK
    elif m > 0 and beta == 1 and delta > (d + 1) / 2:
        verdict = Verdict.EXP_OK
    else:
        verdict = Verdict.FAILS
    return ProfileClass(m=m, beta=beta, delta=delta, d=d, verdict=verdict)


@dataclass(frozen=True)
class RadialProfile:
    """Profile f(s) = 1_{[0,1]}(s) eta(s) + c0 1_{(1,inf)}(s) e^{-m s^beta} s^{-delta}.

    The inner part is the power law eta(s) = eta_value * s^{-eta_exponent}
    (eta_exponent = 0 gives a bounded, finite-mass profile). When c0 is not
    given it is matched so that f is continuous at s = 1.
    """

    d: int
    eta_value: float = 1.0
    eta_exponent: float = 0.0
    m: float = 0.0
    beta: float = 0.0
    delta: float = 0.0
    c0: Optional[float] = None

    def __post_init__(self):
        if self.c0 is None:
            object.__setattr__(self, "c0", self.eta_value * np.exp(self.m))
        if self.eta_value <= 0 or self.c0 <= 0:
            raise ConfigException("Profile constants eta_value and c0 must be positive")
        if self.eta_exponent < 0 or self.eta_exponent >= self.d + 2:
            raise ConfigException(
                f"eta exponent must lie in [0, d+2) for a Levy measure, got {self.eta_exponent}"
            )

    @property
    def doubling_constant(self) -> float:
        """c1 with eta(r) <= c1 eta(2r)."""
        return 2.0**self.eta_exponent

    @property
    def finite_mass(self) -> bool:
        return self.eta_exponent < self.d

    @property
    def classification(self) -> ProfileClass:
        return classify_profile(self.m, self.beta, self.delta, self.d)

    def eta(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            return self.eta_value * s ** (-self.eta_exponent)

    def log_f(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            inner = np.log(self.eta_value) - self.eta_exponent * np.log(s)
            outer = np.log(self.c0) - self.m * s**self.beta - self.delta * np.log(s)
        return np.where(s <= 1.0, inner, outer)

    def f(self, s: np.ndarray) -> np.ndarray:
        return np.exp(self.log_f(s))

    def validate(self, n_samples: int = 400, tolerance: float = 1e-9) -> None:
        """Check monotonicity, the inner doubling bound and the match at s = 1.

        Raises:
            ConfigException: If one of the invariants fails on the samples
        """
        s = np.geomspace(1e-4, 1e3, n_samples)
        values = self.f(s)
        if np.any(np.diff(values) > tolerance * values[:-1]):
            raise ConfigException("Radial profile f is not nonincreasing")
        r = np.geomspace(1e-4, 0.5, n_samples // 4, endpoint=False)
        if np.any(self.eta(r) > self.doubling_constant * self.eta(2 * r) * (1 + tolerance)):
            raise ConfigException("Radial profile eta violates its doubling bound")
        outer_at_one = self.c0 * np.exp(-self.m)
        if outer_at_one > self.eta_value * (1 + tolerance):
            raise ConfigException(
                f"Profile outer part c0*e^-m = {outer_at_one} exceeds eta(1) = {self.eta_value}"
            )

    def to_config(self) -> Dict[str, Any]:
        return {
            "eta": {
                "type": "power" if self.eta_exponent else "constant",
                "value": float(self.eta_value),
                "exponent": float(self.eta_exponent),
            },
            "m": float(self.m),
            "beta": float(self.beta),
            "delta": float(self.delta),
            "c0": float(self.c0),
        }

    @classmethod
    def from_config(cls, d: int, section: Dict[str, Any]) -> "RadialProfile":
        eta = section.get("eta", {})
        return cls(
            d=d,
            eta_value=float(eta.get("value", 1.0)),
            eta_exponent=float(eta.get("exponent", 0.0)) if eta.get("type", "power") != "constant" else 0.0,
            m=float(section.get("m", 0.0)),
            beta=float(section.get("beta", 0.0)),
            delta=float(section.get("delta", 0.0)),
            c0=section.get("c0"),
        )
