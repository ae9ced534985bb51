"""Domain types, model coefficients and shared validation.

Log-price coordinates are used throughout: ``x = ln S``.  Barriers carried by
:class:`StepOptionSpec` are log-prices as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import ndtr

TRADING_DAYS = 250


class StepOptionError(ValueError):
    """Base class for all errors raised by this package."""


class ParameterError(StepOptionError):
    pass


class UnsupportedRegionError(StepOptionError):
    pass


class NoBoundStateError(StepOptionError):
    pass


class ApproximationDomainError(StepOptionError):
    pass


class ContractError(StepOptionError):
    pass


class OptionKind(str, Enum):
    PSO_UP_OUT = "pso"
    PDBS = "pdbs"
    UOSB = "uosb"
    SDB = "sdb"
    VANILLA = "vanilla"

    @property
    def is_step(self) -> bool:
        return self in (OptionKind.PSO_UP_OUT, OptionKind.PDBS)

    @property
    def is_double(self) -> bool:
        return self in (OptionKind.PDBS, OptionKind.SDB)


@dataclass(frozen=True)
class MarketParams:
    r: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ParameterError(f"sigma must be > 0, got {self.sigma}")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ParameterError(f"r must be >= 0, got {self.r}")


@dataclass(frozen=True)
class ModelCoefficients:
    alpha: float
    gamma: float


@dataclass(frozen=True)
class LogSpot:
    x: float

    @classmethod
    def from_price(cls, s: float) -> "LogSpot":
        if not s > 0:
            raise ParameterError(f"spot must be > 0, got {s}")
        return cls(math.log(s))

    @property
    def s(self) -> float:
        return math.exp(self.x)


@dataclass(frozen=True)
class StepOptionSpec:
    """Contract terms.

    ``upper`` is the single barrier B for PSO/UOSB and the upper barrier b for
    the double-barrier kinds; ``lower`` is a, used by PDBS/SDB only.  Both are
    log-prices.  ``v0`` is the knock-out rate per year.
    """

    kind: OptionKind
    strike: float
    tau: float
    upper: Optional[float] = None
    lower: Optional[float] = None
    v0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", OptionKind(self.kind))
        if not self.strike > 0:
            raise ParameterError(f"strike must be > 0, got {self.strike}")
        if not self.tau > 0:
            raise ParameterError(f"tau must be > 0, got {self.tau}")
        if self.v0 < 0:
            raise ParameterError(f"v0 must be >= 0, got {self.v0}")
        if self.kind is not OptionKind.VANILLA and self.upper is None:
            raise ParameterError(f"{self.kind.value} needs an upper barrier")
        if self.kind.is_double:
            if self.lower is None:
                raise ParameterError(f"{self.kind.value} needs a lower barrier")
            if not self.lower < self.upper:
                raise ParameterError("lower barrier must lie below upper barrier")

    @property
    def log_strike(self) -> float:
        return math.log(self.strike)


def model_coefficients(mp: MarketParams) -> ModelCoefficients:
    """Drift-removal exponent alpha and energy shift gamma."""
    s2 = mp.sigma * mp.sigma
    alpha = (0.5 * s2 - mp.r) / s2
    gamma = (0.5 * s2 + mp.r) ** 2 / (2.0 * s2)
    return ModelCoefficients(alpha, gamma)


def normal_cdf(x):
    """Standard normal CDF; float in, float out (arrays pass through)."""
    out = ndtr(x)
    return float(out) if np.ndim(out) == 0 else out


def daily_knockout_factor(v0: float) -> float:
    if v0 < 0:
        raise ParameterError(f"v0 must be >= 0, got {v0}")
    return math.exp(-v0 / TRADING_DAYS)


def check_step_rate(mp: MarketParams, v0: float) -> ModelCoefficients:
    """Reject knock-out rates at or below gamma (no real wavenumbers there)."""
    mc = model_coefficients(mp)
    if not v0 > mc.gamma:
        raise ParameterError(
            f"v0={v0} must exceed gamma={mc.gamma:.6g} for step options"
        )
    return mc
