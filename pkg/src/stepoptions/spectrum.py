"""Bound states of the finite symmetric square well.

The well occupies ``(a, b)`` in log-price; outside it the knock-out rate v0
acts as the well depth.  Inside the well the wavenumber is ``k1``, outside the
decay rate is ``k2`` with ``k1**2 + k2**2 = beta**2 = 2*v0/sigma**2``.

Levels are indexed ``n = 1, 2, ...``.  Odd ``n`` are symmetric (cosine)
states, even ``n`` antisymmetric (sine) states; the n-th root lies in
``((n-1)*pi/(b-a), n*pi/(b-a))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np

from .core import (ApproximationDomainError, MarketParams, NoBoundStateError,
                   ParameterError, StepOptionError, model_coefficients)


class Parity(str, Enum):
    SYMMETRIC = "cos"
    ANTISYMMETRIC = "sin"


class Provenance(str, Enum):
    EXACT = "exact"
    LOW_APPROX = "low"
    HIGH_APPROX = "high"


@dataclass(frozen=True)
class WellGeometry:
    a: float
    b: float
    v0: float
    sigma: float
    gamma: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ParameterError("need a < b")
        if not self.sigma > 0:
            raise ParameterError("sigma must be > 0")
        if not self.v0 > self.gamma:
            raise ParameterError(
                f"v0={self.v0} must exceed gamma={self.gamma:.6g}")

    @classmethod
    def from_market(cls, mp: MarketParams, a: float, b: float, v0: float):
        return cls(a, b, v0, mp.sigma, model_coefficients(mp).gamma)

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def center(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def beta(self) -> float:
        return math.sqrt(2.0 * self.v0) / self.sigma


@dataclass(frozen=True)
class EigenMode:
    n: int
    k1: float
    k2: float
    parity: Parity
    provenance: Provenance
    A_in: float
    A_out: float     # may overflow to inf for deep wells; see A_edge
    A_edge: float    # wavefunction value at x = b

    def __call__(self, x, geom: WellGeometry):
        return eval_wavefunction(self, geom, x)


@dataclass(frozen=True)
class SpectrumPartition:
    m1: int          # antisymmetric modes on the low-energy formula
    m2: int          # symmetric modes on the low-energy formula
    m_max1: int      # antisymmetric modes in total
    m_max2: int      # symmetric modes in total
    provenances: Tuple[Provenance, ...] = ()

    @property
    def n_max(self) -> int:
        return self.m_max1 + self.m_max2


def parity_of(n: int) -> Parity:
    return Parity.SYMMETRIC if n % 2 == 1 else Parity.ANTISYMMETRIC


def n_max(geom: WellGeometry) -> int:
    """Number of levels with energy below v0 (floor of the level estimate)."""
    s2 = geom.sigma ** 2
    disc = geom.beta ** 2 - 2.0 * geom.gamma / s2
    if disc <= 0:
        raise NoBoundStateError("well too shallow for a bound state")
    count = math.floor(geom.width / math.pi * math.sqrt(disc))
    if count < 1:
        raise NoBoundStateError(
            f"well (width {geom.width:.4g}, v0 {geom.v0}) holds no level below v0")
    return count


def _check_index(geom, n):
    if not 1 <= n <= n_max(geom):
        raise ParameterError(f"level n={n} outside 1..{n_max(geom)}")


def residual(geom: WellGeometry, n: int, k1: float) -> float:
    """Quantization residual ``k1*(b-a)/2 - n*pi/2 + arcsin(k1/beta)``."""
    return 0.5 * k1 * geom.width - 0.5 * n * math.pi + math.asin(k1 / geom.beta)


def make_mode(geom: WellGeometry, n: int, k1: float,
              provenance: Provenance) -> EigenMode:
    """Attach k2, parity and normalisation to a wavenumber."""
    beta = geom.beta
    if not 0 < k1 < beta:
        raise ApproximationDomainError(
            f"k1={k1:.6g} outside (0, beta={beta:.6g}) for level {n}")
    k2 = math.sqrt(beta * beta - k1 * k1)
    h = 0.5 * geom.width
    parity = parity_of(n)
    a_in = math.sqrt(2.0 * k2 / (k2 * geom.width + 2.0))
    edge = math.cos(k1 * h) if parity is Parity.SYMMETRIC else math.sin(k1 * h)
    try:
        a_out = a_in * edge * math.exp(k2 * h)
    except OverflowError:
        a_out = math.copysign(math.inf, edge)
    return EigenMode(n, k1, k2, parity, provenance, a_in, a_out, a_in * edge)


def exact_mode(geom: WellGeometry, n: int, max_iter: int = 200) -> EigenMode:
    _check_index(geom, n)
    lo = (n - 1) * math.pi / geom.width
    hi = min(n * math.pi / geom.width, geom.beta)
    f_lo, f_hi = residual(geom, n, lo), residual(geom, n, hi)
    if not (f_lo < 0 < f_hi):
        raise StepOptionError(f"no sign change in bracket for level {n}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        f_mid = residual(geom, n, mid)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
    k1 = 0.5 * (lo + hi)
    return make_mode(geom, n, k1, Provenance.EXACT)


def low_k1(geom: WellGeometry, n: int) -> float:
    beta = geom.beta
    return beta * n * math.pi / (beta * geom.width + 2.0)


def high_k1(geom: WellGeometry, n: int) -> float:
    arg = 2.0 - 2.0 * (n - 1) * math.pi / (geom.beta * geom.width)
    if arg < 0:
        raise ApproximationDomainError(
            f"high-energy formula undefined at level {n}")
    return 2.0 / geom.width * (0.5 * (n - 1) * math.pi + math.sqrt(arg))


def approx_mode_low(geom: WellGeometry, n: int) -> EigenMode:
    _check_index(geom, n)
    return make_mode(geom, n, low_k1(geom, n), Provenance.LOW_APPROX)


def approx_mode_high(geom: WellGeometry, n: int) -> EigenMode:
    # n = 1 is accepted: the formula is finite there (only its error estimate is not)
    _check_index(geom, n)
    return make_mode(geom, n, high_k1(geom, n), Provenance.HIGH_APPROX)


def error_formulas(geom: WellGeometry, n: int) -> Tuple[float, float]:
    """Closed-form relative-error estimates ``(low, high)`` for level ``n``.

    The high-energy estimate divides by ``n - 1`` and is undefined at n = 1.
    """
    if n < 2:
        raise ApproximationDomainError("high-energy error estimate needs n >= 2")
    beta, w = geom.beta, geom.width
    low = n * n * math.pi ** 2 / (6.0 * beta * (beta * w + 2.0) ** 2)
    arg = 2.0 - 2.0 * (n - 1) * math.pi / (beta * w)
    if arg < 0:
        raise ApproximationDomainError(f"high-energy formula undefined at level {n}")
    high = arg ** 1.5 / (12.0 * (n - 1) * math.pi)
    return low, high


def low_error_formula(geom: WellGeometry, n: int) -> float:
    beta, w = geom.beta, geom.width
    return n * n * math.pi ** 2 / (6.0 * beta * (beta * w + 2.0) ** 2)


def measured_errors(geom: WellGeometry, n: int) -> Tuple[float, float]:
    """Relative deviations of the low/high formulas from the bisection root."""
    k = exact_mode(geom, n).k1
    return abs(low_k1(geom, n) - k) / k, abs(high_k1(geom, n) - k) / k


def partition(geom: WellGeometry, rule: str = "top") -> SpectrumPartition:
    """Assign each level to the low- or high-energy formula.

    ``rule="top"``: the highest level uses the high-energy formula whenever
    there are at least two levels, all others the low-energy one.
    ``rule="measured"``: per level, whichever formula lands closer to the
    bisection root.
    """
    nm = n_max(geom)
    provs: List[Provenance] = []
    for n in range(1, nm + 1):
        if rule == "top":
            use_high = nm >= 2 and n == nm
        elif rule == "measured":
            k = exact_mode(geom, n).k1
            try:
                dh = abs(high_k1(geom, n) - k)
            except ApproximationDomainError:
                dh = math.inf
            use_high = dh < abs(low_k1(geom, n) - k)
        else:
            raise ValueError(f"unknown partition rule {rule!r}")
        provs.append(Provenance.HIGH_APPROX if use_high else Provenance.LOW_APPROX)
    m1 = sum(1 for n, p in enumerate(provs, 1)
             if parity_of(n) is Parity.ANTISYMMETRIC and p is Provenance.LOW_APPROX)
    m2 = sum(1 for n, p in enumerate(provs, 1)
             if parity_of(n) is Parity.SYMMETRIC and p is Provenance.LOW_APPROX)
    m_max1 = nm // 2
    m_max2 = nm - m_max1
    return SpectrumPartition(m1, m2, m_max1, m_max2, tuple(provs))


def build_spectrum(geom: WellGeometry, method: str = "mixed",
                   rule: str = "top") -> List[EigenMode]:
    """All levels ``1..n_max`` using ``method`` in {"mixed", "exact", "low"}."""
    nm = n_max(geom)
    if method == "exact":
        return [exact_mode(geom, n) for n in range(1, nm + 1)]
    if method == "low":
        return [approx_mode_low(geom, n) for n in range(1, nm + 1)]
    if method != "mixed":
        raise ValueError(f"unknown spectrum method {method!r}")
    part = partition(geom, rule)
    return [approx_mode_high(geom, n) if p is Provenance.HIGH_APPROX
            else approx_mode_low(geom, n)
            for n, p in enumerate(part.provenances, 1)]


def eval_wavefunction(mode: EigenMode, geom: WellGeometry, x):
    """Piecewise wavefunction value; accepts scalars or arrays."""
    x = np.asarray(x, dtype=float)
    u = x - geom.center
    h = 0.5 * geom.width
    if mode.parity is Parity.SYMMETRIC:
        inside = mode.A_in * np.cos(mode.k1 * u)
        sign_left = 1.0
    else:
        inside = mode.A_in * np.sin(mode.k1 * u)
        sign_left = -1.0
    # A_out * exp(-k2*|u|) written relative to the edge so it cannot overflow
    outside = mode.A_edge * np.exp(-mode.k2 * (np.maximum(np.abs(u), h) - h))
    out = np.where(u > h, outside, np.where(u < -h, sign_left * outside, inside))
    return float(out) if out.ndim == 0 else out
