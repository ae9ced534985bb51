"""Reference pricers: Black-Scholes, up-and-out barrier and double knock-out.

The barrier prices are evaluated from their propagators (momentum integral
for the single barrier, sine series for the double barrier) rather than from
image-sum closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (MarketParams, OptionKind, ParameterError, StepOptionSpec,
                   model_coefficients, normal_cdf)
from .quadrature import DEFAULT, QuadConfig, integrate


@dataclass(frozen=True)
class KernelDiagnostics:
    quadrature_error: float = 0.0
    truncation_bound: float = 0.0
    terms_used: int = 0


def bs_call_closed(mp: MarketParams, s: float, k: float, tau: float) -> float:
    if not (s > 0 and k > 0 and tau > 0):
        raise ParameterError("spot, strike and tau must be positive")
    vol = mp.sigma * math.sqrt(tau)
    d_plus = (math.log(s / k) + (mp.r + 0.5 * mp.sigma ** 2) * tau) / vol
    d_minus = d_plus - vol
    return s * normal_cdf(d_plus) - math.exp(-mp.r * tau) * k * normal_cdf(d_minus)


def bs_delta_closed(mp: MarketParams, s: float, k: float, tau: float) -> float:
    vol = mp.sigma * math.sqrt(tau)
    return normal_cdf((math.log(s / k) + (mp.r + 0.5 * mp.sigma ** 2) * tau) / vol)


def bs_kernel(mp: MarketParams, x, xp, tau: float):
    """Discounted Gaussian transition density from log-spot x to x'."""
    var = tau * mp.sigma ** 2
    x0 = x + tau * (mp.r - 0.5 * mp.sigma ** 2)
    xp = np.asarray(xp, dtype=float)
    out = math.exp(-mp.r * tau) * np.exp(-(xp - x0) ** 2 / (2 * var)) / math.sqrt(2 * math.pi * var)
    return float(out) if out.ndim == 0 else out


def bs_call_kernel(mp: MarketParams, s: float, k: float, tau: float,
                   cfg: QuadConfig = DEFAULT) -> float:
    """Call price as the payoff integral against :func:`bs_kernel`."""
    x, lk = math.log(s), math.log(k)
    sd = mp.sigma * math.sqrt(tau)
    x0 = x + tau * (mp.r - 0.5 * mp.sigma ** 2)
    # payoff-weighted density peaks near x0 + sd**2
    hi = max(lk, x0 + sd * sd) + 14.0 * sd
    lo = max(lk, x0 - 14.0 * sd)
    if lo >= hi:
        return 0.0
    val, _ = integrate(lambda xp: bs_kernel(mp, x, xp, tau) * (np.exp(xp) - k), lo, hi, cfg)
    return val


def _inner_cfg(cfg: QuadConfig) -> QuadConfig:
    # inner integrals need a tighter absolute floor than the outer one
    return QuadConfig(rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol * 1e-2,
                      max_subdivisions=cfg.max_subdivisions,
                      tail_sigmas=cfg.tail_sigmas, endpoint_clip=cfg.endpoint_clip)


def uosb_kernel(mp: MarketParams, x: float, xp: float, upper: float, tau: float,
                cfg: QuadConfig = DEFAULT) -> float:
    """Up-and-out propagator by its momentum integral, truncated at 10/(sigma*sqrt(tau))."""
    if x >= upper or xp >= upper:
        return 0.0
    mc = model_coefficients(mp)
    p_hi = 10.0 / (mp.sigma * math.sqrt(tau))
    d1, d2 = x - xp, x + xp - 2.0 * upper
    half_var = 0.5 * tau * mp.sigma ** 2

    def f(p):
        return np.exp(-half_var * p * p) * (np.cos(p * d1) - np.cos(p * d2)) / math.pi

    val, _ = integrate(f, 0.0, p_hi, cfg)
    return math.exp(-tau * mc.gamma + mc.alpha * (x - xp)) * val


def uosb_price(mp: MarketParams, x: float, spec: StepOptionSpec,
               cfg: QuadConfig = DEFAULT, full_output: bool = False):
    """Up-and-out call (barrier ``spec.upper``) as a double integral."""
    if spec.kind is not OptionKind.UOSB and spec.kind is not OptionKind.PSO_UP_OUT:
        raise ParameterError(f"uosb_price got kind {spec.kind.value}")
    upper, lk, tau, k = spec.upper, spec.log_strike, spec.tau, spec.strike
    diag = KernelDiagnostics(truncation_bound=math.exp(-50.0))
    if x >= upper or lk >= upper:
        return (0.0, diag) if full_output else 0.0
    inner = _inner_cfg(cfg)

    def outer(xps):
        out = np.empty_like(xps)
        for i, xp in enumerate(xps):
            out[i] = uosb_kernel(mp, x, xp, upper, tau, inner) * (math.exp(xp) - k)
        return out

    val, err = integrate(outer, lk, upper, cfg)
    price = max(val, 0.0)
    if full_output:
        return price, KernelDiagnostics(err, diag.truncation_bound, 0)
    return price


def sdb_terms(mp: MarketParams, spec: StepOptionSpec, cutoff: float = 1e-14) -> int:
    """Series length: stop once exp(-tau*sigma^2*p_n^2/2) drops below ``cutoff``."""
    width = spec.upper - spec.lower
    # exp(-tau*sigma^2*(n*pi/width)^2/2) < cutoff
    n = math.sqrt(2.0 * -math.log(cutoff) / (spec.tau * mp.sigma ** 2)) * width / math.pi
    return max(1, math.ceil(n))


def sdb_price(mp: MarketParams, x: float, spec: StepOptionSpec,
              cfg: QuadConfig = DEFAULT, extra_terms: int = 0,
              full_output: bool = False):
    """Double knock-out call from the infinite-well eigenfunction series."""
    if spec.kind is not OptionKind.SDB and spec.kind is not OptionKind.PDBS:
        raise ParameterError(f"sdb_price got kind {spec.kind.value}")
    a, b, tau, k = spec.lower, spec.upper, spec.tau, spec.strike
    lk = max(spec.log_strike, a)
    n_terms = sdb_terms(mp, spec) + extra_terms
    if not a < x < b or lk >= b:
        return (0.0, KernelDiagnostics(terms_used=n_terms)) if full_output else 0.0
    mc = model_coefficients(mp)
    width = b - a
    p = np.arange(1, n_terms + 1) * math.pi / width
    weights = (2.0 / width) * np.exp(-0.5 * tau * mp.sigma ** 2 * p * p) * np.sin(p * (x - a))

    def f(xp):
        modes = np.sin(np.outer(xp - a, p)) @ weights
        return np.exp(mc.alpha * (x - xp)) * modes * (np.exp(xp) - k)

    val, err = integrate(f, lk, b, cfg)
    price = math.exp(-tau * mc.gamma) * val
    if full_output:
        tail = math.exp(-0.5 * tau * mp.sigma ** 2 * (math.pi * (n_terms + 1) / width) ** 2)
        return price, KernelDiagnostics(err, tail, n_terms)
    return price
