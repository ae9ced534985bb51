"""Proportional step (PSO) and proportional double-barrier step (PDBS) calls.

PSO: the up-and-out step call is priced from the below-barrier scattering
states of a potential step of height v0 at the barrier B.  The propagator is
split by where the spot ``x`` and terminal point ``x'`` sit relative to B
(regions 1-4) and each piece is a momentum integral over ``p1``.

PDBS: the double-barrier step call is priced from the bound states of a
square well of depth v0 on ``(a, b)``; the terminal and intermediate
coordinates are split into the three intervals cut by the barriers, giving
six additive components.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .baseline import _inner_cfg, bs_call_closed, sdb_price, uosb_price
from .core import (ContractError, MarketParams, ModelCoefficients, OptionKind,
                   ParameterError, StepOptionSpec, UnsupportedRegionError,
                   check_step_rate)
from .quadrature import (DEFAULT, DivergenceError, QuadConfig, integrate,
                         integrate_semi_infinite)
from .spectrum import EigenMode, WellGeometry, build_spectrum, eval_wavefunction

DELTA_STEP = 1e-3


@dataclass(frozen=True)
class ScatteringState:
    p1: float
    p2: float
    A1: complex
    A2: complex


@dataclass
class PricingResult:
    price: float
    components: Dict[str, float]
    diagnostics: Dict[str, object] = field(default_factory=dict)


def _result(components: Dict[str, float], diagnostics) -> PricingResult:
    total = 0.0
    for v in components.values():
        total += v
    return PricingResult(total, components, diagnostics)


def p1_max(mp: MarketParams, v0: float) -> float:
    """Upper edge of the below-barrier band, sqrt(2*(v0-gamma))/sigma."""
    mc = check_step_rate(mp, v0)
    return math.sqrt(2.0 * (v0 - mc.gamma)) / mp.sigma


def scattering_state(mp: MarketParams, v0: float, p1: float) -> ScatteringState:
    top = p1_max(mp, v0)
    if not 0 < p1 < top:
        raise ParameterError(f"p1={p1} outside (0, {top:.6g})")
    p2 = math.sqrt(2.0 * v0 / mp.sigma ** 2 - p1 * p1)
    den = complex(p1, p2)
    return ScatteringState(p1, p2, complex(p1, -p2) / den, 2.0 * p1 / den)


def _region_of(x: float, xp: float, barrier: float) -> int:
    if x < barrier:
        return 1 if xp < barrier else 2
    return 3 if xp < barrier else 4


def _momentum_integrand(region: int, mp: MarketParams, v0: float, tau: float,
                        x: float, xp: float, barrier: float):
    """Weighted p1-integrand of the region's propagator (without prefactor)."""
    s2 = mp.sigma ** 2
    beta2 = 2.0 * v0 / s2
    c = s2 / v0
    u, v = x - barrier, xp - barrier

    def f(p1):
        p2 = np.sqrt(np.maximum(beta2 - p1 * p1, 0.0))
        w = np.exp(-0.5 * tau * s2 * p1 * p1) / (2.0 * math.pi)
        if region == 1:
            s = u + v
            body = (2.0 * np.cos(p1 * (u - v))
                    + c * (p1 * p1 - p2 * p2) * np.cos(p1 * s)
                    - 2.0 * c * p1 * p2 * np.sin(p1 * s))
        elif region == 2:
            body = 2.0 * c * (p1 * p1 * np.cos(p1 * u) - p1 * p2 * np.sin(p1 * u)) * np.exp(-p2 * v)
        elif region == 3:
            body = 2.0 * c * (p1 * p1 * np.cos(p1 * v) - p1 * p2 * np.sin(p1 * v)) * np.exp(-p2 * u)
        else:
            body = 2.0 * c * p1 * p1 * np.exp(-p2 * (u + v))
        return w * body

    return f


def _p1_range(mp: MarketParams, v0: float, tau: float, cfg: QuadConfig):
    """Clipped p1 band; the Gaussian weight also caps it at 10/(sigma*sqrt(tau))."""
    top = p1_max(mp, v0)
    lo = cfg.endpoint_clip * top
    hi = top - cfg.endpoint_clip * top
    gauss = 10.0 / (mp.sigma * math.sqrt(tau))
    if gauss < hi:
        return lo, gauss, math.exp(-50.0)
    return lo, hi, 0.0


def pso_kernel(region: int, mp: MarketParams, spec: StepOptionSpec, x: float,
               xp: float, tau: Optional[float] = None,
               cfg: QuadConfig = DEFAULT) -> float:
    """Propagator piece ``region`` in {1,2,3,4} from x to x'."""
    if spec.kind is not OptionKind.PSO_UP_OUT:
        raise ContractError(f"pso_kernel needs a PSO spec, got {spec.kind.value}")
    tau = spec.tau if tau is None else tau
    if region not in (1, 2, 3, 4):
        raise ContractError(f"region must be 1..4, got {region}")
    if _region_of(x, xp, spec.upper) != region:
        raise ContractError(
            f"(x={x}, x'={xp}) lies in region {_region_of(x, xp, spec.upper)}, not {region}")
    mc = check_step_rate(mp, spec.v0)
    lo, hi, _ = _p1_range(mp, spec.v0, tau, cfg)
    f = _momentum_integrand(region, mp, spec.v0, tau, x, xp, spec.upper)
    val, _ = integrate(f, lo, hi, cfg)
    return math.exp(-tau * mc.gamma + mc.alpha * (x - xp)) * val


def _payoff_integral(mp, mc, spec, x, region, xlo, xhi, cfg, inner):
    """Integrate kernel(region) * (e^x' - K) over [xlo, xhi]."""
    if not xlo < xhi:
        return 0.0, 0.0
    k, tau, v0 = spec.strike, spec.tau, spec.v0
    lo, hi, _ = _p1_range(mp, v0, tau, cfg)
    pref = math.exp(-tau * mc.gamma)

    def outer(xps):
        out = np.empty_like(xps)
        for i, xp in enumerate(xps):
            f = _momentum_integrand(region, mp, v0, tau, x, xp, spec.upper)
            val, _ = integrate(f, lo, hi, inner)
            out[i] = pref * math.exp(mc.alpha * (x - xp)) * val * (math.exp(xp) - k)
        return out

    return integrate(outer, xlo, xhi, cfg)


def pso_price(mp: MarketParams, spec: StepOptionSpec, x: float,
              cfg: QuadConfig = DEFAULT, truncate: bool = True) -> PricingResult:
    """Up-and-out proportional step call at log-spot ``x``.

    ``truncate=False`` integrates the full band and the infinite x' range,
    which is marginally divergent and raises :class:`DivergenceError`.
    """
    if spec.kind is not OptionKind.PSO_UP_OUT:
        raise ParameterError(f"pso_price needs a PSO spec, got {spec.kind.value}")
    mc = check_step_rate(mp, spec.v0)
    barrier, lk = spec.upper, spec.log_strike
    if not lk < barrier:
        raise ParameterError("PSO requires ln K < B")
    if not truncate:
        decay = math.sqrt(2.0 * mc.gamma) / mp.sigma - (1.0 - mc.alpha)
        # decay is zero analytically; treat rounding residue as zero
        if abs(decay) < 1e-12 * (1.0 + abs(mc.alpha)):
            decay = 0.0
        integrate_semi_infinite(lambda t: t, barrier, decay, cfg)
    x_cut = max(barrier, lk, x) + cfg.tail_sigmas * mp.sigma * math.sqrt(spec.tau)
    inner = _inner_cfg(cfg)
    lo, hi, p_trunc = _p1_range(mp, spec.v0, spec.tau, cfg)
    if x < barrier:
        c1, e1 = _payoff_integral(mp, mc, spec, x, 1, lk, barrier, cfg, inner)
        c2, e2 = _payoff_integral(mp, mc, spec, x, 2, barrier, x_cut, cfg, inner)
        comps = {"c1": c1, "c2": c2}
    else:
        c3, e1 = _payoff_integral(mp, mc, spec, x, 3, lk, barrier, cfg, inner)
        c4, e2 = _payoff_integral(mp, mc, spec, x, 4, barrier, x_cut, cfg, inner)
        comps = {"c3": c3, "c4": c4}
    diag = {
        "p1_range": (lo, hi),
        "p1_truncation_bound": p_trunc,
        "x_cut": x_cut,
        "quadrature_error": e1 + e2,
    }
    return _result(comps, diag)


# ---------------------------------------------------------------- PDBS


def _mode_integrals(mode: EigenMode, geom: WellGeometry, alpha: float,
                    strike: float, log_strike: float, cfg: QuadConfig):
    """Per-mode factors: payoff integrals inside/above the well, and the
    probability mass of the mode below/inside/above the well."""
    a, b = geom.a, geom.b

    def payoff(xp):
        return np.exp(-alpha * xp) * eval_wavefunction(mode, geom, xp) * (np.exp(xp) - strike)

    def dens(xp):
        return eval_wavefunction(mode, geom, xp) ** 2

    err = 0.0
    if log_strike < b:
        pay_in, e = integrate(payoff, max(log_strike, a), b, cfg)
        err += e
    else:
        pay_in = 0.0
    decay = mode.k2 + alpha - 1.0
    if decay <= 0:
        raise DivergenceError(
            f"level {mode.n}: payoff integral above the well diverges (k2={mode.k2:.4g})")
    pay_out, e = integrate_semi_infinite(payoff, max(b, log_strike), decay, cfg)
    err += e
    mass_lo, e = integrate_semi_infinite(lambda t: dens(a - t), 0.0, 2.0 * mode.k2, cfg)
    err += e
    mass_mid, e = integrate(dens, a, b, cfg)
    err += e
    mass_hi, e = integrate_semi_infinite(dens, b, 2.0 * mode.k2, cfg)
    err += e
    return pay_in, pay_out, mass_lo, mass_mid, mass_hi, err


def pdbs_components(modes, geom: WellGeometry, mc: ModelCoefficients, x: float,
                    strike: float, tau: float, cfg: QuadConfig = DEFAULT):
    """Six-component breakdown for an arbitrary mode list.

    Components with ``x'`` inside the well vanish when ``ln K >= b``.
    """
    lk = math.log(strike)
    comps = dict.fromkeys(("c1", "c2", "c3", "c4", "c5", "c6"), 0.0)
    err = 0.0
    # levels whose time factor is 1e-30 below the leading one cannot register
    k_floor = min(m.k1 for m in modes)
    cut = k_floor ** 2 + 2.0 * 69.0 / (tau * geom.sigma ** 2)
    for mode in modes:
        if mode.k1 ** 2 > cut:
            continue
        w = (math.exp(-tau * mc.gamma + mc.alpha * x
                      - 0.5 * tau * geom.sigma ** 2 * mode.k1 ** 2)
             * eval_wavefunction(mode, geom, x))
        pin, pout, m_lo, m_mid, m_hi, e = _mode_integrals(mode, geom, mc.alpha, strike, lk, cfg)
        err += abs(w) * e
        comps["c1"] += w * pin * m_lo
        comps["c2"] += w * pout * m_lo
        comps["c3"] += w * pin * m_mid
        comps["c4"] += w * pout * m_mid
        comps["c5"] += w * pin * m_hi
        comps["c6"] += w * pout * m_hi
    return comps, err


def pdbs_price(mp: MarketParams, spec: StepOptionSpec, x: float,
               cfg: QuadConfig = DEFAULT, spectrum: str = "mixed",
               rule: str = "top") -> PricingResult:
    """Double-barrier step call for spot and strike inside the corridor.

    ``spectrum`` picks the wavenumbers: "mixed" (low/high formulas per
    :func:`spectrum.partition`), "exact" (bisection roots) or "low".
    """
    if spec.kind is not OptionKind.PDBS:
        raise ParameterError(f"pdbs_price needs a PDBS spec, got {spec.kind.value}")
    mc = check_step_rate(mp, spec.v0)
    a, b = spec.lower, spec.upper
    if not a < x < b:
        raise UnsupportedRegionError(f"spot log-price {x:.6g} outside ({a:.6g}, {b:.6g})")
    lk = spec.log_strike
    if not (a - 1e-12 <= lk < b):
        raise UnsupportedRegionError(f"ln K={lk:.6g} outside [{a:.6g}, {b:.6g})")
    geom = WellGeometry(a, b, spec.v0, mp.sigma, mc.gamma)
    modes = build_spectrum(geom, spectrum, rule)
    comps, err = pdbs_components(modes, geom, mc, x, spec.strike, spec.tau, cfg)
    diag = {
        "modes": [(m.n, m.k1, m.provenance.value) for m in modes],
        "n_max": len(modes),
        "quadrature_error": err,
        "spectrum": spectrum,
    }
    return _result(comps, diag)


# ---------------------------------------------------------------- dispatch


def price(mp: MarketParams, spec: StepOptionSpec, x: float,
          cfg: QuadConfig = DEFAULT, **kw) -> float:
    """Price of any supported kind at log-spot ``x``."""
    kind = spec.kind
    if kind is OptionKind.VANILLA:
        return bs_call_closed(mp, math.exp(x), spec.strike, spec.tau)
    if kind is OptionKind.UOSB:
        return uosb_price(mp, x, spec, cfg)
    if kind is OptionKind.SDB:
        return sdb_price(mp, x, spec, cfg)
    if kind is OptionKind.PSO_UP_OUT:
        return pso_price(mp, spec, x, cfg, **kw).price
    return pdbs_price(mp, spec, x, cfg, **kw).price


def delta(mp: MarketParams, spec: StepOptionSpec, x: float,
          cfg: QuadConfig = DEFAULT, h: float = DELTA_STEP, **kw) -> float:
    """dC/dS = e^{-x} dC/dx by a central difference in log-spot."""
    up = price(mp, spec, x + h, cfg, **kw)
    down = price(mp, spec, x - h, cfg, **kw)
    return math.exp(-x) * (up - down) / (2.0 * h)
