"""Monte Carlo pricer with occupation-time knock-out discounting.

Log-prices follow exact GBM increments on a uniform grid.  Time spent beyond
the barrier(s) is accumulated as a right-point Riemann sum over grid points
(one knock-out factor per monitoring date); the step payoff is then discounted
by ``exp(-v0 * occupation)``.  The plain barrier kinds kill a path the first
time a grid point leaves the corridor and, with ``bridge=True``, additionally
weight each step by the Brownian-bridge probability of not crossing in
between, which removes the discrete-monitoring bias.

Paths are drawn in fixed-size batches.  Batch ``i`` uses a Philox stream keyed
by ``(seed, i)``, so results do not depend on how batches are scheduled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Sequence

import numpy as np

from .core import MarketParams, OptionKind, ParameterError, StepOptionSpec

RNG_NAME = "numpy.random.Philox"


@dataclass(frozen=True)
class PathConfig:
    n_paths: int = 200_000
    n_steps: int = 250          # per year
    seed: int = 20240601
    antithetic: bool = True
    batch_size: int = 20_000
    bridge: bool = True

    def __post_init__(self):
        if self.n_paths < 1000:
            raise ParameterError("n_paths must be >= 1000")
        if self.n_steps < 50:
            raise ParameterError("n_steps must be >= 50")
        if self.antithetic and self.n_paths % 2:
            raise ParameterError("antithetic sampling needs an even n_paths")
        if self.batch_size < 2 or (self.antithetic and self.batch_size % 2):
            raise ParameterError("batch_size must be even and >= 2")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_paths: int
    seed: int
    rng: str = RNG_NAME


def _region_masks(spec: StepOptionSpec):
    kind = spec.kind
    if kind is OptionKind.VANILLA:
        return None
    if kind in (OptionKind.PSO_UP_OUT, OptionKind.UOSB):
        upper = spec.upper
        return lambda x: x > upper
    lower, upper = spec.lower, spec.upper
    return lambda x: (x < lower) | (x > upper)


def _bridge_survival(x0, x1, spec, var):
    """Probability a Brownian bridge from x0 to x1 stays inside the corridor."""
    dist_up = np.maximum(spec.upper - x0, 0.0) * np.maximum(spec.upper - x1, 0.0)
    surv = -np.expm1(-2.0 * dist_up / var)
    if spec.kind is OptionKind.SDB:
        dist_lo = np.maximum(x0 - spec.lower, 0.0) * np.maximum(x1 - spec.lower, 0.0)
        surv = surv * -np.expm1(-2.0 * dist_lo / var)
    return surv


def _batch_samples(mp, spec, x, n_steps_total, z_rng, n_draw, antithetic, bridge):
    """Per-sample discounted payoffs (pair-averaged when antithetic)."""
    tau = spec.tau
    dt = tau / n_steps_total
    drift = (mp.r - 0.5 * mp.sigma ** 2) * dt
    vol = mp.sigma * math.sqrt(dt)
    outside = _region_masks(spec)
    hard = spec.kind in (OptionKind.UOSB, OptionKind.SDB)
    signs = (1.0, -1.0) if antithetic else (1.0,)
    z_all = z_rng.standard_normal((n_steps_total, n_draw))
    results = []
    for sgn in signs:
        xt = np.full(n_draw, x, dtype=float)
        occ = np.zeros(n_draw)
        alive = np.ones(n_draw, dtype=float)
        if outside is not None and hard:
            alive *= ~outside(xt)
        for i in range(n_steps_total):
            x_prev = xt
            xt = xt + drift + vol * sgn * z_all[i]
            if outside is None:
                continue
            if hard:
                alive *= ~outside(xt)
                if bridge:
                    alive *= _bridge_survival(x_prev, xt, spec, vol * vol)
            else:
                occ += outside(xt)
        payoff = np.maximum(np.exp(xt) - spec.strike, 0.0) * math.exp(-mp.r * tau)
        if outside is not None:
            if hard:
                payoff = payoff * alive
            else:
                payoff *= np.exp(-spec.v0 * dt * occ)
        results.append(payoff)
    if antithetic:
        return 0.5 * (results[0] + results[1])
    return results[0]


def mc_price(mp: MarketParams, spec: StepOptionSpec, x: float,
             pc: PathConfig = PathConfig()) -> McEstimate:
    """Monte Carlo price and standard error at log-spot ``x``."""
    if not math.isfinite(x):
        raise ParameterError("log-spot must be finite")
    n_steps_total = max(1, round(pc.n_steps * spec.tau))
    per = 2 if pc.antithetic else 1
    n_samples = pc.n_paths // per
    batch = pc.batch_size // per
    sums: List[float] = []
    sq_sums: List[float] = []
    done, idx = 0, 0
    while done < n_samples:
        n_draw = min(batch, n_samples - done)
        rng = np.random.Generator(np.random.Philox(key=[pc.seed, idx]))
        y = _batch_samples(mp, spec, x, n_steps_total, rng, n_draw, pc.antithetic, pc.bridge)
        sums.append(math.fsum(y))
        sq_sums.append(math.fsum(y * y))
        done += n_draw
        idx += 1
    mean = math.fsum(sums) / n_samples
    var = max(math.fsum(sq_sums) / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    return McEstimate(mean, math.sqrt(var / n_samples), pc.n_paths, pc.seed)


def mc_convergence_report(mp: MarketParams, spec: StepOptionSpec, x: float,
                          pc: PathConfig, ladder: Sequence[int]):
    """Rows ``(n_paths, mean, std_error)`` for each path count in ``ladder``."""
    ladder = list(ladder)
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ParameterError("ladder must be strictly ascending")
    rows = []
    for n in ladder:
        est = mc_price(mp, spec, x, replace(pc, n_paths=n))
        rows.append((n, est.mean, est.std_error))
    return rows
