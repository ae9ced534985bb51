"""Checks that reproduce the reference tables and the qualitative figure
behaviour, plus Monte Carlo cross-checks.  Each check returns a
:class:`CheckResult`; nothing here short-circuits on failure.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List


from .baseline import (bs_call_closed, bs_call_kernel, bs_delta_closed,
                       bs_kernel, sdb_price, uosb_price)
from .core import MarketParams, StepOptionSpec
from .montecarlo import PathConfig, mc_price
from .quadrature import integrate
from .spectrum import (WellGeometry, eval_wavefunction,
                       exact_mode, low_error_formula, measured_errors, n_max,
                       partition, residual)
from .step import delta, pdbs_price, pso_price

MARKET = MarketParams(r=0.05, sigma=0.3)
TABLE_A, TABLE_B = math.log(90.0), math.log(130.0)
FIG_A, FIG_B = 4.5, 4.867
FIG_X = 4.605
FIG_V0 = (13.0, 26.0, 55.0)

TABLE1_LOW = (2.14e-4, 8.55e-4, 0.002, 0.0034)
TABLE1_HIGH = (0.0833, 0.0276, 0.01, 0.00296)
TABLE2 = {  # v0: (beta, n_max, m_max1, m_max2, m1, m2) in display form
    55.0: (35, 4, "2", "-", "1", "2"),
    26.0: (24, 2, "1", "-", "-", "1"),
    13.0: (17, 1, "-", "-", "-", "1"),
}
MC_REL_TOL = 0.05


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: Dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"


def _rel(a, b):
    return abs(a - b) / abs(b)


def table_geometry(v0: float) -> WellGeometry:
    return WellGeometry.from_market(MARKET, TABLE_A, TABLE_B, v0)


def table2_rows(v0s=(55.0, 26.0, 13.0)) -> List[Dict]:
    """Partition summary per well depth, with the reference '-' convention:
    a family's m_max is shown only when it has a high-energy level, and an m
    count of zero is shown as '-'."""
    rows = []
    for v0 in v0s:
        geom = table_geometry(v0)
        part = partition(geom)
        high1 = part.m_max1 - part.m1
        high2 = part.m_max2 - part.m2
        rows.append({
            "v0": v0,
            "beta": geom.beta,
            "n_max": n_max(geom),
            "m_max1": part.m_max1,
            "m_max2": part.m_max2,
            "m1": part.m1,
            "m2": part.m2,
            "display": (str(part.m_max1) if high1 else "-",
                        str(part.m_max2) if high2 else "-",
                        str(part.m1) if part.m1 else "-",
                        str(part.m2) if part.m2 else "-"),
        })
    return rows


def table1_rows(v0: float = 55.0) -> List[Dict]:
    geom = table_geometry(v0)
    rows = []
    for n in range(1, n_max(geom) + 1):
        low, high = measured_errors(geom, n)
        rows.append({
            "n": n,
            "low_rel_err": low,
            "high_rel_err": high,
            "low_formula": low_error_formula(geom, n),
            "high_formula": None if n == 1 else
            (2 - 2 * (n - 1) * math.pi / (geom.beta * geom.width)) ** 1.5 / (12 * (n - 1) * math.pi),
        })
    return rows


def check_table2() -> CheckResult:
    rows = table2_rows()
    ok = True
    for row in rows:
        beta, nm, *display = TABLE2[row["v0"]]
        ok &= round(row["beta"]) == beta and row["n_max"] == nm
        ok &= tuple(display) == row["display"]
    return CheckResult("table2: beta, n_max and m-columns", bool(ok), {"rows": rows})


def check_table1() -> CheckResult:
    rows = table1_rows()
    low = [r["low_rel_err"] for r in rows]
    high = [r["high_rel_err"] for r in rows]
    sub = {
        "low_matches_reference_5pct": all(_rel(l, p) <= 0.05 for l, p in zip(low, TABLE1_LOW)),
        "low_increasing": all(b > a for a, b in zip(low, low[1:])),
        "high_decreasing": all(b < a for a, b in zip(high, high[1:])),
        "high_beats_low_only_at_n4": all((h < l) == (n == 4) for n, l, h in zip(range(1, 5), low, high)),
        "high_matches_reference_30pct": all(_rel(h, p) <= 0.30 for h, p in zip(high, TABLE1_HIGH)),
    }
    details = {
        "rows": rows,
        "reference_low": TABLE1_LOW,
        "reference_high": TABLE1_HIGH,
        "subchecks": sub,
        "formula_low_matches_reference_5pct": all(
            _rel(r["low_formula"], p) <= 0.05 for r, p in zip(rows, TABLE1_LOW)),
    }
    return CheckResult("table1: relative errors of the level formulas vs exact roots",
                       all(sub.values()), details)


def kernel_form_grid():
    for s in (80.0, 100.0, 120.0, 140.0, 160.0):
        for k, tau in ((90.0, 0.25), (100.0, 0.5), (110.0, 1.0), (120.0, 2.0)):
            yield s, k, tau


def check_kernel_form() -> CheckResult:
    worst = 0.0
    for s, k, tau in kernel_form_grid():
        worst = max(worst, abs(bs_call_kernel(MARKET, s, k, tau) - bs_call_closed(MARKET, s, k, tau)))
    mass_err = 0.0
    for tau in (0.25, 1.0, 2.0):
        x = math.log(100.0)
        sd = MARKET.sigma * math.sqrt(tau)
        mass, _ = integrate(lambda xp: bs_kernel(MARKET, x, xp, tau), x - 15 * sd, x + 15 * sd)
        mass_err = max(mass_err, abs(mass - math.exp(-MARKET.r * tau)))
    return CheckResult("kernel-form vanilla vs closed form",
                       worst < 1e-6 and mass_err < 1e-8,
                       {"max_price_gap": worst, "max_mass_gap": mass_err})


def _pso(v0, strike=100.0, upper=FIG_B):
    return StepOptionSpec("pso", strike, 1.0, upper=upper, v0=v0)


def _pdbs(v0, strike=100.0, lower=FIG_A, upper=FIG_B):
    return StepOptionSpec("pdbs", strike, 1.0, upper=upper, lower=lower, v0=v0)


def _uosb(strike=100.0, upper=FIG_B):
    return StepOptionSpec("uosb", strike, 1.0, upper=upper)


def _sdb(strike=100.0, lower=FIG_A, upper=FIG_B):
    return StepOptionSpec("sdb", strike, 1.0, upper=upper, lower=lower)


def check_limits(v0: float = 1e4) -> CheckResult:
    x = math.log(110.0)
    pso = pso_price(MARKET, _pso(v0), x).price
    uosb = uosb_price(MARKET, x, _uosb())
    pdbs = pdbs_price(MARKET, _pdbs(v0), x, spectrum="exact").price
    sdb = sdb_price(MARKET, x, _sdb())
    gaps = {"pso_vs_uosb": _rel(pso, uosb), "pdbs_vs_sdb": _rel(pdbs, sdb)}
    # how the gap closes with depth, for the report
    trend = {}
    for big in (1e5, 1e6):
        trend[str(big)] = {
            "pso_vs_uosb": _rel(pso_price(MARKET, _pso(big), x).price, uosb),
            "pdbs_vs_sdb": _rel(pdbs_price(MARKET, _pdbs(big), x, spectrum="exact").price, sdb),
        }
    return CheckResult(f"limits: v0={v0:g} step prices vs hard-barrier prices",
                       gaps["pso_vs_uosb"] <= 0.01 and gaps["pdbs_vs_sdb"] <= 0.02,
                       {"pso": pso, "uosb": uosb, "pdbs": pdbs, "sdb": sdb,
                        "rel_gaps": gaps, "rel_gaps_deeper": trend})


# the strike grid reaches K=90, so the wider ln 90 / ln 130 corridor is used here


def _pso_t(v0, strike):
    return _pso(v0, strike, TABLE_B)


def _pdbs_t(v0, strike):
    return _pdbs(v0, strike, TABLE_A, TABLE_B)


SANDWICH_SPOTS = (95.0, 100.0, 110.0, 120.0, 125.0)
SANDWICH_V0 = (13.0, 26.0, 55.0, 100.0)
SANDWICH_STRIKES = (90.0, 100.0, 110.0, 120.0)


def check_sandwich() -> CheckResult:
    violations = []
    for s in SANDWICH_SPOTS:
        x = math.log(s)
        tol = 1e-4 * s
        for k in SANDWICH_STRIKES:
            van = bs_call_closed(MARKET, s, k, 1.0)
            bars = {"pso": uosb_price(MARKET, x, _uosb(k, TABLE_B)),
                    "pdbs": sdb_price(MARKET, x, _sdb(k, TABLE_A, TABLE_B))}
            for fam, make, fn in (("pso", _pso_t, pso_price), ("pdbs", _pdbs_t, pdbs_price)):
                series = []
                for v0 in SANDWICH_V0:
                    p = fn(MARKET, make(v0, k), x).price
                    series.append(p)
                    if not (bars[fam] - tol <= p <= van + tol):
                        violations.append(("sandwich", fam, s, k, v0, p, bars[fam], van))
                if any(b > a + 1e-10 for a, b in zip(series, series[1:])):
                    violations.append(("v0-order", fam, s, k, series))
        for fam, make, fn in (("pso", _pso_t, pso_price), ("pdbs", _pdbs_t, pdbs_price)):
            for v0 in SANDWICH_V0:
                series = [fn(MARKET, make(v0, k), x).price for k in SANDWICH_STRIKES]
                if any(b > a + 1e-10 for a, b in zip(series, series[1:])):
                    violations.append(("strike-order", fam, s, v0, series))
    return CheckResult("sandwich and monotonicity in v0 and strike",
                       not violations, {"violations": violations})


def check_monte_carlo(pc: PathConfig = PathConfig(), rel_tol: float = MC_REL_TOL) -> CheckResult:
    x = math.log(110.0)
    van_spec = StepOptionSpec("vanilla", 100.0, 1.0)
    van_mc = mc_price(MARKET, van_spec, x, pc)
    van = bs_call_closed(MARKET, 110.0, 100.0, 1.0)
    out = {"vanilla": {"mc": asdict(van_mc), "closed": van,
                       "z": (van_mc.mean - van) / van_mc.std_error}}
    ok = abs(van_mc.mean - van) <= 3 * van_mc.std_error
    for fam, spec, fn in (("pso", _pso(55.0), pso_price), ("pdbs", _pdbs(55.0), pdbs_price)):
        analytic = fn(MARKET, spec, x).price
        est = mc_price(MARKET, spec, x, pc)
        gap = _rel(analytic, est.mean)
        out[fam] = {
            "analytic": analytic, "mc": asdict(est), "rel_gap": gap,
            "excess_over_tol": max(0.0, gap - rel_tol),
            # states above v0 are dropped; their time factor is below e^{-tau*v0}
            "dropped_state_weight_bound": math.exp(-spec.tau * spec.v0),
        }
        ok &= gap <= rel_tol
    return CheckResult("Monte Carlo cross-validation at v0=55, S=110, K=100", bool(ok), out)


def check_spectral(pdbs_tol: float = 0.01) -> CheckResult:
    worst_res, bracket_ok, worst_norm = 0.0, True, 0.0
    for v0 in (55.0, 26.0, 13.0, 100.0):
        geom = table_geometry(v0)
        for n in range(1, n_max(geom) + 1):
            m = exact_mode(geom, n)
            worst_res = max(worst_res, abs(residual(geom, n, m.k1)))
            bracket_ok &= (n - 1) * math.pi / geom.width < m.k1 < n * math.pi / geom.width
            worst_norm = max(worst_norm, abs(mode_norm(m, geom) - 1.0))
    spec = StepOptionSpec("pdbs", 100.0, 1.0, upper=TABLE_B, lower=TABLE_A, v0=55.0)
    x = math.log(110.0)
    exact = pdbs_price(MARKET, spec, x, spectrum="exact").price
    mixed = pdbs_price(MARKET, spec, x, spectrum="mixed").price
    gap = _rel(mixed, exact)
    return CheckResult("spectral hygiene: roots, brackets, normalisation, exact vs mixed",
                       worst_res < 1e-12 and bracket_ok and worst_norm < 1e-8 and gap < pdbs_tol,
                       {"max_residual": worst_res, "brackets_ok": bool(bracket_ok),
                        "max_norm_error": worst_norm, "pdbs_exact": exact,
                        "pdbs_mixed": mixed, "rel_gap": gap})


def mode_norm(mode, geom) -> float:
    from .quadrature import integrate_semi_infinite
    dens = lambda t: eval_wavefunction(mode, geom, t) ** 2
    lo, _ = integrate_semi_infinite(lambda t: dens(geom.a - t), 0.0, 2 * mode.k2)
    mid, _ = integrate(dens, geom.a, geom.b)
    hi, _ = integrate_semi_infinite(dens, geom.b, 2 * mode.k2)
    return lo + mid + hi


def check_delta(fig4_rows=None) -> CheckResult:
    worst = 0.0
    for s in (80.0, 100.0, 110.0, 130.0):
        for k in (90.0, 100.0, 120.0):
            spec = StepOptionSpec("vanilla", k, 1.0)
            worst = max(worst, abs(delta(MARKET, spec, math.log(s)) - bs_delta_closed(MARKET, s, k, 1.0)))
    if fig4_rows is None:
        from .cli import sweep_rows, preset_config
        fig4_rows = sweep_rows(preset_config("fig4"))
    finite = all(math.isfinite(r["delta"]) for r in fig4_rows if r["delta"] is not None)
    ordering = {}
    below = {"pso": (60.0, 80.0, 95.0), "pdbs": (95.0, 100.0)}
    for fam, ref in (("pso", "uosb"), ("pdbs", "sdb")):
        for s in below[fam]:
            x = math.log(s)
            van = delta(MARKET, StepOptionSpec("vanilla", 100.0, 1.0), x)
            make = _pso if fam == "pso" else _pdbs
            steps = [delta(MARKET, make(v0), x) for v0 in FIG_V0]
            bar = delta(MARKET, _uosb() if fam == "pso" else _sdb(), x)
            seq = [van] + steps + [bar]
            ordering[f"{fam}@{s:g}"] = {"deltas": seq,
                                       "ok": all(b <= a + 1e-8 for a, b in zip(seq, seq[1:]))}
    ok = worst < 1e-4 and finite and all(v["ok"] for v in ordering.values())
    return CheckResult("delta: vanilla closed form, fig4 finiteness, v0 ordering below barrier",
                       ok, {"vanilla_max_gap": worst, "fig4_finite": finite,
                            "ordering": ordering})


CHECKS: Dict[str, Callable[[], CheckResult]] = {
    "table2": check_table2,
    "table1": check_table1,
    "kernel_form": check_kernel_form,
    "limits": check_limits,
    "sandwich": check_sandwich,
    "monte_carlo": check_monte_carlo,
    "spectral": check_spectral,
    "delta": check_delta,
}


def run_all(quick: bool = False, seed: int = PathConfig().seed) -> List[CheckResult]:
    results = []
    for name, fn in CHECKS.items():
        if name == "monte_carlo":
            n = 20_000 if quick else 200_000
            widen = math.sqrt(200_000 / n)
            results.append(fn(PathConfig(n_paths=n, seed=seed), MC_REL_TOL * widen))
        else:
            results.append(fn())
    return results
