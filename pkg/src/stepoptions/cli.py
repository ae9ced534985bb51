"""Command-line front end.

    stepoptions price    --kind pso --spot 110 --strike 100 --v0 55
    stepoptions sweep    --preset fig1 --out fig1.csv
    stepoptions table1 | table2
    stepoptions validate [--quick]
    stepoptions greeks   --kind pdbs --spot 100

Relative ``--out`` paths are resolved against ``$STEPOPTIONS_OUTPUT_DIR`` when
that variable is set.  ``--config file.json`` supplies any option by its long
name (dashes as underscores); explicit flags win over the file.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields, replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import validation
from .core import MarketParams, OptionKind, ParameterError, StepOptionError, StepOptionSpec
from .montecarlo import PathConfig, mc_price
from .quadrature import QuadConfig
from .step import delta, pdbs_price, price, pso_price

OUTPUT_DIR_ENV = "STEPOPTIONS_OUTPUT_DIR"

CSV_COLUMNS = ["kind", "sweep_var", "sweep_value", "v0", "spot", "strike", "rate",
               "vol", "tau", "lower_barrier", "upper_barrier", "price",
               "c1", "c2", "c3", "c4", "c5", "c6", "std_error", "delta"]


@dataclass
class RunConfig:
    command: str = "price"
    kind: str = "pso"
    spot: float = 110.0
    strike: float = 100.0
    rate: float = 0.05
    vol: float = 0.3
    tau: float = 1.0
    upper: Optional[float] = None        # log-price; default ln 130
    lower: Optional[float] = None        # log-price; default ln 90
    v0: float = 55.0
    v0_list: Optional[List[float]] = None
    preset: Optional[str] = None
    sweep_var: Optional[str] = None
    lo: Optional[float] = None
    hi: Optional[float] = None
    points: int = 21
    families: Optional[List[str]] = None
    spectrum: str = "mixed"
    mc: bool = False
    paths: int = 200_000
    steps: int = 250
    seed: int = PathConfig().seed
    rel_tol: float = 1e-9
    quick: bool = False
    format: Optional[str] = None
    out: Optional[str] = None

    def __post_init__(self):
        if self.upper is None:
            self.upper = math.log(130.0)
        if self.lower is None:
            self.lower = math.log(90.0)
        MarketParams(self.rate, self.vol)
        if self.tau <= 0 or self.spot <= 0 or self.strike <= 0:
            raise ParameterError("spot, strike and tau must be positive")
        if self.sweep_var is not None:
            if self.sweep_var not in ("spot", "strike", "v0"):
                raise ParameterError(f"unknown sweep variable {self.sweep_var!r}")
            if self.points < 2:
                raise ParameterError("a sweep needs at least 2 points")
            if self.preset is not None and self.lo is None and self.hi is None:
                return
            if self.lo is None or self.hi is None or not self.lo < self.hi:
                raise ParameterError("a sweep needs lo < hi")

    @property
    def market(self) -> MarketParams:
        return MarketParams(self.rate, self.vol)

    @property
    def quad(self) -> QuadConfig:
        return QuadConfig(rel_tol=self.rel_tol)

    @property
    def paths_cfg(self) -> PathConfig:
        return PathConfig(n_paths=self.paths, n_steps=self.steps, seed=self.seed)

    def spec(self, kind=None, strike=None, v0=None) -> StepOptionSpec:
        kind = OptionKind(kind or self.kind)
        return StepOptionSpec(
            kind, self.strike if strike is None else strike, self.tau,
            upper=None if kind is OptionKind.VANILLA else self.upper,
            lower=self.lower if kind.is_double else None,
            v0=(self.v0 if v0 is None else v0) if kind.is_step else 0.0)


# figure presets: caption parameters, per-family grids
_FIG = dict(rate=0.05, vol=0.3, tau=1.0, lower=validation.FIG_A, upper=validation.FIG_B,
            v0_list=list(validation.FIG_V0), families=["pso", "pdbs"])
PRESETS = {
    "fig1": dict(_FIG, sweep_var="spot", strike=100.0),
    "fig2": dict(_FIG, sweep_var="strike", spot=math.exp(validation.FIG_X)),
    "fig3": dict(_FIG, sweep_var="v0", spot=110.0, strike=100.0),
    "fig4": dict(_FIG, sweep_var="spot", strike=100.0),
}
PRESET_GRIDS = {
    ("fig1", "pso"): (60.0, 160.0, 21), ("fig1", "pdbs"): (91.0, 129.0, 20),
    ("fig2", "pso"): (60.0, 125.0, 14), ("fig2", "pdbs"): (91.0, 128.0, 38),
    ("fig3", "pso"): (5.0, 100.0, 20), ("fig3", "pdbs"): (5.0, 100.0, 20),
    ("fig4", "pso"): (60.0, 160.0, 21), ("fig4", "pdbs"): (91.0, 129.0, 20),
}


def preset_config(name: str, **overrides) -> RunConfig:
    if name not in PRESETS:
        raise ParameterError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    base = dict(PRESETS[name], preset=name, command="sweep")
    base.update(overrides)
    return RunConfig(**base)


def _row(cfg: RunConfig, kind, sweep_value, spot, strike, v0, value=None,
         comps=None, std_error=None, dlt=None) -> Dict:
    kind = OptionKind(kind)
    row = dict.fromkeys(CSV_COLUMNS)
    row.update(kind=kind.value, sweep_var=cfg.sweep_var, sweep_value=sweep_value,
               v0=v0 if kind.is_step else None, spot=spot, strike=strike,
               rate=cfg.rate, vol=cfg.vol, tau=cfg.tau,
               lower_barrier=cfg.lower if kind.is_double else None,
               upper_barrier=None if kind is OptionKind.VANILLA else cfg.upper,
               price=value, std_error=std_error, delta=dlt)
    for key, val in (comps or {}).items():
        row[key] = val
    return row


def _evaluate(cfg: RunConfig, kind: str, spot: float, strike: float, v0: float,
              want_delta: bool):
    spec = cfg.spec(kind, strike, v0)
    x = math.log(spot)
    comps, std_error = None, None
    kw = {"spectrum": cfg.spectrum} if spec.kind is OptionKind.PDBS else {}
    if cfg.mc:
        est = mc_price(cfg.market, spec, x, cfg.paths_cfg)
        value, std_error = est.mean, est.std_error
    elif spec.kind is OptionKind.PSO_UP_OUT:
        res = pso_price(cfg.market, spec, x, cfg.quad)
        value, comps = res.price, res.components
    elif spec.kind is OptionKind.PDBS:
        res = pdbs_price(cfg.market, spec, x, cfg.quad, **kw)
        value, comps = res.price, res.components
    else:
        value = price(cfg.market, spec, x, cfg.quad)
    dlt = delta(cfg.market, spec, x, cfg.quad, **kw) if want_delta else None
    return value, comps, std_error, dlt


def _grid(cfg: RunConfig, family: str):
    if cfg.preset is not None and cfg.lo is None:
        lo, hi, n = PRESET_GRIDS[(cfg.preset, family)]
    else:
        lo, hi, n = cfg.lo, cfg.hi, cfg.points
    return [float(v) for v in np.linspace(lo, hi, n)]


def sweep_rows(cfg: RunConfig) -> List[Dict]:
    """Rows in fixed order: family, v0 series, grid; then reference kinds."""
    if cfg.sweep_var is None:
        raise ParameterError("sweep needs a preset or --var/--lo/--hi")
    want_delta = cfg.preset == "fig4"
    families = cfg.families or [cfg.kind]
    rows = []
    for fam in families:
        grid = _grid(cfg, fam)
        is_step = OptionKind(fam).is_step
        series = (cfg.v0_list or [cfg.v0]) if is_step else [cfg.v0]
        if cfg.sweep_var == "v0":
            series = [None]
        for v0 in series:
            for val in grid:
                spot, strike = cfg.spot, cfg.strike
                v = v0
                if cfg.sweep_var == "spot":
                    spot = val
                elif cfg.sweep_var == "strike":
                    strike = val
                else:
                    v = val
                out = _evaluate(cfg, fam, spot, strike, v, want_delta)
                rows.append(_row(cfg, fam, val, spot, strike, v, *out))
        refs = []
        if is_step:
            refs.append("uosb" if fam == "pso" else "sdb")
        refs.append("vanilla")
        for ref in refs:
            for val in grid:
                spot = val if cfg.sweep_var == "spot" else cfg.spot
                strike = val if cfg.sweep_var == "strike" else cfg.strike
                sub = replace(cfg, mc=False)
                out = _evaluate(sub, ref, spot, strike, None, want_delta)
                rows.append(_row(cfg, ref, val, spot, strike, None, *out))
    return rows


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(rows: Sequence[Dict], columns: Sequence[str] = CSV_COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serialisable: {type(o)}")


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def cmd_price(cfg: RunConfig) -> str:
    spec = cfg.spec()
    x = math.log(cfg.spot)
    payload = {"kind": spec.kind.value, "spot": cfg.spot, "strike": cfg.strike,
               "rate": cfg.rate, "vol": cfg.vol, "tau": cfg.tau, "v0": spec.v0,
               "upper_barrier": spec.upper, "lower_barrier": spec.lower}
    if cfg.mc:
        est = mc_price(cfg.market, spec, x, cfg.paths_cfg)
        payload.update(price=est.mean, std_error=est.std_error, mc=asdict(est))
        row = _row(cfg, spec.kind, None, cfg.spot, cfg.strike, spec.v0, est.mean,
                   std_error=est.std_error)
    elif spec.kind is OptionKind.PSO_UP_OUT:
        res = pso_price(cfg.market, spec, x, cfg.quad)
        payload.update(price=res.price, components=res.components, diagnostics=res.diagnostics)
        row = _row(cfg, spec.kind, None, cfg.spot, cfg.strike, spec.v0, res.price, res.components)
    elif spec.kind is OptionKind.PDBS:
        res = pdbs_price(cfg.market, spec, x, cfg.quad, spectrum=cfg.spectrum)
        payload.update(price=res.price, components=res.components, diagnostics=res.diagnostics)
        row = _row(cfg, spec.kind, None, cfg.spot, cfg.strike, spec.v0, res.price, res.components)
    else:
        value = price(cfg.market, spec, x, cfg.quad)
        payload.update(price=value)
        row = _row(cfg, spec.kind, None, cfg.spot, cfg.strike, None, value)
    if (cfg.format or "json") == "csv":
        return to_csv([row])
    return to_json(payload)


def cmd_greeks(cfg: RunConfig) -> str:
    spec = cfg.spec()
    kw = {"spectrum": cfg.spectrum} if spec.kind is OptionKind.PDBS else {}
    d = delta(cfg.market, spec, math.log(cfg.spot), cfg.quad, **kw)
    row = _row(cfg, spec.kind, None, cfg.spot, cfg.strike, spec.v0, dlt=d)
    if (cfg.format or "json") == "csv":
        return to_csv([row])
    return to_json({"kind": spec.kind.value, "spot": cfg.spot, "strike": cfg.strike,
                    "v0": spec.v0, "delta": d})


def cmd_sweep(cfg: RunConfig) -> str:
    rows = sweep_rows(cfg)
    if (cfg.format or "csv") == "json":
        return to_json(rows)
    return to_csv(rows)


def cmd_tables(cfg: RunConfig) -> str:
    if cfg.command == "table1":
        rows = validation.table1_rows()
        cols = ["n", "low_rel_err", "high_rel_err", "low_formula", "high_formula"]
    else:
        rows = [{k: v for k, v in r.items() if k != "display"} for r in validation.table2_rows()]
        cols = ["v0", "beta", "n_max", "m_max1", "m_max2", "m1", "m2"]
    if (cfg.format or "csv") == "json":
        return to_json(rows)
    return to_csv(rows, cols)


def cmd_validate(cfg: RunConfig):
    """Run every check; the market echoed in ``cfg`` was validated on construction."""
    results = validation.run_all(quick=cfg.quick, seed=cfg.seed)
    report = {"passed": all(r.passed for r in results), "quick": cfg.quick,
              "seed": cfg.seed,
              "checks": [{"name": r.name, "passed": r.passed, "details": r.details}
                         for r in results]}
    return to_json(report), report["passed"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stepoptions", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file mirroring the run options")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--seed", type=int)
    contract = argparse.ArgumentParser(add_help=False)
    contract.add_argument("--kind", choices=[k.value for k in OptionKind])
    contract.add_argument("--spot", type=float)
    contract.add_argument("--strike", type=float)
    contract.add_argument("--rate", type=float)
    contract.add_argument("--vol", type=float)
    contract.add_argument("--tau", type=float)
    contract.add_argument("--v0", type=float, help="knock-out rate per year")
    contract.add_argument("--upper", type=float, help="upper barrier as a price level")
    contract.add_argument("--lower", type=float, help="lower barrier as a price level")
    contract.add_argument("--log-upper", type=float, dest="log_upper")
    contract.add_argument("--log-lower", type=float, dest="log_lower")
    contract.add_argument("--spectrum", choices=["mixed", "exact", "low"])
    contract.add_argument("--rel-tol", type=float, dest="rel_tol")
    contract.add_argument("--mc", action="store_true", default=None,
                          help="price by Monte Carlo instead")
    contract.add_argument("--paths", type=int)
    contract.add_argument("--steps", type=int, help="time steps per year")

    sub.add_parser("price", parents=[common, contract])
    sub.add_parser("greeks", parents=[common, contract])
    sw = sub.add_parser("sweep", parents=[common, contract])
    sw.add_argument("--preset", choices=sorted(PRESETS))
    sw.add_argument("--var", dest="sweep_var", choices=["spot", "strike", "v0"])
    sw.add_argument("--lo", type=float)
    sw.add_argument("--hi", type=float)
    sw.add_argument("--points", type=int)
    sw.add_argument("--v0-list", dest="v0_list", type=float, nargs="+")
    sw.add_argument("--families", nargs="+", choices=[k.value for k in OptionKind])
    sub.add_parser("table1", parents=[common])
    sub.add_parser("table2", parents=[common])
    va = sub.add_parser("validate", parents=[common])
    va.add_argument("--quick", action="store_true", default=None)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(ns, "config", None):
        with open(ns.config, encoding="utf-8") as fh:
            values.update(json.load(fh))
    args = {k: v for k, v in vars(ns).items() if v is not None and k != "config"}
    if "upper" in args:
        args["upper"] = math.log(args["upper"])
    if "lower" in args:
        args["lower"] = math.log(args["lower"])
    if "log_upper" in args:
        args["upper"] = args.pop("log_upper")
    if "log_lower" in args:
        args["lower"] = args.pop("log_lower")
    values.update(args)
    known = {f.name for f in fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    preset = values.get("preset")
    if preset:
        base = dict(PRESETS[preset], preset=preset)
        base.update(values)
        values = base
    return RunConfig(**values)


def _write(text: str, out: Optional[str]):
    if not out:
        sys.stdout.write(text)
        return
    if not os.path.isabs(out) and os.environ.get(OUTPUT_DIR_ENV):
        out = os.path.join(os.environ[OUTPUT_DIR_ENV], out)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        status = 0
        if cfg.command == "price":
            text = cmd_price(cfg)
        elif cfg.command == "greeks":
            text = cmd_greeks(cfg)
        elif cfg.command == "sweep":
            text = cmd_sweep(cfg)
        elif cfg.command in ("table1", "table2"):
            text = cmd_tables(cfg)
        else:
            text, ok = cmd_validate(cfg)
            status = 0 if ok else 1
    except (StepOptionError, ValueError, TypeError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    _write(text, cfg.out)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
