import dataclasses
import math

import pytest

from stepoptions import (MarketParams, PathConfig, StepOptionSpec, bs_call_closed,
                         mc_convergence_report, mc_price, uosb_price)
from stepoptions.core import ParameterError

from conftest import LN90, LN130

X110 = math.log(110.0)
VANILLA = StepOptionSpec("vanilla", 100.0, 1.0)
SMALL = PathConfig(n_paths=40_000, seed=7)


def test_vanilla_within_three_se(mp):
    est = mc_price(mp, VANILLA, X110, SMALL)
    assert abs(est.mean - bs_call_closed(mp, 110, 100, 1.0)) <= 3 * est.std_error
    assert est.std_error > 0 and est.n_paths == SMALL.n_paths and est.seed == 7
    assert "Philox" in est.rng


def test_zero_variance_limit():
    mp = MarketParams(0.05, 0.001)
    est = mc_price(mp, StepOptionSpec("uosb", 100.0, 1.0, upper=math.log(1e6)), X110, SMALL)
    forward = 110.0 * math.exp(0.05 - 0.5 * 0.001 ** 2)
    assert est.mean == pytest.approx(math.exp(-0.05) * (forward - 100.0), abs=1e-3)


def test_huge_rate_matches_hard_kill_on_same_seed(mp):
    pc = dataclasses.replace(SMALL, bridge=False)
    step = mc_price(mp, StepOptionSpec("pso", 100.0, 1.0, upper=LN130, v0=1e6), X110, pc)
    hard = mc_price(mp, StepOptionSpec("uosb", 100.0, 1.0, upper=LN130), X110, pc)
    assert abs(step.mean - hard.mean) <= 3 * hard.std_error


def test_bridge_removes_monitoring_bias(mp):
    spec = StepOptionSpec("uosb", 100.0, 1.0, upper=LN130)
    exact = uosb_price(mp, X110, spec)
    est = mc_price(mp, spec, X110, SMALL)
    assert abs(est.mean - exact) <= 3 * est.std_error


def test_sdb_hard_kill_matches_series(mp):
    from stepoptions import sdb_price
    spec = StepOptionSpec("sdb", 100.0, 1.0, upper=LN130, lower=LN90)
    est = mc_price(mp, spec, X110, PathConfig(n_paths=100_000))
    assert abs(est.mean - sdb_price(mp, X110, spec)) <= 3 * est.std_error


def test_deterministic_per_seed(mp):
    spec = StepOptionSpec("pdbs", 100.0, 1.0, upper=LN130, lower=LN90, v0=26.0)
    assert mc_price(mp, spec, X110, SMALL) == mc_price(mp, spec, X110, SMALL)


def test_different_seed_gives_different_stream(mp):
    a = mc_price(mp, VANILLA, X110, SMALL)
    b = mc_price(mp, VANILLA, X110, dataclasses.replace(SMALL, seed=8))
    assert a.mean != b.mean


def test_convergence_ladder(mp):
    rows = mc_convergence_report(mp, VANILLA, X110, SMALL, [10_000, 40_000, 160_000])
    assert [r[0] for r in rows] == [10_000, 40_000, 160_000]
    for (_, _, se1), (_, _, se2) in zip(rows, rows[1:]):
        assert se2 / se1 == pytest.approx(0.5, rel=0.2)
    exact = bs_call_closed(mp, 110, 100, 1.0)
    assert all(abs(m - exact) <= 3 * se for _, m, se in rows)
    assert rows == mc_convergence_report(mp, VANILLA, X110, SMALL, [10_000, 40_000, 160_000])
    with pytest.raises(ParameterError):
        mc_convergence_report(mp, VANILLA, X110, SMALL, [40_000, 10_000])


def test_antithetic_does_not_inflate_variance(mp):
    anti = mc_price(mp, VANILLA, X110, SMALL)
    plain = mc_price(mp, VANILLA, X110, dataclasses.replace(SMALL, antithetic=False))
    assert anti.std_error <= plain.std_error


def test_monotone_in_rate_with_common_numbers(mp):
    means = [mc_price(mp, StepOptionSpec("pso", 100.0, 1.0, upper=LN130, v0=v0), X110, SMALL).mean
             for v0 in (5.0, 13.0, 26.0, 55.0, 200.0)]
    assert all(b <= a for a, b in zip(means, means[1:]))


def test_step_refinement_bias_small(mp):
    spec = StepOptionSpec("pso", 100.0, 1.0, upper=LN130, v0=55.0)
    coarse = mc_price(mp, spec, X110, SMALL)
    fine = mc_price(mp, spec, X110, dataclasses.replace(SMALL, n_steps=500))
    assert abs(fine.mean - coarse.mean) < 2 * coarse.std_error


@pytest.mark.parametrize("kw", [{"n_paths": 10}, {"n_steps": 10}, {"seed": -1}, {"n_paths": 40_001}])
def test_path_config_guards(kw):
    with pytest.raises(ParameterError):
        PathConfig(**kw)
