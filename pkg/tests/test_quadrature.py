import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stepoptions import QuadConfig, integrate, integrate_semi_infinite
from stepoptions.core import ParameterError
from stepoptions.quadrature import DivergenceError, QuadratureError


def test_polynomial():
    val, err = integrate(lambda x: x * x, 0.0, 1.0)
    assert val == pytest.approx(1 / 3, abs=1e-14)
    assert err >= 0


def test_normal_density_mass():
    val, _ = integrate(lambda x: np.exp(-x * x / 2) / math.sqrt(2 * math.pi), -6.0, 6.0)
    assert abs(val - 1.0) < 2e-9


def test_sine():
    assert integrate(np.sin, 0.0, math.pi)[0] == pytest.approx(2.0, abs=1e-13)


def test_oscillatory_needs_refinement():
    val, _ = integrate(lambda x: np.cos(200 * x), 0.0, 1.0)
    assert val == pytest.approx(math.sin(200) / 200, abs=1e-12)


def test_empty_interval():
    assert integrate(np.exp, 2.0, 2.0) == (0.0, 0.0)


def test_exhausted_budget_carries_estimate():
    cfg = QuadConfig(rel_tol=1e-14, abs_tol=1e-300, max_subdivisions=3)
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: np.sqrt(np.abs(x - 0.3)), 0.0, 1.0, cfg)
    assert math.isfinite(info.value.value)


def test_semi_infinite():
    assert integrate_semi_infinite(lambda x: np.exp(-x), 0.0, 1.0)[0] == pytest.approx(1.0, abs=1e-12)
    assert integrate_semi_infinite(lambda x: x * np.exp(-2 * x), 0.0, 2.0)[0] == pytest.approx(0.25, abs=1e-12)


def test_zero_decay_diverges():
    with pytest.raises(DivergenceError):
        integrate_semi_infinite(lambda x: np.ones_like(x), 0.0, 0.0)


@pytest.mark.parametrize("field, bad", [("rel_tol", 0.0), ("abs_tol", -1.0),
                                        ("max_subdivisions", 0), ("endpoint_clip", 0.5)])
def test_config_invariants(field, bad):
    with pytest.raises(ParameterError):
        QuadConfig(**{field: bad})


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(a, b):
    f = lambda x: np.exp(-x * x)
    g = lambda x: np.cos(3 * x)
    lhs = integrate(lambda x: a * f(x) + b * g(x), -2.0, 2.0)[0]
    rhs = a * integrate(f, -2.0, 2.0)[0] + b * integrate(g, -2.0, 2.0)[0]
    assert lhs == pytest.approx(rhs, abs=1e-9 * (abs(a) + abs(b) + 1))


def test_refinement_never_hurts():
    exact = math.sqrt(math.pi) * math.erf(2.0)
    f = lambda x: np.exp(-x * x) * (1 + 0.1 * np.cos(40 * x)) - 0.1 * np.exp(-x * x) * np.cos(40 * x)
    prev = math.inf
    for tol in (1e-4, 5e-5, 2.5e-5, 1.25e-5, 1e-8):
        err = abs(integrate(f, -2.0, 2.0, QuadConfig(rel_tol=tol))[0] - exact)
        assert err <= prev * (1 + 1e-12) + 1e-15
        prev = err


def test_deterministic():
    f = lambda x: np.exp(np.sin(5 * x))
    assert integrate(f, 0.0, 7.0) == integrate(f, 0.0, 7.0)
