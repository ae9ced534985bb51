import math

import pytest

from stepoptions import (StepOptionSpec, bs_call_closed, bs_call_kernel, bs_kernel,
                         sdb_price, uosb_price)
from stepoptions.baseline import bs_delta_closed, sdb_terms
from stepoptions.quadrature import integrate

from conftest import LN90, LN130
from oracles import sdb_image, uosb_image


def _uosb(k=100.0, upper=LN130):
    return StepOptionSpec("uosb", k, 1.0, upper=upper)


def _sdb(k=100.0, lower=LN90, upper=LN130):
    return StepOptionSpec("sdb", k, 1.0, upper=upper, lower=lower)


def test_closed_form_reference(mp):
    assert bs_call_closed(mp, 110, 100, 1.0) == pytest.approx(21.06, abs=0.01)


def test_closed_form_limits(mp):
    assert bs_call_closed(mp, 110, 1e-9, 1.0) == pytest.approx(110.0, abs=1e-6)
    assert bs_call_closed(mp, 110, 100, 1e-10) == pytest.approx(10.0, abs=1e-6)


def test_kernel_normalisation_and_peak(mp):
    tau, x = 1.0, math.log(110)
    mass = integrate(lambda y: bs_kernel(mp, x, y, tau), x - 5, x + 5)[0]
    assert abs(mass - math.exp(-mp.r * tau)) < 1e-8
    x0 = x + tau * (mp.r - mp.sigma ** 2 / 2)
    peak = math.exp(-mp.r * tau) / math.sqrt(2 * math.pi * tau * mp.sigma ** 2)
    assert bs_kernel(mp, x, x0, tau) == pytest.approx(peak, rel=1e-14)


@pytest.mark.parametrize("s, k, tau", [(110, 100, 1.0), (80, 120, 0.5), (100, 100, 2.0)])
def test_kernel_price_matches_closed_form(mp, s, k, tau):
    assert abs(bs_call_kernel(mp, s, k, tau) - bs_call_closed(mp, s, k, tau)) < 1e-6


def test_closed_delta_is_nd1(mp):
    d1 = (math.log(110 / 100) + 0.05 + 0.045) / 0.3
    from stepoptions import normal_cdf
    assert bs_delta_closed(mp, 110, 100, 1.0) == pytest.approx(normal_cdf(d1), rel=1e-14)


def test_uosb_matches_image_formula(mp):
    got = uosb_price(mp, math.log(110), _uosb())
    assert got == pytest.approx(uosb_image(110, 100, LN130, 0.05, 0.3, 1.0), rel=1e-4)


@pytest.mark.parametrize("s, k", [(95, 90), (120, 110), (70, 100)])
def test_uosb_image_grid(mp, s, k):
    got = uosb_price(mp, math.log(s), _uosb(k))
    assert got == pytest.approx(uosb_image(s, k, LN130, 0.05, 0.3, 1.0), rel=1e-6, abs=1e-10)


def test_uosb_trivial_cases(mp):
    assert uosb_price(mp, math.log(110), _uosb(k=140.0)) == 0.0
    assert uosb_price(mp, LN130 + 0.01, _uosb()) == 0.0
    assert uosb_price(mp, math.log(5.0), _uosb()) < 1e-12


def test_uosb_diagnostics(mp):
    price, diag = uosb_price(mp, math.log(110), _uosb(), full_output=True)
    assert price > 0 and diag.quadrature_error >= 0 and diag.truncation_bound >= 0


def test_sdb_matches_image_series(mp):
    got = sdb_price(mp, math.log(110), _sdb())
    assert got == pytest.approx(sdb_image(110, 100, LN90, LN130, 0.05, 0.3, 1.0), rel=1e-8)


def test_sdb_trivial_cases(mp):
    assert sdb_price(mp, math.log(110), _sdb(k=135.0)) == 0.0
    assert sdb_price(mp, math.log(85), _sdb()) == 0.0


def test_sdb_series_tail(mp):
    x = math.log(110)
    assert abs(sdb_price(mp, x, _sdb(), extra_terms=5) - sdb_price(mp, x, _sdb())) < 1e-10
    _, diag = sdb_price(mp, x, _sdb(), full_output=True)
    assert diag.terms_used == sdb_terms(mp, _sdb())


def test_barrier_ordering_on_grid(mp):
    for s in (92, 100, 110, 125):
        for k in (90, 100, 120):
            x = math.log(s)
            van = bs_call_closed(mp, s, k, 1.0)
            up = uosb_price(mp, x, _uosb(k))
            dbl = sdb_price(mp, x, _sdb(k))
            assert 0 <= dbl <= up + 1e-12 <= van + 1e-12
