import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memkick.economy import (
    Closure,
    DivergenceError,
    Scenario,
    classical_matthews_check,
    run_scenario,
    warranted_growth_rate,
)
from memkick.fastsum import SumStrategy
from memkick.memory_maps import MapParams, capital_trajectory_cumulative
from memkick.special_fn import HorizonError


def oracle_economy(alpha, s, v, T, closure, h, y0, k0, i0=0.0, a=None, b=None, series=None):
    """Plain-loop reference with mpmath kernels; period n is kick n + 1."""
    mpmath.mp.dps = 30
    al = mpmath.mpf(alpha)
    g = mpmath.gamma(al)
    e = mpmath.mpf(T) ** al / g

    def V(z):
        return (z + 1) ** (al - 1) - mpmath.mpf(z) ** (al - 1)

    Y = [mpmath.mpf(y0)]
    K = [mpmath.mpf(k0)]
    I = []
    for n in range(h + 1):
        if closure == "harrod_domar":
            I.append(s * Y[n])
        elif closure == "matthews":
            I.append(a * Y[n] - b * K[n])
        elif closure == "exogenous_investment":
            I.append(mpmath.mpf(i0) if n == 0 else mpmath.mpf(series[n - 1]))
        if n == h:
            break
        flow = I[n] + mpmath.fsum(V(n - k) * I[k] for k in range(n))
        Y.append(Y[n] + e / v * flow)
        K.append(K[n] + e * flow)
    return [np.array([float(x) for x in ch]) for ch in (Y, I, K)]


def test_harrod_domar_classical_y5():
    p = MapParams(1.0, s=0.2, v=2.0, T=1.0)
    tr = run_scenario(Scenario(p, Closure.harrod_domar(), 5, y0=100.0))
    assert tr["Y"][5] == pytest.approx(161.051, rel=1e-14)
    np.testing.assert_allclose(tr["Y"][1:] / tr["Y"][:-1], 1.1, rtol=1e-14)


def test_harrod_domar_log_linear():
    p = MapParams(1.0, s=0.2, v=2.0, T=1.0)
    y = run_scenario(Scenario(p, Closure.harrod_domar(), 100, y0=100.0))["Y"]
    assert np.max(np.abs(np.diff(np.log(y)) - math.log(1.1))) <= 1e-9


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.0])
def test_zero_investment_keeps_output_flat(alpha):
    p = MapParams(alpha, s=0.2, v=2.0)
    tr = run_scenario(Scenario(p, Closure.exogenous_investment(np.zeros(40)), 40, y0=7.0))
    assert np.all(tr["Y"] == 7.0)


@pytest.mark.parametrize(
    "closure, kw",
    [
        ("harrod_domar", {}),
        ("matthews", dict(a=2.0, b=0.5)),
        ("exogenous_investment", dict(series=list(np.sin(np.arange(1, 31)) + 1.0), i0=0.5)),
    ],
)
@pytest.mark.parametrize("alpha", [0.35, 0.8])
def test_against_high_precision_oracle(closure, kw, alpha):
    s, v, T, h = 0.2, 2.0, 1.3, 30
    p = MapParams(alpha, s=s, v=v, T=T)
    if closure == "harrod_domar":
        cl = Closure.harrod_domar()
    elif closure == "matthews":
        cl = Closure.matthews(kw["a"], kw["b"])
    else:
        cl = Closure.exogenous_investment(kw["series"])
    tr = run_scenario(Scenario(p, cl, h, y0=100.0, k0=50.0, i0=kw.get("i0", 0.0)))
    Y, I, K = oracle_economy(alpha, s, v, T, closure, h, 100.0, 50.0, **kw)
    for name, want in zip("YIK", (Y, I, K)):
        np.testing.assert_allclose(tr[name], want, rtol=1e-12, atol=1e-10)


def test_harrod_domar_capital_is_the_capital_map():
    # with I = sY the capital channel is the cumulative map forced by Y
    alpha = 0.6
    p = MapParams(alpha, s=0.25, v=3.0, T=1.0)
    tr = run_scenario(Scenario(p, Closure.harrod_domar(), 200, y0=10.0, k0=4.0))
    ref = capital_trajectory_cumulative(p, 4.0, tr["Y"][:-1])
    np.testing.assert_allclose(tr["K"], ref[1:], rtol=1e-11)


def test_matthews_particular_case():
    a = 2.0
    p = MapParams(1.0, s=0.2, v=a, T=1.0)
    tr = run_scenario(Scenario(p, Closure.matthews(a, 1.0), 1000, y0=100.0, k0=150.0))
    y, inv = tr["Y"], tr["I"]
    assert np.max(np.abs(inv[1:] - a * (y[1:] - y[:-1]))) <= 1e-9


def test_classical_matthews_check_examples():
    assert classical_matthews_check(1.5, 50, np.full(51, 3.0)) <= 1e-12
    assert classical_matthews_check(2.0, 100, np.arange(1.0, 102.0)) <= 1e-9
    rng = np.random.default_rng(9)
    walk = 100 + np.cumsum(rng.normal(size=1001))
    assert classical_matthews_check(0.5, 1000, walk) <= 1e-9
    with pytest.raises(ValueError):
        classical_matthews_check(0.5, 10, np.ones(5))


def test_warranted_growth_rate():
    assert warranted_growth_rate(0.2, 2.0, 1.0) == pytest.approx(0.1)
    assert warranted_growth_rate(0.0, 5.0, 1.0) == 0.0
    assert warranted_growth_rate(0.3, 3.0, 1.0) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        warranted_growth_rate(0.2, 0.0)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9])
@pytest.mark.parametrize("s, v, T", [(0.2, 2.0, 1.0), (0.4, 1.0, 1.0), (0.1, 3.0, 2.0)])
def test_memory_slows_accumulation(alpha, s, v, T):
    h = 60
    mem = run_scenario(Scenario(MapParams(alpha, s, v, T), Closure.harrod_domar(), h, y0=10.0, k0=5.0))
    classic = run_scenario(Scenario(MapParams(1.0, s, v, T), Closure.harrod_domar(), h, y0=10.0, k0=5.0))
    assert np.all(mem["K"] <= classic["K"] * (1 + 1e-14))


@given(lam=st.floats(0.01, 100.0), alpha=st.floats(0.1, 1.0), kind=st.sampled_from(["harrod_domar", "matthews"]))
@settings(max_examples=40, deadline=None)
def test_scale_invariance(lam, alpha, kind):
    p = MapParams(alpha, s=0.2, v=2.0)
    cl = Closure.harrod_domar() if kind == "harrod_domar" else Closure.matthews(1.5, 0.3)
    base = run_scenario(Scenario(p, cl, 60, y0=10.0, k0=3.0, i0=1.0, lagged_closure=True))
    scaled = run_scenario(Scenario(p, cl, 60, y0=10.0 * lam, k0=3.0 * lam, i0=lam, lagged_closure=True))
    for ch in "YIK":
        np.testing.assert_allclose(scaled[ch], lam * base[ch], rtol=1e-11, atol=1e-11 * lam)


def test_exogenous_output_copies_series():
    series = np.linspace(101.0, 120.0, 20)
    p = MapParams(0.5, s=0.3, v=2.0)
    tr = run_scenario(Scenario(p, Closure.exogenous_output(series), 20, y0=100.0))
    assert tr["Y"][0] == 100.0
    np.testing.assert_array_equal(tr["Y"][1:], series)
    np.testing.assert_allclose(tr["I"], 0.3 * tr["Y"])


def test_lagged_timing():
    p = MapParams(1.0, s=0.2, v=2.0)
    tr = run_scenario(Scenario(p, Closure.harrod_domar(), 10, y0=100.0, i0=3.0, lagged_closure=True))
    assert tr["I"][0] == 3.0
    np.testing.assert_allclose(tr["I"][1:], 0.2 * tr["Y"][:-1])


def test_horizon_zero():
    tr = run_scenario(Scenario(MapParams(0.5, 0.2, 2.0), Closure.harrod_domar(), 0, y0=5.0))
    assert len(tr) == 1 and tr["Y"][0] == 5.0 and tr["I"][0] == 1.0


@pytest.mark.parametrize("strategy", ["direct", "chunked", "compensated"])
def test_strategy_independent(strategy):
    p = MapParams(0.45, s=0.2, v=2.0)
    cl = Closure.matthews(1.2, 0.4)
    ref = run_scenario(Scenario(p, cl, 700, y0=10.0, k0=2.0))
    got = run_scenario(Scenario(p, cl, 700, y0=10.0, k0=2.0, strategy=SumStrategy.parse(strategy)))
    for ch in "YIK":
        np.testing.assert_allclose(got[ch], ref[ch], rtol=1e-10, atol=1e-10)


def test_divergence_guard():
    p = MapParams(1.0, s=0.9, v=0.1)
    with pytest.raises(DivergenceError) as info:
        run_scenario(Scenario(p, Closure.harrod_domar(), 500, y0=100.0))
    assert info.value.period < 500


def test_scenario_validation(monkeypatch):
    p = MapParams(0.5, 0.2, 2.0)
    with pytest.raises(ValueError):
        Scenario(MapParams(1.5, 0.2, 2.0), Closure.harrod_domar(), 5, y0=1.0)
    with pytest.raises(ValueError):
        Scenario(p, Closure.harrod_domar(), -1, y0=1.0)
    with pytest.raises(ValueError):
        Scenario(p, Closure.exogenous_investment([1.0, 2.0]), 5, y0=1.0)
    with pytest.raises(ValueError):
        Closure.matthews(1.0, 0.0)
    with pytest.raises(ValueError):
        Closure("keynes")
    monkeypatch.setenv("MEMKICK_MAX_HORIZON", "10")
    with pytest.raises(HorizonError):
        Scenario(p, Closure.harrod_domar(), 11, y0=1.0)
