import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memkick import fastsum
from memkick.fastsum import SumStrategy, memory_sum, trajectory_sums
from memkick.special_fn import HorizonError, build_kernel_table

DIRECT = SumStrategy("direct")
COMP = SumStrategy("direct_compensated")
CHUNK = SumStrategy("chunked_convolution")
ALL = [DIRECT, COMP, CHUNK]


def brute(w, y, n):
    # the double loop the sums are defined by
    return sum(w[n + 1 - k] * y[k - 1] for k in range(1, n + 1))


@pytest.mark.parametrize("strategy", ALL + [SumStrategy("truncated", 3)])
def test_zero_series(strategy):
    t = build_kernel_table(0.5, 10)
    assert memory_sum(t, np.zeros(10), 10, strategy) == 0.0


@pytest.mark.parametrize("strategy", ALL)
def test_unit_weights(strategy):
    t = build_kernel_table(1.0, 3)
    assert memory_sum(t, [3.0, 4.0, 5.0], 3, strategy) == pytest.approx(12.0, abs=1e-14)


@pytest.mark.parametrize("strategy", ALL)
def test_two_term_example(strategy):
    t = build_kernel_table(0.5, 2)
    # 10 * 2**-0.5 + 10, mpmath: 17.071067811865475244
    assert memory_sum(t, [10.0, 10.0], 2, strategy) == pytest.approx(17.071067811865475244, rel=1e-15)


@pytest.mark.parametrize("strategy", ALL)
def test_trajectory_examples(strategy):
    t = build_kernel_table(1.0, 4)
    np.testing.assert_allclose(trajectory_sums(t, [1, 1, 1, 1], 4, strategy), [1, 2, 3, 4], atol=1e-14)
    t = build_kernel_table(0.5, 1)
    assert trajectory_sums(t, [2.5], 1, strategy)[0] == pytest.approx(2.5, abs=1e-15)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 1.0, 1.7])
@pytest.mark.parametrize("strategy", ALL)
def test_against_brute_force_double_loop(alpha, strategy):
    rng = np.random.default_rng(3)
    n_max = 16
    t = build_kernel_table(alpha, n_max)
    y = rng.normal(size=n_max)
    got = trajectory_sums(t, y, n_max, strategy)
    want = [brute(t.power_weights, y, n) for n in range(1, n_max + 1)]
    np.testing.assert_allclose(got, want, rtol=1e-13, atol=1e-13)
    for n in range(1, n_max + 1):
        assert memory_sum(t, y, n, strategy) == pytest.approx(want[n - 1], rel=1e-13, abs=1e-13)


def test_shift_lag_structure():
    # prepending a zero period shifts every sum by one index
    rng = np.random.default_rng(4)
    t = build_kernel_table(0.6, 17)
    y = rng.normal(size=16)
    shifted = np.concatenate([[0.0], y])
    a = trajectory_sums(t, y, 16)
    b = trajectory_sums(t, shifted, 17)
    assert b[0] == 0.0
    np.testing.assert_allclose(b[1:], a, rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("alpha", [0.05, 0.3, 0.5, 0.7, 0.95, 1.0])
def test_chunked_matches_compensated(alpha):
    rng = np.random.default_rng(11)
    n_max = 8192
    t = build_kernel_table(alpha, n_max)
    y = rng.uniform(-1, 1, n_max)
    ref = trajectory_sums(t, y, n_max, COMP)
    got = trajectory_sums(t, y, n_max, CHUNK)
    assert fastsum.relative_deviation(got, ref) <= 1e-10


def test_chunked_pointwise_on_positive_series():
    rng = np.random.default_rng(12)
    t = build_kernel_table(0.4, 5000)
    y = rng.uniform(0.1, 2.0, 5000)
    ref = trajectory_sums(t, y, 5000, COMP)
    got = trajectory_sums(t, y, 5000, CHUNK)
    np.testing.assert_allclose(got, ref, rtol=1e-10)


def test_non_power_of_two_lengths():
    rng = np.random.default_rng(13)
    for n in (1, 2, 31, 33, 100, 1000, 1025):
        t = build_kernel_table(0.5, n)
        y = rng.normal(size=n)
        np.testing.assert_allclose(
            trajectory_sums(t, y, n, CHUNK), trajectory_sums(t, y, n, COMP), rtol=1e-12, atol=1e-12
        )


@given(seed=st.integers(0, 2**31), window=st.integers(1, 40), alpha=st.floats(0.05, 1.0))
@settings(max_examples=50, deadline=None)
def test_truncation_bound_is_sound(seed, window, alpha):
    rng = np.random.default_rng(seed)
    n = 40
    t = build_kernel_table(alpha, n)
    y = rng.uniform(0, 5, n)
    exact = memory_sum(t, y, n, COMP)
    trunc = memory_sum(t, y, n, SumStrategy("truncated", window))
    bound = fastsum.truncation_bound(t, y, n, window)
    assert abs(trunc - exact) <= bound * (1 + 1e-12) + 1e-12


def test_truncated_window_larger_than_n_is_full_sum():
    t = build_kernel_table(0.5, 5)
    y = np.arange(1.0, 6.0)
    assert memory_sum(t, y, 5, SumStrategy("truncated", 50)) == memory_sum(t, y, 5, COMP)
    assert fastsum.truncation_bound(t, y, 5, 50) == 0.0


def test_horizon_exceeded():
    t = build_kernel_table(0.5, 4)
    with pytest.raises(HorizonError):
        memory_sum(t, np.ones(10), 5)
    with pytest.raises(HorizonError):
        trajectory_sums(t, np.ones(10), 5, CHUNK)


def test_series_too_short():
    t = build_kernel_table(0.5, 10)
    with pytest.raises(ValueError):
        memory_sum(t, np.ones(3), 5)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("direct", SumStrategy("direct")),
        ("compensated", SumStrategy("direct_compensated")),
        ("chunked", SumStrategy("chunked_convolution")),
        ("truncated:64", SumStrategy("truncated", 64)),
    ],
)
def test_parse_strategy(text, expected):
    assert SumStrategy.parse(text) == expected
    assert SumStrategy.parse(str(expected)) == expected


@pytest.mark.parametrize("text", ["fast", "truncated", "truncated:0", "truncated:x", "direct:3"])
def test_parse_strategy_rejects(text):
    with pytest.raises(ValueError):
        SumStrategy.parse(text)


@pytest.mark.parametrize("strategy", ALL)
def test_online_matches_offline(strategy):
    # feed a series through the online driver and compare with the offline sums
    rng = np.random.default_rng(5)
    n = 300
    y = rng.normal(size=n)
    t = build_kernel_table(0.35, n)
    c, x = fastsum.causal_sums_online(t.power_weights, n, lambda i, s: (y[i],), 1, strategy)
    np.testing.assert_array_equal(x[0], y)
    np.testing.assert_allclose(c[0], fastsum.causal_sums(t, y, n, COMP), rtol=1e-12, atol=1e-12)


def test_online_feedback_is_causal():
    # x[i] = 1 + c[i]: each step must only see finished sums
    n = 200
    t = build_kernel_table(0.6, n)
    w = t.power_weights
    want = np.zeros(n)
    for i in range(n):
        want[i] = 1.0 + sum(w[i - k] * want[k] for k in range(i)) * 1e-3
    for strategy in ALL:
        _, x = fastsum.causal_sums_online(w, n, lambda i, s: (1.0 + 1e-3 * s[0],), 1, strategy)
        np.testing.assert_allclose(x[0], want, rtol=1e-12)


def test_direct_strategies_bit_identical_across_runs():
    rng = np.random.default_rng(6)
    t = build_kernel_table(0.5, 500)
    y = rng.normal(size=500)
    for s in (DIRECT, COMP):
        assert np.array_equal(trajectory_sums(t, y, 500, s), trajectory_sums(t, y, 500, s))


def test_bench_structure():
    rows = fastsum.bench_strategies(0.5, 2, trials=1)
    assert sorted(r.strategy for r in rows) == sorted(str(s) for s in fastsum.BENCH_STRATEGIES)
    assert [r.seconds for r in rows] == sorted(r.seconds for r in rows)
    csv = fastsum.bench_to_csv(rows)
    assert csv.splitlines()[0] == "strategy,n_max,alpha,seconds,max_rel_dev"
    assert len(csv.splitlines()) == 1 + len(rows)


def test_bench_unit_weights_exact():
    for r in fastsum.bench_strategies(1.0, 1024, trials=1):
        assert r.max_rel_dev <= 1e-12


def test_bench_chunked_accuracy():
    rows = {r.strategy: r for r in fastsum.bench_strategies(0.5, 8192, trials=1)}
    assert rows["chunked_convolution"].max_rel_dev <= 1e-10


def test_bench_inputs_are_reproducible():
    _, a = fastsum.bench_inputs(0.5, 100)
    _, b = fastsum.bench_inputs(0.5, 100)
    assert np.array_equal(a, b)
    assert a.min() >= -1 and a.max() <= 1


def _best_time(fn, repeat=3):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


@pytest.mark.slow
def test_complexity_scaling():
    rng = np.random.default_rng(8)
    n = 8192
    t = build_kernel_table(0.5, 4 * 2**15)
    y = rng.uniform(-1, 1, 4 * 2**15)
    trajectory_sums(t, y[:64], 64, DIRECT)
    direct_1 = _best_time(lambda: trajectory_sums(t, y, n, DIRECT))
    direct_2 = _best_time(lambda: trajectory_sums(t, y, 2 * n, DIRECT))
    assert direct_2 / direct_1 > 3.0

    m = 2**16
    chunk_1 = _best_time(lambda: trajectory_sums(t, y, m, CHUNK))
    chunk_2 = _best_time(lambda: trajectory_sums(t, y, 2 * m, CHUNK))
    assert chunk_2 / chunk_1 < 2.5
