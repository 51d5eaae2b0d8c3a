"""Evaluation strategies for power-law memory sums.

All sums here reduce to one causal convolution against a 1-based lag table
``w`` (``w[0]`` is never read)::

    c[i] = sum_{k=0}^{i-1} w[i - k] * x[k]

The public ``memory_sum(w, y, n)`` is ``c[n]`` for ``x = y``, i.e.
``sum_{k=1}^{n} w(n + 1 - k) * Y_k`` when ``y[k - 1]`` holds ``Y_k``.

Strategies
----------
direct
    Plain left-to-right accumulation, O(n) per sum.
direct_compensated
    Left-to-right Neumaier (error-recycling) summation. This is the defining
    semantics every other strategy is measured against.
chunked_convolution
    Divide-and-conquer over power-of-two blocks, each block's contribution to
    the later half evaluated as one linear convolution. O(n log^2 n) for a
    whole trajectory, and it works online: the series may be produced one
    entry at a time from the sums already available.
truncated(window)
    Only the ``window`` most recent lags. No accuracy contract; see
    :func:`truncation_bound`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numba
import numpy as np
from scipy import fft as sp_fft

from .special_fn import HorizonError, build_kernel_table

__all__ = [
    "BENCH_SEED",
    "BenchRow",
    "SumStrategy",
    "bench_strategies",
    "bench_to_csv",
    "causal_sums",
    "causal_sums_online",
    "memory_sum",
    "relative_deviation",
    "trajectory_sums",
    "truncation_bound",
]

BENCH_SEED = 20170601

# block sizes at or below these use direct loops / np.convolve instead of FFTs
_LEAF = 32
_FFT_MIN = 256

_KINDS = ("direct", "direct_compensated", "chunked_convolution", "truncated")
_ALIASES = {
    "direct": "direct",
    "compensated": "direct_compensated",
    "direct_compensated": "direct_compensated",
    "chunked": "chunked_convolution",
    "chunked_convolution": "chunked_convolution",
    "truncated": "truncated",
}


@dataclass(frozen=True)
class SumStrategy:
    kind: str = "direct_compensated"
    window: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown sum strategy {self.kind!r}")
        if self.kind == "truncated":
            if self.window is None or int(self.window) < 1:
                raise ValueError("truncated strategy needs window >= 1")
            object.__setattr__(self, "window", int(self.window))
        elif self.window is not None:
            raise ValueError(f"strategy {self.kind!r} takes no window")

    @classmethod
    def parse(cls, text: str) -> "SumStrategy":
        """Parse ``direct``, ``compensated``, ``chunked`` or ``truncated:<window>``."""
        text = text.strip()
        name, _, arg = text.partition(":")
        kind = _ALIASES.get(name.strip())
        if kind is None:
            raise ValueError(f"unknown sum strategy {text!r}")
        if kind == "truncated":
            if not arg.strip():
                raise ValueError("truncated strategy needs a window, e.g. truncated:64")
            try:
                window = int(arg)
            except ValueError:
                raise ValueError(f"bad truncation window {arg!r}") from None
            return cls(kind, window)
        if arg:
            raise ValueError(f"strategy {name!r} takes no argument")
        return cls(kind)

    def __str__(self) -> str:
        if self.kind == "truncated":
            return f"truncated:{self.window}"
        return self.kind


DEFAULT_STRATEGY = SumStrategy()


# -- direct kernels ---------------------------------------------------------


@numba.njit(cache=True)
def _dot_direct(w, x, i, lo):
    s = 0.0
    for k in range(lo, i):
        s += w[i - k] * x[k]
    return s


@numba.njit(cache=True)
def _dot_compensated(w, x, i, lo):
    s = 0.0
    c = 0.0
    for k in range(lo, i):
        p = w[i - k] * x[k]
        t = s + p
        if abs(s) >= abs(p):
            c += (s - t) + p
        else:
            c += (p - t) + s
        s = t
    return s + c


@numba.njit(cache=True)
def _all_direct(w, x, n_out, window):
    out = np.zeros(n_out)
    for i in range(1, n_out):
        lo = max(0, i - window)
        out[i] = _dot_direct(w, x, i, lo)
    return out


@numba.njit(cache=True)
def _all_compensated(w, x, n_out, window):
    out = np.zeros(n_out)
    for i in range(1, n_out):
        lo = max(0, i - window)
        out[i] = _dot_compensated(w, x, i, lo)
    return out


def _window_of(strategy: SumStrategy, i: int) -> int:
    if strategy.kind == "truncated":
        return min(strategy.window, i)
    return i


def _point_sum(w: np.ndarray, x: np.ndarray, i: int, strategy: SumStrategy) -> float:
    if i <= 0:
        return 0.0
    lo = i - _window_of(strategy, i)
    if strategy.kind == "direct":
        return float(_dot_direct(w, x, i, lo))
    return float(_dot_compensated(w, x, i, lo))


# -- chunked (online divide and conquer) -----------------------------------


def _linear_conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Full linear convolution along the last axis; ``b`` is 1-D."""
    if b.shape[-1] <= _FFT_MIN:
        if a.ndim == 1:
            return np.convolve(a, b)
        return np.stack([np.convolve(row, b) for row in a])
    size = a.shape[-1] + b.shape[-1] - 1
    nfft = sp_fft.next_fast_len(size, real=True)
    fa = sp_fft.rfft(a, nfft, axis=-1)
    fb = sp_fft.rfft(b, nfft)
    return sp_fft.irfft(fa * fb, nfft, axis=-1)[..., :size]


def _chunked(
    w: np.ndarray,
    x: np.ndarray,
    length: int,
    step: Callable[[int, np.ndarray], Sequence[float]] | None,
) -> np.ndarray:
    """Causal sums for ``x`` of shape ``(channels, length)``.

    With ``step`` given, ``x[:, i]`` is filled by ``step(i, c[:, i])`` as soon
    as ``c[:, i]`` is final; otherwise ``x`` must be complete on entry.
    """
    channels = x.shape[0]
    padded = _LEAF
    while padded < length:
        padded *= 2
    # lags beyond length - 1 only reach outputs that are discarded
    wz = np.zeros(padded + 1)
    m = min(len(w), length)
    wz[1:m] = w[1:m]
    c = np.zeros((channels, padded))
    xb = np.zeros((channels, padded))
    xb[:, :length] = x[:, :length]

    # strictly lower Toeplitz block for offline leaves: toe[k, i] = w[i - k], k < i
    lag = np.arange(_LEAF)[None, :] - np.arange(_LEAF)[:, None]
    toe = np.where(lag > 0, wz[np.clip(lag, 0, padded)], 0.0)

    def leaf(lo: int, hi: int) -> None:
        if step is None:
            c[:, lo:hi] += xb[:, lo:hi] @ toe[: hi - lo, : hi - lo]
            return
        for i in range(lo, min(hi, length)):
            if i > lo:
                c[:, i] += xb[:, lo:i] @ wz[i - lo : 0 : -1]
            xb[:, i] = step(i, c[:, i].copy())

    def solve(lo: int, hi: int) -> None:
        if lo >= length:
            return
        if hi - lo <= _LEAF:
            leaf(lo, hi)
            return
        mid = (lo + hi) // 2
        solve(lo, mid)
        if mid < length:
            # x[lo:mid] reaches c[mid:hi] through lags 1 .. hi - lo - 1
            conv = _linear_conv(xb[:, lo:mid], wz[1 : hi - lo])
            top = min(hi, length)
            c[:, mid:top] += conv[:, mid - lo - 1 : top - lo - 1]
        solve(mid, hi)

    solve(0, padded)
    if step is not None:
        x[:, :length] = xb[:, :length]
    return c[:, :length]


# -- public API -------------------------------------------------------------


def _as_weights(weights) -> np.ndarray:
    w = getattr(weights, "power_weights", weights)
    return np.ascontiguousarray(w, dtype=float)


def _check_horizon(w: np.ndarray, n: int) -> None:
    if n > len(w) - 1:
        raise HorizonError(f"sum over {n} lags exceeds the weight table horizon {len(w) - 1}")


def causal_sums(weights, x, length: int | None = None, strategy: SumStrategy = DEFAULT_STRATEGY) -> np.ndarray:
    """``c[i] = sum_{k<i} w[i-k] x[k]`` for ``i = 0..length-1``.

    ``x`` may be 1-D or ``(channels, length)``; the result has the same shape.
    Lags beyond ``len(w) - 1`` raise :class:`HorizonError`.
    """
    w = _as_weights(weights)
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x2 = np.atleast_2d(x)
    if length is None:
        length = x2.shape[1]
    if length > x2.shape[1]:
        raise ValueError(f"series has {x2.shape[1]} entries, {length} needed")
    _check_horizon(w, length - 1)
    if length == 0:
        out = np.zeros((x2.shape[0], 0))
    elif strategy.kind == "chunked_convolution":
        out = _chunked(w, x2.copy(), length, None)
    else:
        window = strategy.window if strategy.kind == "truncated" else length
        fn = _all_direct if strategy.kind == "direct" else _all_compensated
        out = np.stack([fn(w, np.ascontiguousarray(row[:length]), length, window) for row in x2])
    return out[0] if single else out


def causal_sums_online(
    weights,
    length: int,
    step: Callable[[int, np.ndarray], Sequence[float]],
    channels: int = 1,
    strategy: SumStrategy = DEFAULT_STRATEGY,
) -> tuple[np.ndarray, np.ndarray]:
    """Causal sums for a series generated on the fly.

    For ``i = 0, 1, ...`` the callback receives ``i`` and the finished sums
    ``c[:, i]`` (one per channel) and returns the channel values ``x[:, i]``.
    The callback may raise to abort. Returns ``(c, x)``, each shaped
    ``(channels, length)``.
    """
    w = _as_weights(weights)
    _check_horizon(w, length - 1)
    x = np.zeros((channels, length))
    if strategy.kind == "chunked_convolution":
        c = _chunked(w, x, length, step)
        return c, x
    c = np.zeros((channels, length))
    for i in range(length):
        if i > 0:
            for ch in range(channels):
                c[ch, i] = _point_sum(w, x[ch], i, strategy)
        x[:, i] = step(i, c[:, i].copy())
    return c, x


def memory_sum(weights, series, n: int, strategy: SumStrategy = DEFAULT_STRATEGY) -> float:
    """``sum_{k=1}^{n} w(n + 1 - k) * series_k`` with ``series_k = series[k - 1]``.

    ``weights`` is a 1-based table (a :class:`~memkick.special_fn.KernelTable`
    gives its power channel). A truncated window larger than ``n`` means the
    full sum.
    """
    w = _as_weights(weights)
    y = np.ascontiguousarray(series, dtype=float)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if len(y) < n:
        raise ValueError(f"series has {len(y)} entries, {n} needed")
    _check_horizon(w, n)
    if n == 0:
        return 0.0
    if strategy.kind == "chunked_convolution":
        x = np.zeros(n + 1)
        x[:n] = y[:n]
        return float(causal_sums(w, x, n + 1, strategy)[n])
    return _point_sum(w, y, n, strategy)


def trajectory_sums(weights, series, n_max: int, strategy: SumStrategy = DEFAULT_STRATEGY) -> np.ndarray:
    """All prefix sums ``memory_sum(w, series, n)`` for ``n = 1..n_max``."""
    y = np.asarray(series, dtype=float)
    if len(y) < n_max:
        raise ValueError(f"series has {len(y)} entries, {n_max} needed")
    x = np.zeros(n_max + 1)
    x[:n_max] = y[:n_max]
    return causal_sums(weights, x, n_max + 1, strategy)[1:]


def truncation_bound(weights, series, n: int, window: int) -> float:
    """Upper bound on what a ``window``-lag truncation drops from ``memory_sum``.

    ``sum_{k <= n - window} |w(n + 1 - k)| * max_k |series_k|``.
    """
    w = _as_weights(weights)
    y = np.asarray(series, dtype=float)[:n]
    if window >= n or n == 0:
        return 0.0
    dropped = np.abs(w[window + 1 : n + 1]).sum()
    return float(dropped * np.abs(y).max())


def relative_deviation(a, b) -> float:
    """``max|a - b| / max|b|``; absolute when ``b`` is identically zero."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.abs(b).max() if b.size else 0.0
    err = np.abs(a - b).max() if b.size else 0.0
    return float(err / scale) if scale > 0 else float(err)


# -- benchmark --------------------------------------------------------------


@dataclass(frozen=True)
class BenchRow:
    strategy: str
    n_max: int
    alpha: float
    seconds: float
    max_rel_dev: float


BENCH_STRATEGIES = (
    SumStrategy("direct"),
    SumStrategy("direct_compensated"),
    SumStrategy("chunked_convolution"),
)


def bench_inputs(alpha: float, n_max: int, seed: int = BENCH_SEED):
    """Power-weight table and a uniform [-1, 1] series from a fixed seed."""
    rng = np.random.default_rng(seed)
    series = rng.uniform(-1.0, 1.0, n_max)
    return build_kernel_table(alpha, n_max), series


def bench_strategies(alpha: float, n_max: int, trials: int = 1, seed: int = BENCH_SEED) -> list[BenchRow]:
    """Time every registered strategy on one trajectory of prefix sums.

    Wall time is the best of ``trials`` runs; deviation is measured against
    ``direct_compensated``. Rows come back sorted by wall time.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    table, series = bench_inputs(alpha, n_max, seed)
    w = table.power_weights
    # warm the JIT so compile time is not billed to the first strategy
    for s in BENCH_STRATEGIES:
        trajectory_sums(w, series[:2], 2, s)

    reference = trajectory_sums(w, series, n_max, DEFAULT_STRATEGY)
    rows = []
    for s in BENCH_STRATEGIES:
        best = np.inf
        for _ in range(trials):
            t0 = time.perf_counter()
            out = trajectory_sums(w, series, n_max, s)
            best = min(best, time.perf_counter() - t0)
        rows.append(BenchRow(str(s), n_max, float(alpha), best, relative_deviation(out, reference)))
    rows.sort(key=lambda r: r.seconds)
    return rows


def bench_to_csv(rows: Sequence[BenchRow]) -> str:
    lines = ["strategy,n_max,alpha,seconds,max_rel_dev"]
    for r in rows:
        lines.append(f"{r.strategy},{r.n_max},{r.alpha!r},{r.seconds:.6e},{r.max_rel_dev:.6e}")
    return "\n".join(lines) + "\n"
