"""Exact discrete maps with power-law memory and their memoryless limits.

A value at index ``k`` in any series is the left limit at the ``k``-th kick,
``t = k*T``. Series arguments are passed as plain arrays holding periods
``1..n`` in slots ``0..n-1``.

The first-order maps (``0 < alpha <= 1``) advance capital and output by::

    K[n+1] = K[0] + c * sum_{k=1}^{n} (n+1-k)**(alpha-1) * Y[k]            (cumulative)
    K[n+1] = K[n] + c * Y[n] + c * sum_{k=1}^{n-1} V(n-k) * Y[k]            (incremental)
    Y[n+1] = Y[n] + d * I[n] + d * sum_{k=1}^{n-1} V(n-k) * I[k]

with ``c = s*T**alpha/Gamma(alpha)`` and ``d = T**alpha/(v*Gamma(alpha))``.
At ``alpha = 1`` every ``V`` vanishes and the classical period equations
come back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import fastsum
from .fastsum import DEFAULT_STRATEGY, SumStrategy
from .special_fn import KernelTable, MemoryOrder, build_kernel_table, gamma

__all__ = [
    "InitialState",
    "MapParams",
    "OrderError",
    "Trajectory",
    "capital_map_cumulative",
    "capital_map_incremental",
    "capital_trajectory_cumulative",
    "capital_trajectory_incremental",
    "classical_capital_step",
    "classical_output_step",
    "general_map_step",
    "multiplier_limit",
    "output_map_incremental",
]


class OrderError(ValueError):
    """Memory order outside the range a map is defined for."""


@dataclass(frozen=True)
class MapParams:
    """Order, propensity to save ``s``, investment coefficient ``v`` and step ``T``."""

    alpha: MemoryOrder
    s: float
    v: float
    T: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", MemoryOrder.coerce(self.alpha))
        for name in ("s", "v", "T"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value}")
            object.__setattr__(self, name, value)

    @property
    def capital_coef(self) -> float:
        """``s * T**alpha / Gamma(alpha)``."""
        a = self.alpha.alpha
        return self.s * self.T**a / gamma(a)

    @property
    def output_coef(self) -> float:
        """``T**alpha / (v * Gamma(alpha))``."""
        a = self.alpha.alpha
        return self.T**a / (self.v * gamma(a))


@dataclass(frozen=True)
class InitialState:
    """Capital stock and its integer-order derivatives at ``t = 0``."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(x) for x in np.atleast_1d(self.values))
        if not vals:
            raise ValueError("initial state needs at least K0")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> float:
        return self.values[k]

    def check(self, order: MemoryOrder) -> None:
        if len(self.values) != order.n_bracket:
            raise ValueError(
                f"order {order.alpha} needs {order.n_bracket} initial values, got {len(self.values)}"
            )


@dataclass
class Trajectory:
    """Aligned per-period channels sharing one step ``T``.

    ``series`` maps channel names (``"Y"``, ``"I"``, ``"K"``, ...) to arrays
    indexed by period ``n = 0..len-1``.
    """

    step: float
    series: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        self.series = {k: np.asarray(v, dtype=float) for k, v in self.series.items()}
        lengths = {len(v) for v in self.series.values()}
        if len(lengths) > 1:
            raise ValueError(f"channels differ in length: {sorted(lengths)}")

    def __len__(self) -> int:
        return len(next(iter(self.series.values()))) if self.series else 0

    def __getitem__(self, name: str) -> np.ndarray:
        return self.series[name]

    @property
    def t(self) -> np.ndarray:
        return self.step * np.arange(len(self))


def _first_order(params: MapParams) -> float:
    a = params.alpha.alpha
    if not 0.0 < a <= 1.0:
        raise OrderError(f"first-order maps need 0 < alpha <= 1, got {a}")
    return a


def _table(alpha: float, horizon: int, table: KernelTable | None) -> KernelTable:
    if table is not None:
        if table.alpha != alpha:
            raise ValueError(f"kernel table is for alpha={table.alpha}, map needs {alpha}")
        if table.horizon >= horizon:
            return table
    return build_kernel_table(alpha, max(horizon, 1))


def general_map_step(
    params: MapParams,
    init: InitialState,
    y_history,
    m: int,
    n: int,
    strategy: SumStrategy = DEFAULT_STRATEGY,
) -> float:
    """``K^{(m)}`` at period ``n + 1`` for any non-integer order.

    ``sum_{k=0}^{N-m-1} T**k/k! * K0^{(k+m)} * (n+1)**k
    + s*T**(alpha-m)/Gamma(alpha-m) * sum_{k=1}^{n} (n+1-k)**(alpha-1-m) * Y[k]``

    The memory sum is forced by ``Y[k]`` itself on every channel ``m``.

    Raises
    ------
    OrderError
        For integer ``alpha``; those orders use the first-order maps.
    IndexError
        If ``m`` is not in ``0..N-1``.
    """
    order = params.alpha
    if order.is_integer:
        raise OrderError(f"general map needs non-integer alpha, got {order.alpha}")
    big_n = order.n_bracket
    init.check(order)
    if not 0 <= m < big_n:
        raise IndexError(f"derivative channel m={m} outside 0..{big_n - 1}")
    y = np.asarray(y_history, dtype=float)
    if n < 0 or len(y) != n:
        raise ValueError(f"y_history must hold exactly n={n} values, got {len(y)}")

    T = params.T
    poly = 0.0
    for k in range(big_n - m):
        poly += T**k / math.factorial(k) * init[k + m] * (n + 1) ** k
    if n == 0:
        return poly
    a_m = order.alpha - m
    table = build_kernel_table(a_m, n)
    mem = fastsum.memory_sum(table, y, n, strategy)
    return poly + params.s * T**a_m / gamma(a_m) * mem


def capital_map_cumulative(
    params: MapParams,
    k0: float,
    y_history,
    n: int,
    strategy: SumStrategy = DEFAULT_STRATEGY,
    table: KernelTable | None = None,
) -> float:
    """``K[n+1]`` from ``K[0]`` and the full output history ``Y[1..n]``."""
    a = _first_order(params)
    y = np.asarray(y_history, dtype=float)
    if n < 0 or len(y) < n:
        raise ValueError(f"need n >= 0 and at least n={n} history values, got {len(y)}")
    if n == 0:
        return float(k0)
    table = _table(a, n, table)
    return float(k0) + params.capital_coef * fastsum.memory_sum(table, y, n, strategy)


def _v_sum(alpha: float, history: np.ndarray, n: int, strategy: SumStrategy, table: KernelTable | None) -> float:
    # sum_{k=1}^{n-1} V(n-k) x[k] is the causal v-channel sum at index n - 1
    if n <= 1 or alpha == 1.0:
        return 0.0
    table = _table(alpha, n, table)
    return fastsum.memory_sum(table.v_weights, history, n - 1, strategy)


def capital_map_incremental(
    params: MapParams,
    k_n: float,
    y_history,
    n: int,
    strategy: SumStrategy = DEFAULT_STRATEGY,
    table: KernelTable | None = None,
) -> float:
    """``K[n+1]`` from ``K[n]`` and ``Y[1..n]`` (memory enters through ``V``)."""
    a = _first_order(params)
    y = np.asarray(y_history, dtype=float)
    if n < 1 or len(y) < n:
        raise ValueError(f"need n >= 1 and at least n={n} history values, got {len(y)}")
    c = params.capital_coef
    return float(k_n) + c * y[n - 1] + c * _v_sum(a, y, n, strategy, table)


def output_map_incremental(
    params: MapParams,
    y_n: float,
    i_history,
    n: int,
    strategy: SumStrategy = DEFAULT_STRATEGY,
    table: KernelTable | None = None,
) -> float:
    """``Y[n+1]`` from ``Y[n]`` and the investment history ``I[1..n]``."""
    a = _first_order(params)
    inv = np.asarray(i_history, dtype=float)
    if n < 1 or len(inv) < n:
        raise ValueError(f"need n >= 1 and at least n={n} history values, got {len(inv)}")
    d = params.output_coef
    return float(y_n) + d * inv[n - 1] + d * _v_sum(a, inv, n, strategy, table)


def classical_capital_step(params: MapParams, k_n: float, y_n: float) -> float:
    """Memoryless capital step ``K[n+1] = K[n] + s*T*Y[n]``."""
    return k_n + params.s * params.T * y_n


def classical_output_step(params: MapParams, y_n: float, i_n: float) -> float:
    """Memoryless output step ``Y[n+1] = Y[n] + (T/v)*I[n]``."""
    return y_n + params.T / params.v * i_n


def multiplier_limit(v: float, y: float) -> float:
    """Zero-memory reduction: investment proportional to output, ``I = v*Y``."""
    if not v > 0:
        raise ValueError(f"v must be positive, got {v}")
    return v * y


# -- whole trajectories -----------------------------------------------------


def capital_trajectory_cumulative(
    params: MapParams, k0: float, y_series, strategy: SumStrategy = DEFAULT_STRATEGY
) -> np.ndarray:
    """``K[0..n+1]`` for ``Y[1..n]``, every entry from the cumulative map.

    All prefix memory sums are computed in one pass.
    """
    a = _first_order(params)
    y = np.asarray(y_series, dtype=float)
    n = len(y)
    out = np.empty(n + 2)
    out[:2] = k0
    if n:
        table = build_kernel_table(a, n)
        out[2:] = float(k0) + params.capital_coef * fastsum.trajectory_sums(table, y, n, strategy)
    return out


def capital_trajectory_incremental(
    params: MapParams, k0: float, y_series, strategy: SumStrategy = DEFAULT_STRATEGY
) -> np.ndarray:
    """``K[0..n+1]`` for ``Y[1..n]``, iterating the incremental map.

    ``K[1] = K[0]`` (empty memory sum), then one incremental step per period.
    """
    a = _first_order(params)
    y = np.asarray(y_series, dtype=float)
    n = len(y)
    out = np.empty(n + 2)
    out[:2] = k0
    if n == 0:
        return out
    table = build_kernel_table(a, n)
    for j in range(1, n + 1):
        out[j + 1] = capital_map_incremental(params, out[j], y, j, strategy, table)
    return out
