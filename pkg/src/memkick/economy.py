"""Closed economies built on the first-order memory maps.

A closure decides investment each period; the maps then carry output and
capital forward. Period ``n`` of a scenario is the left limit at the
``(n+1)``-th kick, so period 0 already feeds the memory sums. Per period:

1. ``I[n]`` from the closure, using values dated ``n``;
2. ``Y[n+1] = Y[n] + d*(I[n] + sum_{k<n} V(n-k) I[k])``;
3. ``K[n+1] = K[n] + e*(I[n] + sum_{k<n} V(n-k) I[k])``,

with ``d = T**alpha/(v*Gamma(alpha))`` and ``e = T**alpha/Gamma(alpha)``.
Capital accumulates net investment. Under Harrod-Domar (``I = s*Y``) step 3
is exactly the capital map with propensity to save ``s``.

Closures
--------
exogenous_investment
    ``I[0] = i0``, then ``I[1..horizon]`` copied from the series.
exogenous_output
    ``Y[0] = y0``, then ``Y[1..horizon]`` copied from the series;
    ``I[n] = s*Y[n]``.
harrod_domar
    ``I[n] = s*Y[n]`` (investment equals saving).
matthews
    ``I[n] = a*Y[n] - b*K[n]``. With memory this is a model extension; only
    its ``alpha = 1`` form is a textbook result.

With ``lagged_closure=True`` the closure sees values dated ``n - 1`` and
``I[0] = i0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fastsum
from .fastsum import DEFAULT_STRATEGY, SumStrategy
from .memory_maps import InitialState, MapParams, Trajectory, classical_capital_step
from .special_fn import HorizonError, MemoryOrder, build_kernel_table, gamma, max_horizon

__all__ = [
    "CLOSURE_KINDS",
    "Closure",
    "DivergenceError",
    "Scenario",
    "classical_matthews_check",
    "run_scenario",
    "warranted_growth_rate",
]

CLOSURE_KINDS = ("exogenous_investment", "exogenous_output", "harrod_domar", "matthews")
DIVERGENCE_BOUND = 1e12


class DivergenceError(RuntimeError):
    """A channel left the configured magnitude bound."""

    def __init__(self, period: int, channel: str, value: float, bound: float):
        self.period = period
        self.channel = channel
        self.value = value
        self.bound = bound
        super().__init__(
            f"divergence at period {period}: |{channel}| = {abs(value):.6g} exceeds {bound:g}"
        )


@dataclass(frozen=True)
class Closure:
    kind: str
    series: np.ndarray | None = field(default=None, repr=False)
    a: float | None = None
    b: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in CLOSURE_KINDS:
            raise ValueError(f"unknown closure {self.kind!r}; expected one of {CLOSURE_KINDS}")
        if self.kind.startswith("exogenous"):
            if self.series is None:
                raise ValueError(f"{self.kind} closure needs a series")
            object.__setattr__(self, "series", np.asarray(self.series, dtype=float))
        if self.kind == "matthews":
            for name in ("a", "b"):
                value = getattr(self, name)
                if value is None or not value > 0:
                    raise ValueError(f"matthews closure needs positive {name}, got {value}")

    @classmethod
    def harrod_domar(cls) -> "Closure":
        return cls("harrod_domar")

    @classmethod
    def matthews(cls, a: float, b: float) -> "Closure":
        return cls("matthews", a=float(a), b=float(b))

    @classmethod
    def exogenous_investment(cls, series) -> "Closure":
        return cls("exogenous_investment", series=series)

    @classmethod
    def exogenous_output(cls, series) -> "Closure":
        return cls("exogenous_output", series=series)


@dataclass(frozen=True)
class Scenario:
    params: MapParams
    closure: Closure
    horizon: int
    y0: float
    k0: InitialState | float = 0.0
    i0: float = 0.0
    strategy: SumStrategy = DEFAULT_STRATEGY
    lagged_closure: bool = False
    divergence_bound: float = DIVERGENCE_BOUND

    def __post_init__(self) -> None:
        if not isinstance(self.k0, InitialState):
            object.__setattr__(self, "k0", InitialState((self.k0,)))
        a = self.params.alpha.alpha
        if not 0.0 < a <= 1.0:
            raise ValueError(f"scenarios use the first-order maps and need 0 < alpha <= 1, got {a}")
        if len(self.k0) != 1:
            raise ValueError(f"first-order scenarios take one initial capital value, got {len(self.k0)}")
        if int(self.horizon) != self.horizon or self.horizon < 0:
            raise ValueError(f"horizon must be a non-negative integer, got {self.horizon}")
        cap = max_horizon()
        if self.horizon > cap:
            raise HorizonError(f"horizon {self.horizon} exceeds the configured maximum {cap}")
        series = self.closure.series
        if series is not None and len(series) < self.horizon:
            raise ValueError(
                f"{self.closure.kind} series has {len(series)} values, horizon needs {self.horizon}"
            )


def run_scenario(scenario: Scenario) -> Trajectory:
    """Simulate ``horizon`` periods; channels ``Y``, ``I``, ``K`` have ``horizon + 1`` entries.

    Raises
    ------
    DivergenceError
        When any channel exceeds ``scenario.divergence_bound`` in magnitude.
    """
    p = scenario.params
    cl = scenario.closure
    h = int(scenario.horizon)
    alpha = p.alpha.alpha
    scale = p.T**alpha / gamma(alpha)
    d = scale / p.v
    bound = scenario.divergence_bound

    Y = np.empty(h + 1)
    K = np.empty(h + 1)
    Y[0] = scenario.y0
    K[0] = scenario.k0[0]

    def closure_at(n: int) -> float:
        if cl.kind == "exogenous_investment":
            return scenario.i0 if n == 0 else float(cl.series[n - 1])
        if scenario.lagged_closure:
            if n == 0:
                return scenario.i0
            n -= 1
        if cl.kind == "matthews":
            return cl.a * Y[n] - cl.b * K[n]
        return p.s * Y[n]

    def guard(n: int) -> None:
        for name, arr in (("Y", Y), ("K", K)):
            val = arr[n]
            if not (math.isfinite(val) and abs(val) <= bound):
                raise DivergenceError(n, name, val, bound)

    guard(0)

    def step(n: int, memory: np.ndarray) -> tuple[float]:
        i_n = closure_at(n)
        if not (math.isfinite(i_n) and abs(i_n) <= bound):
            raise DivergenceError(n, "I", i_n, bound)
        if n < h:
            flow = i_n + memory[0]
            if cl.kind == "exogenous_output":
                Y[n + 1] = cl.series[n]
            else:
                Y[n + 1] = Y[n] + d * flow
            K[n + 1] = K[n] + scale * flow
            guard(n + 1)
        return (i_n,)

    if alpha == 1.0:
        # V vanishes identically: no memory sums at all
        inv = np.array([step(n, np.zeros(1))[0] for n in range(h + 1)])
    else:
        table = build_kernel_table(p.alpha, h + 1)
        _, x = fastsum.causal_sums_online(table.v_weights, h + 1, step, 1, scenario.strategy)
        inv = x[0]
    return Trajectory(step=p.T, series={"Y": Y, "I": inv, "K": K})


def classical_matthews_check(a: float, horizon: int, y_series) -> float:
    """Largest ``|I[t] - a*(Y[t] - Y[t-1])|`` for ``t = 1..horizon``.

    Output is taken from ``y_series``; investment follows ``I = a*Y - K`` and
    capital accumulates it one-for-one (``b = 1``, ``T = 1``, no memory),
    starting from ``K[0] = a*Y[0]``.
    """
    y = np.asarray(y_series, dtype=float)
    if len(y) < horizon + 1:
        raise ValueError(f"need {horizon + 1} output values, got {len(y)}")
    params = MapParams(MemoryOrder(1.0), s=1.0, v=a, T=1.0)
    k = a * y[0]
    worst = 0.0
    for t in range(horizon + 1):
        i_t = a * y[t] - k
        if t >= 1:
            worst = max(worst, abs(i_t - a * (y[t] - y[t - 1])))
        # with s = T = 1 the classical capital step adds the investment flow
        k = classical_capital_step(params, k, i_t)
    return worst


def warranted_growth_rate(s: float, v: float, T: float = 1.0) -> float:
    """Per-period classical growth rate ``s*T/v`` of the Harrod-Domar economy."""
    if s < 0 or not v > 0 or not T > 0:
        raise ValueError("need s >= 0, v > 0, T > 0")
    return s * T / v
