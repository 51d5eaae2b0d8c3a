"""Self-checks run by ``memkick validate``.

Each check measures one residual and compares it with a fixed tolerance.
The quick level keeps every check under a second or so; the full level adds
the long-horizon and oracle checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fastsum
from .economy import Closure, Scenario, classical_matthews_check, run_scenario
from .fastsum import SumStrategy
from .fractional_oracle import SampledFunction, caputo_derivative, inverse_property_check
from .memory_maps import (
    InitialState,
    MapParams,
    capital_map_cumulative,
    capital_map_incremental,
    capital_trajectory_cumulative,
    capital_trajectory_incremental,
    classical_capital_step,
    classical_output_step,
    general_map_step,
    output_map_incremental,
)
from .special_fn import build_kernel_table, gamma

SEED = 7


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual)) and self.residual <= self.tolerance

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name:<44s} residual={self.residual:.3e}  tol={self.tolerance:.1e}"


def _rel(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.abs(b)))


def gamma_recurrence() -> float:
    x = np.linspace(0.5, 20.0, 400)
    return max(abs(gamma(xi + 1) - xi * gamma(xi)) / abs(gamma(xi + 1)) for xi in x)


def kernel_telescoping(alpha: float = 0.5, m: int = 5000) -> float:
    table = build_kernel_table(alpha, m + 1)
    total = math.fsum(abs(v) for v in table.v_weights[1 : m + 1])
    closed = 1.0 - (m + 1) ** (alpha - 1.0)
    return abs(total - closed) / closed


def classical_reduction(cases: int = 10, length: int = 1000) -> float:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(cases):
        p = MapParams(1.0, s=rng.uniform(0.05, 0.5), v=rng.uniform(0.5, 5.0), T=rng.uniform(0.2, 3.0))
        y = rng.uniform(-10, 10, length)
        inv = rng.uniform(-10, 10, length)
        k, out = rng.uniform(1, 100), rng.uniform(1, 100)
        n = int(rng.integers(1, length + 1))
        a = capital_map_incremental(p, k, y, n)
        b = classical_capital_step(p, k, y[n - 1])
        c = output_map_incremental(p, out, inv, n)
        d = classical_output_step(p, out, inv[n - 1])
        worst = max(worst, abs(a - b) / abs(b), abs(c - d) / abs(d))
    return worst


def cumulative_vs_incremental(alphas=(0.1, 0.5, 0.9), steps: int = 10_000) -> float:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for a in alphas:
        p = MapParams(a, s=0.2, v=2.0, T=1.0)
        y = rng.uniform(0.5, 1.5, steps)
        cum = capital_trajectory_cumulative(p, 1.0, y)
        inc = capital_trajectory_incremental(p, 1.0, y)
        worst = max(worst, _rel(inc, cum))
    return worst


def general_vs_cumulative(cases: int = 200) -> float:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(cases):
        a = rng.uniform(0.05, 0.95)
        p = MapParams(a, s=rng.uniform(0.05, 0.5), v=1.0, T=rng.uniform(0.5, 2.0))
        n = int(rng.integers(0, 60))
        y = rng.uniform(0, 10, n)
        k0 = rng.uniform(1, 10)
        g = general_map_step(p, InitialState((k0,)), y, 0, n)
        c = capital_map_cumulative(p, k0, y, n)
        worst = max(worst, abs(g - c) / abs(c))
    return worst


def matthews_residual(periods: int = 1000) -> float:
    a = 2.0
    p = MapParams(1.0, s=0.2, v=a, T=1.0)
    tr = run_scenario(Scenario(p, Closure.matthews(a, 1.0), periods, y0=100.0, k0=150.0))
    y, inv = tr["Y"], tr["I"]
    model = float(np.max(np.abs(inv[1:] - a * (y[1:] - y[:-1]))))
    rng = np.random.default_rng(SEED)
    walk = 100 + np.cumsum(rng.normal(size=periods + 1))
    return max(model, classical_matthews_check(0.5, periods, walk))


def harrod_domar_geometric(periods: int = 100) -> float:
    p = MapParams(1.0, s=0.2, v=2.0, T=1.0)
    y = run_scenario(Scenario(p, Closure.harrod_domar(), periods, y0=100.0))["Y"]
    return float(np.max(np.abs(np.diff(np.log(y)) - math.log1p(0.1))))


def strategy_agreement(n_max: int = 8192, alphas=(0.3, 0.7, 1.0)) -> float:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for a in alphas:
        table = build_kernel_table(a, n_max)
        y = rng.uniform(-1, 1, n_max)
        ref = fastsum.trajectory_sums(table, y, n_max)
        fast = fastsum.trajectory_sums(table, y, n_max, SumStrategy("chunked_convolution"))
        worst = max(worst, fastsum.relative_deviation(fast, ref))
    return worst


def caputo_closed_form() -> float:
    worst = 0.0
    for beta in (1, 2, 3):
        for a in (0.25, 0.5, 0.75):
            for t in (0.5, 1.0, 2.0):
                exact = gamma(beta + 1) / gamma(beta - a + 1) * t ** (beta - a)
                got = caputo_derivative(SampledFunction.power(beta), a, t)
                worst = max(worst, abs(got - exact) / exact)
    return worst


def inverse_property() -> float:
    cases = ((SampledFunction.power(2), 0.5, 1.0), (SampledFunction.power(1), 0.9, 2.0),
             (SampledFunction.power(3), 0.3, 1.5))
    return max(abs(inverse_property_check(f, a, t)) for f, a, t in cases)


def constant_forcing_asymptotics(n: int = 10_000, alpha: float = 0.5) -> float:
    p = MapParams(alpha, s=0.2, v=1.0, T=1.0)
    k = capital_trajectory_cumulative(p, 0.0, np.ones(n))
    ratio = k[n + 1] / (0.2 * n**alpha / gamma(alpha + 1))
    return abs(ratio - 1.0)


Check = tuple[str, Callable[[], float], float]

QUICK: list[Check] = [
    ("gamma recurrence", gamma_recurrence, 1e-12),
    ("kernel telescoping sum", kernel_telescoping, 1e-12),
    ("classical reduction at alpha=1", classical_reduction, 1e-12),
    ("cumulative-vs-incremental (2000 steps)", lambda: cumulative_vs_incremental((0.5,), 2000), 1e-10),
    ("general map vs cumulative map", general_vs_cumulative, 1e-13),
    ("Matthews accelerator residual", lambda: matthews_residual(200), 1e-9),
    ("Harrod-Domar log-linearity", harrod_domar_geometric, 1e-9),
    ("chunked vs compensated (n=2048)", lambda: strategy_agreement(2048), 1e-10),
    ("Caputo of t^2 at alpha=0.5", lambda: abs(
        caputo_derivative(SampledFunction.power(2), 0.5, 1.0) / (2 / gamma(2.5)) - 1), 1e-6),
]

FULL: list[Check] = [
    ("gamma recurrence", gamma_recurrence, 1e-12),
    ("kernel telescoping sum", kernel_telescoping, 1e-12),
    ("classical reduction at alpha=1", classical_reduction, 1e-12),
    ("cumulative-vs-incremental max rel dev", cumulative_vs_incremental, 1e-10),
    ("general map vs cumulative map", lambda: general_vs_cumulative(1000), 1e-13),
    ("Matthews accelerator residual", matthews_residual, 1e-9),
    ("Harrod-Domar log-linearity", harrod_domar_geometric, 1e-9),
    ("chunked vs compensated (n=8192)", strategy_agreement, 1e-10),
    ("Caputo closed-form law", caputo_closed_form, 1e-6),
    ("RL-of-Caputo inverse-property residual", inverse_property, 1e-5),
    ("constant-forcing asymptotic ratio", constant_forcing_asymptotics, 1e-2),
]


def run_checks(level: str = "quick") -> list[CheckResult]:
    if level not in ("quick", "full"):
        raise ValueError(f"level must be quick or full, got {level!r}")
    checks = QUICK if level == "quick" else FULL
    results = []
    for name, fn, tol in checks:
        try:
            residual = float(fn())
        except Exception:  # a crashing check is a failed check
            residual = math.inf
        results.append(CheckResult(name, residual, tol))
    return results
