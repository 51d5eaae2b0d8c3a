"""Numerical Caputo derivative and Riemann-Liouville integral.

These are reference evaluators for smooth functions of dimensionless time,
used to check the continuous-time side of the memory maps. They are not fast
and are not meant to be.

Quadrature is a product trapezoid rule: the integrand is replaced by its
piecewise-linear interpolant on a uniform grid of ``[0, t]`` and integrated
exactly against the kernel ``(t - tau)**(mu - 1)``, so the weak singularity
at ``tau = t`` costs nothing. The grid is doubled until two successive
estimates agree to ``rtol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.signal import fftconvolve

from .special_fn import MemoryOrder, gamma

__all__ = [
    "QuadratureError",
    "SampledFunction",
    "SmoothnessError",
    "caputo_derivative",
    "inverse_property_check",
    "rl_integral",
]

RTOL = 1e-8
M_START = 32
M_CAP = 2**20


class SmoothnessError(ValueError):
    """Grid data cannot furnish the derivatives a Caputo derivative needs."""


class QuadratureError(RuntimeError):
    """Refinement cap reached before the estimates settled."""


@dataclass(frozen=True)
class SampledFunction:
    """A scalar function of time on ``[0, t_max]``.

    Either a closed-form polynomial ``sum c_b * t**b`` (``terms`` maps the
    non-negative integer power ``b`` to ``c_b``) or uniform-grid samples
    starting at ``t = 0``, evaluated by linear interpolation.
    """

    terms: Mapping[int, float] | None = None
    t: np.ndarray | None = field(default=None, repr=False)
    values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if (self.terms is None) == (self.t is None):
            raise ValueError("give either closed-form terms or grid samples")
        if self.terms is not None:
            clean = {}
            for b, c in self.terms.items():
                if int(b) != b or b < 0:
                    raise ValueError(f"closed-form powers must be non-negative integers, got {b}")
                if c != 0:
                    clean[int(b)] = clean.get(int(b), 0.0) + float(c)
            object.__setattr__(self, "terms", clean)
            return
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or len(t) < 2:
            raise ValueError("grid samples need matching 1-D arrays of length >= 2")
        if t[0] != 0.0:
            raise ValueError("grid must start at t = 0")
        dt = np.diff(t)
        if np.any(dt <= 0):
            raise ValueError("grid times must be strictly increasing")
        if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
            raise ValueError("grid must be uniform")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)

    @classmethod
    def power(cls, beta: int, coef: float = 1.0) -> "SampledFunction":
        return cls(terms={beta: coef})

    @classmethod
    def constant(cls, value: float) -> "SampledFunction":
        return cls(terms={0: value})

    @classmethod
    def from_samples(cls, t, values) -> "SampledFunction":
        return cls(t=t, values=values)

    @property
    def closed_form(self) -> bool:
        return self.terms is not None

    @property
    def t_max(self) -> float:
        return math.inf if self.closed_form else float(self.t[-1])

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.closed_form:
            out = np.zeros_like(tau)
            for b, c in self.terms.items():
                out = out + c * tau**b
            return out
        return np.interp(tau, self.t, self.values)

    def derivative(self, order: int = 1) -> "SampledFunction":
        if order == 0:
            return self
        if self.closed_form:
            terms = {}
            for b, c in self.terms.items():
                if b >= order:
                    terms[b - order] = c * math.perm(b, order)
            return SampledFunction(terms=terms)
        # one more sample than the derivative order keeps np.gradient meaningful
        if len(self.t) < order + 2:
            raise SmoothnessError(
                f"{len(self.t)} grid samples cannot furnish a derivative of order {order}"
            )
        vals = self.values
        h = self.t[1] - self.t[0]
        for _ in range(order):
            vals = np.gradient(vals, h, edge_order=2)
        return SampledFunction(t=self.t, values=vals)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        if not (self.closed_form and other.closed_form):
            return NotImplemented
        terms = dict(self.terms)
        for b, c in other.terms.items():
            terms[b] = terms.get(b, 0.0) + c
        return SampledFunction(terms=terms)

    def __rmul__(self, scale: float) -> "SampledFunction":
        if self.closed_form:
            return SampledFunction(terms={b: scale * c for b, c in self.terms.items()})
        return SampledFunction(t=self.t, values=scale * self.values)


# -- product trapezoid weights ----------------------------------------------


def _moments(mu: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-interval kernel moments in grid units, ``i = 0..count-1``.

    ``A[i] = int_i^{i+1} s**(mu-1) ds`` and ``B[i] = int_i^{i+1} (s - i) s**(mu-1) ds``.
    """
    i = np.arange(count, dtype=float)
    a = np.empty(count)
    b = np.empty(count)
    a[0] = 1.0 / mu
    b[0] = 1.0 / (mu + 1.0)
    if count > 1:
        j = i[1:]
        lg = np.log1p(1.0 / j)
        # (j+1)**p - j**p without cancellation
        a[1:] = j**mu * np.expm1(mu * lg) / mu
        c = j ** (mu + 1.0) * np.expm1((mu + 1.0) * lg) / (mu + 1.0)
        b[1:] = c - j * a[1:]
    return a, b


def _node_weights(mu: float, m: int) -> np.ndarray:
    """Weights ``w[j]`` on ``g(t - j*h)``, ``j = 0..m``, in grid units."""
    a, b = _moments(mu, m)
    w = np.empty(m + 1)
    w[0] = a[0] - b[0]
    w[1:m] = a[1:] - b[1:] + b[:-1]
    w[m] = b[m - 1]
    return w


def _rl_at_end(g: np.ndarray, h: float, mu: float) -> float:
    """RL integral of order ``mu`` at the last node of a uniform grid."""
    m = len(g) - 1
    w = _node_weights(mu, m)
    return h**mu * float(np.dot(w, g[::-1])) / gamma(mu)


def _rl_all_nodes(g: np.ndarray, h: float, mu: float) -> np.ndarray:
    """RL integral of order ``mu`` at every node of a uniform grid."""
    m = len(g) - 1
    a, b = _moments(mu, m + 1)
    stationary = np.empty(m + 1)
    stationary[0] = a[0] - b[0]
    stationary[1:] = a[1:] - b[1:] + b[:-1]
    conv = fftconvolve(g, stationary)[: m + 1]
    # the leftmost node only sees the tail of its one interval
    conv[1:] -= (a[1:] - b[1:]) * g[0]
    out = h**mu * conv / gamma(mu)
    out[0] = 0.0
    return out


def _refine(estimate, rtol: float, m_cap: int) -> float:
    m = M_START
    prev = estimate(m)
    while True:
        m *= 2
        if m > m_cap:
            raise QuadratureError(f"no convergence to rtol={rtol:g} within {m_cap} intervals")
        cur = estimate(m)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur


def _check_t(f: SampledFunction, t: float) -> float:
    t = float(t)
    if not t > 0.0:
        raise ValueError(f"evaluation time must be positive, got {t}")
    if t > f.t_max * (1 + 1e-12):
        raise ValueError(f"t = {t} lies outside the sampled range [0, {f.t_max}]")
    return t


def rl_integral(f: SampledFunction, alpha: float, t: float, rtol: float = RTOL, m_cap: int = M_CAP) -> float:
    """Left-sided Riemann-Liouville integral of order ``alpha`` at ``t``.

    ``(1/Gamma(alpha)) * int_0^t f(tau) (t - tau)**(alpha - 1) dtau``.
    """
    alpha = float(alpha)
    if not alpha > 0.0:
        raise ValueError(f"integral order must be positive, got {alpha}")
    t = _check_t(f, t)

    def estimate(m: int) -> float:
        tau = np.linspace(0.0, t, m + 1)
        return _rl_at_end(f(tau), t / m, alpha)

    return _refine(estimate, rtol, m_cap)


def caputo_derivative(
    f: SampledFunction, alpha: MemoryOrder | float, t: float, rtol: float = RTOL, m_cap: int = M_CAP
) -> float:
    """Left-sided Caputo derivative of order ``alpha`` at ``t``.

    For non-integer ``alpha`` this is the RL integral of order ``n - alpha``
    applied to ``f`` differentiated ``n = floor(alpha) + 1`` times. Integer
    orders return the ordinary derivative.

    Raises
    ------
    SmoothnessError
        Grid data too short to differentiate ``n`` times.
    """
    order = MemoryOrder.coerce(alpha)
    t = _check_t(f, t)
    if order.is_integer:
        return float(f.derivative(int(order.alpha))(t))
    n = order.n_bracket
    dn = f.derivative(n)
    if dn.closed_form and not dn.terms:
        return 0.0
    return rl_integral(dn, n - order.alpha, t, rtol=rtol, m_cap=m_cap)


def inverse_property_check(
    f: SampledFunction, alpha: MemoryOrder | float, t: float, m: int = 2**18
) -> float:
    """Residual of ``I^alpha D^alpha f (t) = f(t) - f(0)`` for ``0 < alpha < 1``.

    The Caputo derivative is evaluated numerically at every node of one
    uniform grid of ``m`` intervals, then integrated numerically. Returns
    ``I^alpha[D^alpha f](t) + f(0) - f(t)``, which should be close to zero.
    """
    order = MemoryOrder.coerce(alpha)
    if not 0.0 < order.alpha < 1.0:
        raise ValueError(f"inverse-property probe needs 0 < alpha < 1, got {order.alpha}")
    t = _check_t(f, t)
    tau = np.linspace(0.0, t, m + 1)
    h = t / m
    d1 = f.derivative(1)
    caputo = _rl_all_nodes(d1(tau), h, 1.0 - order.alpha)
    back = _rl_at_end(caputo, h, order.alpha)
    return back + float(f(0.0)) - float(f(t))
