"""Gamma function and power-law kernel weights.

Every memory map in the package weights past values by ``j**(alpha - 1)`` and
by the first difference of those powers,

    V(z) = (z + 1)**(alpha - 1) - z**(alpha - 1),

so both are tabulated once per (alpha, horizon) in a :class:`KernelTable`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DEFAULT_MAX_HORIZON",
    "HorizonError",
    "KernelTable",
    "MemoryOrder",
    "PoleError",
    "build_kernel_table",
    "gamma",
    "kernel_v",
    "max_horizon",
    "power_weight",
]

DEFAULT_MAX_HORIZON = 2**22
HORIZON_ENV = "MEMKICK_MAX_HORIZON"


class PoleError(ValueError):
    """Gamma evaluated at a non-positive integer."""


class HorizonError(ValueError):
    """Requested horizon exceeds the configured table cap."""


def max_horizon() -> int:
    """Horizon cap, overridable through ``MEMKICK_MAX_HORIZON``."""
    raw = os.environ.get(HORIZON_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_HORIZON
    try:
        value = int(raw)
    except ValueError:
        raise HorizonError(f"{HORIZON_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise HorizonError(f"{HORIZON_ENV} must be positive, got {value}")
    return value


# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
# Gamma(x) overflows a double just above this.
_GAMMA_XMAX = 171.6243769563027


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Lanczos approximation for ``x >= 0.5`` and the reflection formula below.
    Relative error is below 1e-13 on ``[0.1, 50]``.

    Raises
    ------
    PoleError
        If ``x`` is zero or a negative integer.
    OverflowError
        If the result is not representable as a double.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"gamma needs a finite argument, got {x}")
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x:g}")
    if x > _GAMMA_XMAX:
        raise OverflowError(f"gamma({x:g}) exceeds the double range")
    if x < 0.5:
        s = math.sin(math.pi * x)
        return math.pi / (s * gamma(1.0 - x))
    if x == math.floor(x) and x <= 23.0:
        # exact factorials while they fit the mantissa
        return float(math.factorial(int(x) - 1))

    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power so t**(z + 0.5) does not overflow before exp(-t) scales it
    half = t ** ((z + 0.5) / 2.0)
    return _SQRT_2PI * half * (half * math.exp(-t)) * acc


def power_weight(alpha: float, j: int) -> float:
    """``j**(alpha - 1)``, evaluated in log space for ``j > 1``."""
    if j < 1:
        raise ValueError(f"power_weight needs j >= 1, got {j}")
    if j == 1:
        return 1.0
    return math.exp((alpha - 1.0) * math.log(j))


def kernel_v(alpha: float, z: int) -> float:
    """Differenced kernel ``(z + 1)**(alpha - 1) - z**(alpha - 1)``.

    Exactly zero for ``alpha == 1``.
    """
    if z < 1:
        raise ValueError(f"kernel_v needs z >= 1, got {z}")
    if alpha == 1.0:
        return 0.0
    return power_weight(alpha, z + 1) - power_weight(alpha, z)


@dataclass(frozen=True)
class MemoryOrder:
    """Fractional order ``alpha > 0`` with its integer bracket ``N = floor(alpha) + 1``."""

    alpha: float

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not math.isfinite(a) or a <= 0.0:
            raise ValueError(f"memory order must be positive and finite, got {self.alpha}")
        object.__setattr__(self, "alpha", a)

    @property
    def n_bracket(self) -> int:
        return int(math.floor(self.alpha)) + 1

    @property
    def is_integer(self) -> bool:
        return self.alpha == math.floor(self.alpha)

    @classmethod
    def coerce(cls, alpha: "MemoryOrder | float") -> "MemoryOrder":
        return alpha if isinstance(alpha, cls) else cls(alpha)


@dataclass(frozen=True)
class KernelTable:
    """Power weights and their differences up to a fixed horizon.

    Arrays are 1-based: ``power_weights[j] == j**(alpha - 1)`` for
    ``j = 1..horizon`` and ``v_weights[z] == V(z)`` for ``z = 1..horizon - 1``.
    Slot 0 of each array holds 0 and is never read by the sums. Both arrays
    are read-only.
    """

    order: MemoryOrder
    horizon: int
    power_weights: np.ndarray = field(repr=False)
    v_weights: np.ndarray = field(repr=False)

    @property
    def alpha(self) -> float:
        return self.order.alpha

    def channel(self, name: str) -> np.ndarray:
        """Weight array by name, ``"power"`` or ``"v"``."""
        if name == "power":
            return self.power_weights
        if name == "v":
            return self.v_weights
        raise KeyError(f"unknown kernel channel {name!r}")


def build_kernel_table(alpha: MemoryOrder | float, horizon: int) -> KernelTable:
    """Tabulate ``j**(alpha - 1)`` and ``V(z)`` for one horizon.

    Raises
    ------
    HorizonError
        If ``horizon`` is below 1 or above :func:`max_horizon`.
    """
    order = MemoryOrder.coerce(alpha)
    horizon = int(horizon)
    if horizon < 1:
        raise HorizonError(f"horizon must be >= 1, got {horizon}")
    cap = max_horizon()
    if horizon > cap:
        raise HorizonError(f"horizon {horizon} exceeds the configured maximum {cap}")

    pw = np.zeros(horizon + 1)
    if order.alpha == 1.0:
        pw[1:] = 1.0
    else:
        j = np.arange(1, horizon + 1, dtype=float)
        pw[1:] = np.exp((order.alpha - 1.0) * np.log(j))
        pw[1] = 1.0

    vw = np.zeros(horizon)
    if horizon > 1 and order.alpha != 1.0:
        # same rounded values as pw, so V(z) + pw[z] == pw[z + 1] up to one rounding
        vw[1:] = pw[2:] - pw[1:-1]

    pw.flags.writeable = False
    vw.flags.writeable = False
    return KernelTable(order=order, horizon=horizon, power_weights=pw, v_weights=vw)
