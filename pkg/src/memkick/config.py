"""Flat ``key = value`` scenario files.

Example::

    # classical Harrod-Domar growth
    alpha = 1
    s = 0.2
    v = 2
    closure = harrod_domar
    horizon = 50
    y0 = 100
    out = hd.csv

Relative ``series_file`` and ``out`` paths resolve against the config's
directory. A series file holds one value per line; blank lines and ``#``
comments are skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .economy import CLOSURE_KINDS, Closure, Scenario
from .fastsum import SumStrategy
from .memory_maps import InitialState, MapParams
from .special_fn import max_horizon

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config", "read_series"]

KEYS = (
    "alpha", "T", "s", "v", "closure", "a", "b", "horizon", "y0", "k0", "i0",
    "series_file", "strategy", "out", "timing",
)
REQUIRED = ("alpha", "v", "closure", "horizon", "y0")
REQUIRED_BY_CLOSURE = {
    "harrod_domar": ("s",),
    "exogenous_output": ("s", "series_file"),
    "exogenous_investment": ("series_file",),
    "matthews": ("a", "b"),
}


class ConfigError(ValueError):
    """Rejected configuration; names the key and, when known, the line."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    out: Path | None


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body


def read_series(path: Path) -> np.ndarray:
    """One float per line. ``OSError`` propagates; bad values raise :class:`ConfigError`."""
    text = Path(path).read_text(encoding="utf-8")
    values = []
    for lineno, body in _lines(text):
        try:
            values.append(float(body))
        except ValueError:
            raise ConfigError(f"series file {path}: {body!r} is not a number", "series_file", lineno) from None
    return np.array(values)


def parse_config(text: str, base_dir: Path | str = ".") -> RunConfig:
    """Parse config text into a runnable scenario.

    Raises
    ------
    ConfigError
        Unknown, duplicate, malformed, missing or out-of-range keys.
    OSError
        The series file cannot be read.
    """
    base_dir = Path(base_dir)
    raw: dict[str, tuple[str, int]] = {}
    for lineno, body in _lines(text):
        key, sep, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigError(f"expected 'key = value', got {body!r}", None, lineno)
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", key, lineno)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r} (first set on line {raw[key][1]})", key, lineno)
        if not value:
            raise ConfigError(f"key {key!r} has no value", key, lineno)
        raw[key] = (value, lineno)

    for key in REQUIRED:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}", key)
    closure_kind = raw["closure"][0]
    if closure_kind not in CLOSURE_KINDS:
        raise ConfigError(
            f"closure must be one of {', '.join(CLOSURE_KINDS)}, got {closure_kind!r}",
            "closure", raw["closure"][1],
        )
    for key in REQUIRED_BY_CLOSURE[closure_kind]:
        if key not in raw:
            raise ConfigError(f"closure {closure_kind} requires key {key!r}", key)

    def num(key: str, default: float | None = None) -> float:
        if key not in raw:
            return default
        value, lineno = raw[key]
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"key {key!r}: {value!r} is not a number", key, lineno) from None

    def line_of(key: str) -> int | None:
        return raw[key][1] if key in raw else None

    horizon_text, horizon_line = raw["horizon"]
    try:
        horizon = int(horizon_text)
    except ValueError:
        raise ConfigError(f"key 'horizon': {horizon_text!r} is not an integer", "horizon", horizon_line) from None

    k0_values = [0.0]
    if "k0" in raw:
        try:
            k0_values = [float(x) for x in raw["k0"][0].split(",")]
        except ValueError:
            raise ConfigError(f"key 'k0': {raw['k0'][0]!r} is not a comma-separated list of numbers", "k0", line_of("k0")) from None

    strategy = SumStrategy()
    if "strategy" in raw:
        try:
            strategy = SumStrategy.parse(raw["strategy"][0])
        except ValueError as exc:
            raise ConfigError(f"key 'strategy': {exc}", "strategy", line_of("strategy")) from None

    lagged = False
    if "timing" in raw:
        timing = raw["timing"][0]
        if timing not in ("current", "lagged"):
            raise ConfigError(f"key 'timing' must be current or lagged, got {timing!r}", "timing", line_of("timing"))
        lagged = timing == "lagged"

    series = None
    if "series_file" in raw:
        series = read_series(base_dir / raw["series_file"][0])

    positives = {"alpha": num("alpha"), "s": num("s", 1.0), "v": num("v"), "T": num("T", 1.0)}
    for key, value in positives.items():
        if not (math.isfinite(value) and value > 0):
            raise ConfigError(f"key {key!r} must be positive, got {value}", key, line_of(key))
    if positives["alpha"] > 1:
        raise ConfigError(
            f"key 'alpha': scenarios need 0 < alpha <= 1, got {positives['alpha']}", "alpha", line_of("alpha")
        )
    params = MapParams(positives["alpha"], s=positives["s"], v=positives["v"], T=positives["T"])
    if horizon < 0:
        raise ConfigError(f"key 'horizon' must be >= 0, got {horizon}", "horizon", horizon_line)
    if horizon > max_horizon():
        raise ConfigError(f"key 'horizon': {horizon} exceeds the maximum {max_horizon()}", "horizon", horizon_line)
    if len(k0_values) != 1:
        raise ConfigError(
            f"key 'k0': first-order scenarios take one initial capital value, got {len(k0_values)}",
            "k0", line_of("k0"),
        )
    for key, values in (("y0", [num("y0")]), ("i0", [num("i0", 0.0)]), ("k0", k0_values)):
        if not all(math.isfinite(x) for x in values):
            raise ConfigError(f"key {key!r} must be finite", key, line_of(key))
    if series is not None and not np.all(np.isfinite(series)):
        raise ConfigError("key 'series_file': series contains non-finite values", "series_file", line_of("series_file"))
    if series is not None and len(series) < horizon:
        raise ConfigError(
            f"key 'series_file': {len(series)} values, horizon needs {horizon}",
            "series_file", line_of("series_file"),
        )

    if closure_kind == "matthews":
        for key in ("a", "b"):
            if not num(key) > 0:
                raise ConfigError(f"key {key!r} must be positive, got {num(key)}", key, line_of(key))
        closure = Closure.matthews(num("a"), num("b"))
    elif closure_kind == "harrod_domar":
        closure = Closure.harrod_domar()
    else:
        closure = Closure(closure_kind, series=series)
    scenario = Scenario(
        params=params,
        closure=closure,
        horizon=horizon,
        y0=num("y0"),
        k0=InitialState(tuple(k0_values)),
        i0=num("i0", 0.0),
        strategy=strategy,
        lagged_closure=lagged,
    )

    out = None
    if "out" in raw:
        out = base_dir / raw["out"][0]
    return RunConfig(scenario=scenario, out=out)


def load_config(path: Path | str) -> RunConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_config(text, path.parent)
