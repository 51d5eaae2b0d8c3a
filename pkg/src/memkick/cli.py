"""Command-line entry point: ``memkick {simulate,validate,bench,plot}``.

Exit codes: 0 ok, 1 validation failure, 2 usage or config error,
3 divergence, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import fastsum, validation
from .config import ConfigError, load_config
from .economy import DivergenceError, run_scenario
from .memory_maps import Trajectory
from .special_fn import HorizonError
from .svgplot import line_chart

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_DIVERGENCE = 3
EXIT_IO = 4

CSV_HEADER = ("n", "t", "Y", "I", "K")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default already; keep messages on stderr
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt17(x: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return f"{x:.17g}"


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    t = traj.t
    for n in range(len(traj)):
        w.writerow([n, fmt17(t[n]), fmt17(traj["Y"][n]), fmt17(traj["I"][n]), fmt17(traj["K"][n])])
    return buf.getvalue()


def read_output_csv(text: str) -> dict[str, np.ndarray]:
    """Parse an output table; raises ``ValueError`` on any malformation."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty CSV")
    header = [h.strip() for h in rows[0]]
    missing = [c for c in CSV_HEADER if c not in header]
    if missing:
        raise ValueError(f"CSV lacks column(s) {', '.join(missing)}")
    body = [r for r in rows[1:] if r]
    if not body:
        raise ValueError("CSV has no data rows")
    cols: dict[str, list[float]] = {c: [] for c in CSV_HEADER}
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ValueError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        for c in CSV_HEADER:
            try:
                cols[c].append(float(row[header.index(c)]))
            except ValueError:
                raise ValueError(f"line {lineno}: column {c} is not numeric") from None
    n = np.array(cols["n"])
    if n[0] != 0 or np.any(np.diff(n) <= 0):
        raise ValueError("column n must start at 0 and increase strictly")
    return {c: np.array(v) for c, v in cols.items()}


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        traj = run_scenario(cfg.scenario)
    except DivergenceError as exc:
        print(f"diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except HorizonError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = trajectory_csv(traj)
    out = Path(args.out) if args.out else cfg.out
    if out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        _write(out, text)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_validate(args) -> int:
    results = validation.run_checks(args.level)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed: {'; '.join(failed)}")
        return EXIT_VALIDATION
    print(f"all {len(results)} checks passed ({args.level})")
    return EXIT_OK


def cmd_bench(args) -> int:
    if not args.alpha > 0 or args.n_max < 2 or args.trials < 1:
        print("bench needs alpha > 0, n_max >= 2, trials >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        rows = fastsum.bench_strategies(args.alpha, args.n_max, args.trials)
    except HorizonError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = fastsum.bench_to_csv(rows)
    if args.out:
        try:
            _write(Path(args.out), text)
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        text = Path(args.csv).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cols = read_output_csv(text)
    except ValueError as exc:
        print(f"malformed CSV {args.csv}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    svg = line_chart(cols["t"], {c: cols[c] for c in ("Y", "I", "K")}, title=Path(args.csv).name)
    try:
        _write(Path(args.out_svg), svg)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="memkick", description="Discrete accelerators with power-law memory.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="run a scenario config and write its CSV")
    s.add_argument("config", help="key = value scenario file")
    s.add_argument("-o", "--out", help="output CSV (overrides the config's out key)")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("validate", help="run the built-in consistency checks")
    v.add_argument("level", nargs="?", default="quick", choices=("quick", "full"))
    v.set_defaults(func=cmd_validate)

    b = sub.add_parser("bench", help="time the memory-sum strategies")
    b.add_argument("--alpha", type=float, default=0.5)
    b.add_argument("--n-max", type=int, default=4096)
    b.add_argument("--trials", type=int, default=3)
    b.add_argument("-o", "--out", help="write the CSV here instead of stdout")
    b.set_defaults(func=cmd_bench)

    pl = sub.add_parser("plot", help="render a simulate CSV as an SVG line chart")
    pl.add_argument("csv")
    pl.add_argument("out_svg")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
