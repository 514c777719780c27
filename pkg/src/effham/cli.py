"""Command-line entry point: ``effham report MODEL [options]``.

Exit codes: 0 on success, 2 for model problems (missing file, parse or
compile diagnostics), 3 for numerical-guard failures (term budget, power
cap, dimension cap, quadrature refinement budget). The monomial budget
of the builders can be overridden with the ``EFFHAM_MAX_TERMS``
environment variable.
"""

from __future__ import annotations

import argparse
import sys

from .errors import (
    DimensionCapError,
    ModelError,
    PowerCapError,
    QuadratureError,
    TermBudgetError,
)
from .diagnostics import ZOO_NAMES, run_report

_GUARD_ERRORS = (TermBudgetError, PowerCapError, DimensionCapError, QuadratureError)


def _parse_orders(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad order list {text!r}; expected e.g. 2,3")


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}; expected e.g. 0.4,0.2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effham",
        description="Closed-form effective Hamiltonians for multi-tone models "
                    "and their numerical adjudication.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    rep = sub.add_parser(
        "report",
        help="build effective orders for a model and emit defect diagnostics",
        description="MODEL is a .ham file path, or builtin:NAME with NAME one of: "
                    + ", ".join(ZOO_NAMES),
    )
    rep.add_argument("model", help=".ham file or builtin:NAME")
    rep.add_argument("--orders", type=_parse_orders, default=(2, 3),
                     help="comma-separated expansion orders (default 2,3)")
    rep.add_argument("--tmax", type=float, default=None,
                     help="end of the time grid (default 10 / min carrier)")
    rep.add_argument("--grid", type=int, default=64,
                     help="number of grid points (default 64)")
    rep.add_argument("--sweep", type=_parse_floats, default=None,
                     help="comma-separated coupling scale factors")
    rep.add_argument("--tol-zero", type=float, default=1e-9,
                     help="threshold for exactly-zero frequency sums")
    rep.add_argument("--gap-min", type=float, default=1e-3,
                     help="threshold for safely-nonzero frequency sums")
    rep.add_argument("--out", default=None, help="write the JSON report here")
    rep.add_argument("--csv", default=None, help="write the CSV time series here")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run_report(
            args.model,
            orders=args.orders,
            tmax=args.tmax,
            grid=args.grid,
            sweep=args.sweep,
            tol_zero=args.tol_zero,
            gap_min=args.gap_min,
            out=args.out,
            csv_path=args.csv,
        )
    except (ModelError, FileNotFoundError) as exc:
        print(f"effham: model error: {exc}", file=sys.stderr)
        return 2
    except _GUARD_ERRORS as exc:
        print(f"effham: numerical guard: {exc}", file=sys.stderr)
        return 3
    if not args.out:
        print(report.to_json())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
