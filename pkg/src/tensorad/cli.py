"""Command line: evaluate an expression and print its derivatives as JSON.

Exit status is 0 on success, 1 on usage errors (bad flags, syntax errors,
unbound variables) and 2 on domain errors, which are reported on stdout
as ``{"error": ...}``.
"""

from __future__ import annotations

import argparse
import itertools
import json
import re
import sys
from typing import Sequence

from .core import DomainError
from .expr import ExprError, eval_scalar, eval_seeded, free_variables, parse
from .extract import derivative, fd_oracle, relative_error, taylor_coeffs

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")

EPILOG = """\
operators: + - * / ^ and unary minus; functions: sin cos exp ln sqrt.
^ is right-associative and binds tighter than unary minus: -x^2 = -(x^2).
a^b with a variable exponent b is evaluated as exp(b*ln(a)).

output keys in "derivatives" are comma-joined sorted variable names, one
per symmetric multi-index; floats are printed with Python's shortest
round-trip repr (so whole numbers appear as 8.0) and -0.0 is printed as 0.0.
"""


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(
        prog="tensorad",
        description="Evaluate an expression and its derivative tensor.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--expr", required=True, help="expression to evaluate")
    p.add_argument("--at", required=True, metavar="NAME=VALUE,...", help="evaluation point")
    p.add_argument("--order", type=int, default=2, help="highest derivative order (default 2)")
    p.add_argument("--wrt", metavar="NAME,...", help="only report derivatives along these variables")
    p.add_argument(
        "--taylor",
        action="append",
        default=[],
        metavar="NAME:M",
        help="Taylor coefficients up to M along NAME (repeatable)",
    )
    p.add_argument(
        "--check-fd",
        action="store_true",
        help="compare first and second derivatives with central differences",
    )
    return p


def parse_point(text: str) -> dict[str, float]:
    point: dict[str, float] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, raw = item.partition("=")
        name = name.strip()
        if not sep or not _NAME.match(name):
            raise UsageError(f"bad binding {item!r}; expected NAME=VALUE")
        if name in point:
            raise UsageError(f"variable {name!r} bound twice")
        try:
            point[name] = float(raw)
        except ValueError:
            raise UsageError(f"bad value for {name!r}: {raw!r}") from None
    return point


def _names(text: str | None, point: dict[str, float]) -> list[str]:
    if text is None:
        return sorted(point)
    names = [s.strip() for s in text.split(",") if s.strip()]
    for name in names:
        if name not in point:
            raise UsageError(f"--wrt variable {name!r} is not bound by --at")
    return sorted(set(names))


def _taylor_specs(specs: Sequence[str], point: dict[str, float], order: int) -> list[tuple[str, int]]:
    out = []
    for spec in specs:
        for item in filter(None, (s.strip() for s in spec.split(","))):
            name, sep, raw = item.partition(":")
            if not sep or name not in point:
                raise UsageError(f"bad --taylor {item!r}; expected a bound NAME:M")
            try:
                m = int(raw)
            except ValueError:
                raise UsageError(f"bad --taylor order {raw!r}") from None
            if not 0 <= m <= order:
                raise UsageError(f"--taylor order {m} must lie in 0..{order}")
            out.append((name, m))
    return out


def run(args: argparse.Namespace) -> dict:
    if args.order < 0:
        raise UsageError("--order must be non-negative")
    point = parse_point(args.at)
    tree = parse(args.expr)
    missing = free_variables(tree) - set(point)
    if missing:
        raise UsageError("unbound variable(s): " + ", ".join(sorted(missing)))
    names = _names(args.wrt, point)
    taylor = _taylor_specs(args.taylor, point, args.order)

    v, seeds = eval_seeded(tree, point, args.order, args.expr)

    derivatives = {}
    for j in range(1, args.order + 1):
        for combo in itertools.combinations_with_replacement(names, j):
            derivatives[",".join(combo)] = _num(derivative(v, [seeds[n] for n in combo]))

    out = {
        "expr": args.expr,
        "point": dict(sorted(point.items())),
        "order": args.order,
        "value": _num(v.id),
        "derivatives": derivatives,
    }
    if taylor:
        out["taylor"] = {
            name: [_num(c) for c in taylor_coeffs(v, seeds[name], m)] for name, m in taylor
        }
    if args.check_fd:
        out["fd_check"] = _fd_check(tree, point, derivatives)
    return out


def _num(x: float) -> float:
    # -0.0 prints as 0.0
    return x + 0.0


def _fd_check(tree, point: dict[str, float], derivatives: dict[str, float]) -> dict:
    def f(p):
        try:
            return eval_scalar(tree, p)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"finite-difference probe failed: {exc}") from None

    worst: dict[int, float | None] = {1: None, 2: None}
    for key, ad in derivatives.items():
        path = key.split(",")
        if len(path) > 2:
            continue
        err = relative_error(ad, fd_oracle(f, point, path))
        prev = worst[len(path)]
        worst[len(path)] = err if prev is None else max(prev, err)
    return {"max_rel_err_order1": worst[1], "max_rel_err_order2": worst[2]}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = run(args)
    except (UsageError, ExprError) as exc:
        print(f"tensorad: error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(json.dumps({"error": str(exc)}))
        return 2
    print(json.dumps(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
