"""Arithmetic expressions: parsing, printing and evaluation.

Grammar, loosest binding first::

    sum     := product (("+" | "-") product)*
    product := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" unary)?
    atom    := NUMBER | NAME | FUNC "(" sum ")" | "(" sum ")"

``^`` is right-associative and binds tighter than unary minus, so
``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^9``.  A power whose exponent
contains variables is evaluated as ``exp(b * ln(a))``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

from . import algebra, elementary
from .core import DomainError, Registry, Var, constant, seed

FUNCTION_NAMES = frozenset(elementary.FUNCTIONS)


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int, expected: str | None = None):
        self.offset = offset
        self.expected = expected
        text = f"{message} at offset {offset}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


class UnboundVariableError(ExprError):
    pass


class ExprDomainError(DomainError):
    """A domain error tagged with the source span of the failing node."""

    def __init__(self, message: str, span: tuple[int, int], source: str | None = None):
        self.span = span
        self.source = source
        where = f"at {span[0]}:{span[1]}"
        if source is not None:
            where += f" '{source[span[0]:span[1]]}'"
        super().__init__(f"{message} {where}")


Span = tuple[int, int]


@dataclass(frozen=True)
class Number:
    value: float
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Variable:
    name: str
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Expr"
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    fn: str
    child: "Expr"
    span: Span = field(default=(0, 0), compare=False, repr=False)


Expr = Union[Number, Variable, Unary, Binary, Call]


# Tokens -------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op" or "end"
    text: str
    start: int

    @property
    def end(self) -> int:
        return self.start + len(self.text)


def tokenize(text: str) -> Iterator[Token]:
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            yield Token(m.lastgroup, m.group(), pos)
        pos = m.end()
    yield Token("end", "", len(text))


# Parser -------------------------------------------------------------------

_BINARY_POWER = {"+": 10, "-": 10, "*": 20, "/": 20}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = list(tokenize(text))
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind != "op":
            raise ExprSyntaxError(self._describe(), self.tok.start, repr(text))
        return self.advance()

    def _describe(self) -> str:
        if self.tok.kind == "end":
            return "unexpected end of input"
        return f"unexpected {self.tok.text!r}"

    def parse(self) -> Expr:
        node = self.expression(0)
        if self.tok.kind != "end":
            raise ExprSyntaxError(self._describe(), self.tok.start, "operator or end of input")
        return node

    def expression(self, min_power: int) -> Expr:
        left = self.unary()
        while self.tok.kind == "op" and _BINARY_POWER.get(self.tok.text, -1) > min_power:
            op = self.advance().text
            right = self.expression(_BINARY_POWER[op])
            left = Binary(op, left, right, (left.span[0], right.span[1]))
        return left

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            start = self.advance().start
            child = self.unary()
            return Unary("-", child, (start, child.span[1]))
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            exponent = self.unary()
            return Binary("^", base, exponent, (base.span[0], exponent.span[1]))
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Number(float(tok.text), (tok.start, tok.end))
        if tok.kind == "name":
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                if tok.text not in FUNCTION_NAMES:
                    raise ExprSyntaxError(
                        f"unknown function {tok.text!r}",
                        tok.start,
                        "one of " + ", ".join(sorted(FUNCTION_NAMES)),
                    )
                self.advance()
                child = self.expression(0)
                close = self.expect(")")
                return Call(tok.text, child, (tok.start, close.end))
            if tok.text in FUNCTION_NAMES:
                raise ExprSyntaxError(f"function {tok.text!r} needs an argument", self.tok.start, "'('")
            return Variable(tok.text, (tok.start, tok.end))
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            inner = self.expression(0)
            self.expect(")")
            return inner
        raise ExprSyntaxError(self._describe(), tok.start, "number, name or '('")


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree; raises ExprSyntaxError."""
    return _Parser(text).parse()


# Printing -----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, Binary):
        return 4 if e.op == "^" else _PREC[e.op]
    if isinstance(e, Unary):
        return 3
    return 5


def unparse(e: Expr) -> str:
    """Print ``e`` with the fewest parentheses that parse back to ``e``."""

    def wrap(child: Expr, need: int) -> str:
        s = unparse(child)
        return f"({s})" if _prec(child) < need else s

    if isinstance(e, Number):
        return repr(e.value)
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({unparse(e.child)})"
    if isinstance(e, Unary):
        return "-" + wrap(e.child, 3)
    if e.op == "^":
        return wrap(e.left, 5) + "^" + wrap(e.right, 3)
    p = _PREC[e.op]
    return f"{wrap(e.left, p)} {e.op} {wrap(e.right, p + 1)}"


def free_variables(e: Expr) -> set[str]:
    if isinstance(e, Variable):
        return {e.name}
    if isinstance(e, Number):
        return set()
    if isinstance(e, Binary):
        return free_variables(e.left) | free_variables(e.right)
    return free_variables(e.child)


# Evaluation ---------------------------------------------------------------


def evaluate(e: Expr, env: Mapping[str, Var], source: str | None = None) -> Var:
    """Evaluate ``e`` through the Var algebra with ``env`` as variable values."""
    if isinstance(e, Number):
        return constant(e.value)
    if isinstance(e, Variable):
        try:
            return env[e.name]
        except KeyError:
            raise UnboundVariableError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Unary):
        return algebra.neg(evaluate(e.child, env, source))
    try:
        if isinstance(e, Call):
            arg = evaluate(e.child, env, source)
            return elementary.FUNCTIONS[e.fn](arg)
        left = evaluate(e.left, env, source)
        if e.op == "^" and not free_variables(e.right):
            r = evaluate(e.right, {}, source).id
            return algebra.pow_scalar(left, r)
        right = evaluate(e.right, env, source)
        if e.op == "+":
            return algebra.add(left, right)
        if e.op == "-":
            return algebra.sub(left, right)
        if e.op == "*":
            return algebra.mul(left, right)
        if e.op == "/":
            return algebra.div(left, right)
        return elementary.exp(algebra.mul(right, elementary.ln(left)))
    except ExprDomainError:
        raise
    except DomainError as exc:
        raise ExprDomainError(str(exc), e.span, source) from exc


def seed_bindings(bindings: Mapping[str, float], order: int, reg: Registry | None = None) -> dict[str, Var]:
    """Seed every binding at ``order``, in lexicographic order of names."""
    reg = Registry() if reg is None else reg
    if order == 0:
        return {name: constant(bindings[name]) for name in sorted(bindings)}
    return {name: seed(bindings[name], order, reg) for name in sorted(bindings)}


def eval_seeded(e: Expr, bindings: Mapping[str, float], order: int, source: str | None = None) -> tuple[Var, dict[str, Var]]:
    """Like :func:`eval_expr`, also returning the seeded variables by name."""
    missing = free_variables(e) - set(bindings)
    if missing:
        raise UnboundVariableError("unbound variable(s): " + ", ".join(sorted(missing)))
    env = seed_bindings(bindings, order)
    return evaluate(e, env, source), env


def eval_expr(e: Union[Expr, str], bindings: Mapping[str, float], order: int) -> Var:
    """Seed ``bindings`` to ``order`` and evaluate ``e`` (a tree or source text)."""
    if isinstance(e, str):
        return eval_seeded(parse(e), bindings, order, e)[0]
    return eval_seeded(e, bindings, order)[0]


_SCALAR_FUNCS = {"sin": math.sin, "cos": math.cos, "exp": math.exp, "ln": math.log, "sqrt": math.sqrt}


def eval_scalar(e: Expr, bindings: Mapping[str, float]) -> float:
    """Plain float evaluation with no derivative bookkeeping."""
    if isinstance(e, Number):
        return e.value
    if isinstance(e, Variable):
        try:
            return float(bindings[e.name])
        except KeyError:
            raise UnboundVariableError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Unary):
        return -eval_scalar(e.child, bindings)
    if isinstance(e, Call):
        return _SCALAR_FUNCS[e.fn](eval_scalar(e.child, bindings))
    a = eval_scalar(e.left, bindings)
    b = eval_scalar(e.right, bindings)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "/":
        return a / b
    if free_variables(e.right):
        return math.exp(b * math.log(a))
    return a**b
