"""Lifting scalar functions to arbitrarily differentiable programs.

A :class:`LiftedFn` pairs a scalar mapping with its derivative primitive,
a program on Vars.  Applying it to an order-``n`` Var evaluates the
mapping on the value and multiplies every first-level entry by the
primitive evaluated one order lower, so the primitive only ever sees
strictly smaller orders and self-referential primitives such as
``exp' = exp`` terminate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .algebra import div, is_integer, mul, neg, scalar_mul
from .core import DomainError, Var, as_var, constant, reduce


def _anywhere(x: float) -> bool:
    return True


@dataclass(frozen=True)
class LiftedFn:
    name: str
    mapping: Callable[[float], float]
    primitive: Callable[[Var], Var]
    domain: Callable[[float], bool] = _anywhere

    def __call__(self, v) -> Var:
        return apply_lifted(self, v)


def apply_lifted(f: LiftedFn, v) -> Var:
    v = as_var(v)
    if not f.domain(v.id):
        raise DomainError(f"{f.name} is undefined at {v.id!r}")
    try:
        out = f.mapping(v.id)
    except (OverflowError, ValueError) as exc:
        raise DomainError(f"{f.name}({v.id!r}): {exc}") from None
    if not math.isfinite(out):
        raise DomainError(f"{f.name}({v.id!r}) is not finite")
    if v.order == 0:
        return constant(out)
    lower = reduce(v)
    g = f.primitive(lower)
    assert g.order < v.order, "primitive must be evaluated at a lower order"
    return Var(v.order, out, {k: mul(w, g) for k, w in v.dtau.items()})


def sin(v) -> Var:
    """Sine, built directly rather than through :func:`apply_lifted`."""
    v = as_var(v)
    out = math.sin(v.id)
    if v.order == 0:
        return constant(out)
    g = cos(reduce(v))
    return Var(v.order, out, {k: mul(w, g) for k, w in v.dtau.items()})


cos = LiftedFn("cos", math.cos, lambda v: neg(sin(v)))
exp = LiftedFn("exp", math.exp, lambda v: exp(v))
ln = LiftedFn("ln", math.log, lambda v: div(1.0, v), lambda x: x > 0)
sqrt = LiftedFn(
    "sqrt", math.sqrt, lambda v: scalar_mul(power(-0.5)(v), 0.5), lambda x: x > 0
)

# The same sine through the generic lift; kept to cross-check sin().
sin_lifted = LiftedFn("sin", math.sin, cos)


def _pow_domain(r: float) -> Callable[[float], bool]:
    if not is_integer(r):
        return lambda x: x > 0.0
    if r < 0:
        return lambda x: x != 0.0
    return _anywhere


@lru_cache(maxsize=None)
def power(r: float) -> LiftedFn:
    """``x ** r`` for a fixed real exponent ``r``."""

    def primitive(v: Var) -> Var:
        if r == 0.0:
            return Var(v.order, 0.0)
        return scalar_mul(power(r - 1.0)(v), r)

    return LiftedFn(f"pow[{r!r}]", lambda x: x**r, primitive, _pow_domain(r))


FUNCTIONS: dict[str, Callable[[Var], Var]] = {
    "sin": sin,
    "cos": cos,
    "exp": exp,
    "ln": ln,
    "sqrt": sqrt,
}
