"""Vector-space and algebra structure on :class:`~tensorad.core.Var`.

Constants (order 0) combine with Vars of any order: they count as
infinitely differentiable when the result order is chosen, otherwise
``x * 2`` would lose all derivative data.
"""

from __future__ import annotations

import math
from typing import Mapping, Union

from .core import DivisionByZeroError, Var, VarId, as_var, reduce, truncate

Operand = Union[Var, float]


def _common_order(a: Var, b: Var) -> int:
    if a.order == 0:
        return b.order
    if b.order == 0:
        return a.order
    return min(a.order, b.order)


def _fit(v: Var, n: int) -> Var:
    return v if v.order == 0 else truncate(v, n)


def _lower(v: Var) -> Var:
    return v if v.order == 0 else reduce(v)


def _merge(left: Mapping[VarId, Var], right: Mapping[VarId, Var]) -> dict[VarId, Var]:
    out = dict(left)
    for k, w in right.items():
        out[k] = add(out[k], w) if k in out else w
    return out


def scalar_mul(v: Operand, c: float) -> Var:
    v = as_var(v)
    c = float(c)
    return Var(v.order, v.id * c, {k: scalar_mul(w, c) for k, w in v.dtau.items()})


def add(a: Operand, b: Operand) -> Var:
    """Add by components; shared keys recurse, the rest are copied."""
    a, b = as_var(a), as_var(b)
    n = _common_order(a, b)
    a, b = _fit(a, n), _fit(b, n)
    return Var(n, a.id + b.id, _merge(a.dtau, b.dtau))


def mul(a: Operand, b: Operand) -> Var:
    """Bilinear product with the Leibniz rule built in.

    Every first-level entry of one factor is multiplied by the other factor
    reduced by one order, and the two families are merged by addition.
    The recursion applies the same rule at every tensor level.
    """
    a, b = as_var(a), as_var(b)
    n = _common_order(a, b)
    if n == 0:
        return Var(0, a.id * b.id)
    a, b = _fit(a, n), _fit(b, n)
    ra, rb = _lower(a), _lower(b)
    from_b = {k: mul(w, ra) for k, w in b.dtau.items()}
    from_a = {k: mul(w, rb) for k, w in a.dtau.items()}
    return Var(n, a.id * b.id, _merge(from_b, from_a))


def neg(v: Operand) -> Var:
    return scalar_mul(v, -1.0)


def sub(a: Operand, b: Operand) -> Var:
    return add(a, neg(b))


def pow_scalar(v: Operand, r: float) -> Var:
    """Raise ``v`` to a constant real power.

    Integer exponents accept negative bases.  Fractional exponents need a
    positive base and negative exponents a non-zero one.
    """
    from .elementary import apply_lifted, power

    return apply_lifted(power(float(r)), as_var(v))


def div(a: Operand, b: Operand) -> Var:
    """``a * b**-1``, carrying the correctly rounded quotient as its value."""
    a, b = as_var(a), as_var(b)
    if b.id == 0.0:
        raise DivisionByZeroError("division by zero")
    q = mul(a, pow_scalar(b, -1.0))
    return Var(q.order, a.id / b.id, q.dtau)


def _value(x: Operand) -> float:
    return x.id if isinstance(x, Var) else float(x)


def eq(a: Operand, b: Operand) -> bool:
    return _value(a) == _value(b)


def ne(a: Operand, b: Operand) -> bool:
    return _value(a) != _value(b)


def lt(a: Operand, b: Operand) -> bool:
    return _value(a) < _value(b)


def le(a: Operand, b: Operand) -> bool:
    return _value(a) <= _value(b)


def gt(a: Operand, b: Operand) -> bool:
    return _value(a) > _value(b)


def ge(a: Operand, b: Operand) -> bool:
    return _value(a) >= _value(b)


def is_integer(r: float) -> bool:
    return math.isfinite(r) and float(r).is_integer()
