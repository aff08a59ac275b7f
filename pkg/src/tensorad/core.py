"""The nested derivative variable and its order bookkeeping.

A :class:`Var` of order ``n`` holds a value together with a mapping from
seed identities to Vars of order ``n - 1``.  Unrolling the nesting gives
the value plus every partial derivative up to total order ``n``.  A key
that is absent from the mapping is an exact zero derivative.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Union


class OrderError(ValueError):
    """Raised when an operation needs more derivative data than a Var holds."""


class DomainError(ValueError):
    """Raised when an input falls outside a function's admissible domain."""


class DivisionByZeroError(DomainError, ZeroDivisionError):
    pass


@dataclass(frozen=True, order=True)
class VarId:
    """Identity token of a seeded independent variable."""

    id: int

    def __repr__(self) -> str:
        return f"v{self.id}"


_EMPTY: Mapping[VarId, "Var"] = MappingProxyType({})


@dataclass(frozen=True, eq=False, slots=True)
class Var:
    """A value with derivative tensors up to ``order``.

    Vars are immutable.  Arithmetic operators delegate to
    :mod:`tensorad.algebra`; comparisons look at values only, so Vars are
    not hashable.
    """

    order: int
    id: float
    dtau: Mapping[VarId, "Var"] = field(default=_EMPTY)
    seed_id: VarId | None = None

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError(f"order must be non-negative, got {self.order}")
        object.__setattr__(self, "id", float(self.id))
        if not self.dtau:
            object.__setattr__(self, "dtau", _EMPTY)
            return
        if self.order == 0:
            raise ValueError("an order-0 Var cannot carry derivative entries")
        for key, entry in self.dtau.items():
            if entry.order != self.order - 1:
                raise ValueError(
                    f"entry {key!r} has order {entry.order}, expected {self.order - 1}"
                )
        object.__setattr__(self, "dtau", MappingProxyType(dict(self.dtau)))

    @property
    def is_constant(self) -> bool:
        return self.order == 0

    def __repr__(self) -> str:
        parts = [f"order={self.order}", f"id={self.id!r}"]
        if self.dtau:
            inner = ", ".join(f"{k!r}: {w!r}" for k, w in self.dtau.items())
            parts.append("dtau={" + inner + "}")
        if self.seed_id is not None:
            parts.append(f"seed_id={self.seed_id!r}")
        return "Var(" + ", ".join(parts) + ")"

    def __float__(self) -> float:
        return self.id

    # Arithmetic, bound lazily to avoid a circular import with algebra.

    def __add__(self, other):
        from . import algebra

        return algebra.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from . import algebra

        return algebra.sub(self, other)

    def __rsub__(self, other):
        from . import algebra

        return algebra.sub(other, self)

    def __mul__(self, other):
        from . import algebra

        if isinstance(other, Var):
            return algebra.mul(self, other)
        return algebra.scalar_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        from . import algebra

        return algebra.div(self, other)

    def __rtruediv__(self, other):
        from . import algebra

        return algebra.div(other, self)

    def __neg__(self):
        from . import algebra

        return algebra.neg(self)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        from . import algebra

        if isinstance(exponent, Var):
            if not exponent.is_constant:
                raise TypeError(
                    "Var exponents must be constant; use exp(b * ln(a)) instead"
                )
            exponent = exponent.id
        return algebra.pow_scalar(self, exponent)

    # Order logic acts on values only.

    def __eq__(self, other):
        return self.id == _scalar(other)

    def __ne__(self, other):
        return self.id != _scalar(other)

    def __lt__(self, other):
        return self.id < _scalar(other)

    def __le__(self, other):
        return self.id <= _scalar(other)

    def __gt__(self, other):
        return self.id > _scalar(other)

    def __ge__(self, other):
        return self.id >= _scalar(other)

    __hash__ = None  # type: ignore[assignment]


def _scalar(x) -> float:
    return x.id if isinstance(x, Var) else float(x)


class Registry:
    """Issues consecutive :class:`VarId` values starting at 0."""

    def __init__(self) -> None:
        self.next_id = 0
        self.seeds: list[VarId] = []
        self._lock = threading.Lock()

    def issue(self) -> VarId:
        with self._lock:
            key = VarId(self.next_id)
            self.next_id += 1
            self.seeds.append(key)
        return key

    def __len__(self) -> int:
        return self.next_id

    def __repr__(self) -> str:
        return f"Registry(next_id={self.next_id})"


def constant(x: float) -> Var:
    """Return ``x`` as an order-0 Var with no derivative data."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"constant must be finite, got {x!r}")
    return Var(0, x)


def as_var(x: Union[Var, float]) -> Var:
    return x if isinstance(x, Var) else constant(x)


def seed(x: float, n: int, reg: Registry) -> Var:
    """Initialize ``x`` as an independent variable differentiable ``n`` times.

    The first-order part is the Kronecker delta: one unit entry under the
    fresh VarId.  Every higher-order entry is zero and therefore absent.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"seed value must be finite, got {x!r}")
    if n < 1:
        raise OrderError(f"seed order must be at least 1, got {n}; use constant()")
    key = reg.issue()
    return Var(n, x, {key: Var(n - 1, 1.0)}, seed_id=key)


def value(v: Var) -> float:
    return v.id


def truncate(v: Var, m: int) -> Var:
    """Return ``v`` cut down to order ``m`` (``m <= v.order``)."""
    if m > v.order:
        raise OrderError(f"cannot raise order {v.order} to {m}")
    if m == v.order:
        return v
    if m == 0:
        return Var(0, v.id)
    return Var(m, v.id, {k: truncate(w, m - 1) for k, w in v.dtau.items()})


def reduce(v: Var) -> Var:
    """Return a copy of ``v`` that is one time less differentiable."""
    if v.order == 0:
        raise OrderError("cannot reduce the order of an order-0 Var")
    return truncate(v, v.order - 1)


def _key(k: Union[VarId, Var]) -> VarId:
    if isinstance(k, VarId):
        return k
    if isinstance(k, Var) and k.seed_id is not None:
        return k.seed_id
    raise TypeError(f"expected a VarId or a seeded Var, got {k!r}")


def d(v: Var, k: Union[VarId, Var]) -> Var:
    """Derivative of ``v`` with respect to ``k``, differentiable once less.

    ``k`` may be a VarId or the seeded Var itself.
    """
    key = _key(k)
    if v.order == 0:
        raise OrderError("Var is not differentiable: order 0 carries no derivatives")
    entry = v.dtau.get(key)
    if entry is None:
        return Var(v.order - 1, 0.0)
    return entry
