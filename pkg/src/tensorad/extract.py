"""Reading derivatives back out of a Var.

Iterating :func:`~tensorad.core.d` ``k`` times on a Var of order
``n + k`` leaves a Var of order ``n``: the k-th derivative, still
differentiable ``n`` more times.  The helpers here fold that walk into
scalars, dense arrays and Taylor coefficients.  :func:`fd_oracle` is an
independent check by central differences that never touches Vars.
"""

from __future__ import annotations

import itertools
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .core import OrderError, Var, VarId, _key, d

Key = Union[VarId, Var]
MultiIndex = tuple[VarId, ...]


def _check_budget(v: Var, k: int) -> None:
    if k > v.order:
        raise OrderError(f"order {k} requested from a Var of order {v.order}")


def derivative(v: Var, idx: Sequence[Key] = ()) -> float:
    """Mixed partial of ``v`` along ``idx``; the empty path is the value."""
    _check_budget(v, len(idx))
    for k in idx:
        v = d(v, k)
    return v.id


@dataclass
class DerivTensor:
    entries: dict[MultiIndex, float]
    max_order: int
    point: dict[VarId, float] = field(default_factory=dict)

    def __getitem__(self, idx: Sequence[Key]) -> float:
        return self.entries[tuple(_key(k) for k in idx)]

    def of_order(self, j: int) -> dict[MultiIndex, float]:
        return {p: x for p, x in self.entries.items() if len(p) == j}

    def symmetry_error(self) -> float:
        """Largest ``|T[p] - T[q]| / (1 + |T[p]|)`` over permuted paths."""
        worst = 0.0
        for path, x in self.entries.items():
            y = self.entries[tuple(sorted(path))]
            worst = max(worst, abs(x - y) / (1.0 + abs(y)))
        return worst


def _walk(v: Var, seeds: Sequence[VarId], k: int, prefix: MultiIndex, out: dict) -> None:
    out[prefix] = v.id
    if len(prefix) == k:
        return
    for s in seeds:
        entry = v.dtau.get(s)
        if entry is None:
            # Absent key: the whole subtree is zero.
            for rest in range(1, k - len(prefix) + 1):
                for tail in itertools.product(seeds, repeat=rest - 1):
                    out[prefix + (s,) + tail] = 0.0
        else:
            _walk(entry, seeds, k, prefix + (s,), out)


def tensor(v: Var, seeds: Sequence[Key], k: int) -> DerivTensor:
    """All derivatives of ``v`` along ``seeds`` up to total order ``k``.

    Passing seeded Vars instead of bare VarIds also records the point.
    """
    _check_budget(v, k)
    keys = [_key(s) for s in seeds]
    point = {s.seed_id: s.id for s in seeds if isinstance(s, Var)}
    entries: dict[MultiIndex, float] = {}
    _walk(v, keys, k, (), entries)
    # Canonical ordering: by length, then lexicographic.
    ordered = dict(sorted(entries.items(), key=lambda kv: (len(kv[0]), kv[0])))
    return DerivTensor(ordered, k, point)


def gradient(v: Var, seeds: Sequence[Key]) -> np.ndarray:
    _check_budget(v, 1)
    return np.array([d(v, s).id for s in seeds])


def hessian(v: Var, seeds: Sequence[Key]) -> np.ndarray:
    _check_budget(v, 2)
    return np.array([[derivative(v, (si, sj)) for sj in seeds] for si in seeds])


def taylor_coeffs(v: Var, k: Key, m: int) -> list[float]:
    """Coefficients ``f^(j) / j!`` of the series in direction ``k``, j = 0..m."""
    _check_budget(v, m)
    out = []
    for j in range(m + 1):
        out.append(v.id / math.factorial(j))
        if j < m:
            v = d(v, k)
    return out


_EPS = sys.float_info.epsilon


def fd_oracle(
    f: Callable[[Mapping[str, float]], float],
    point: Mapping[str, float],
    idx: Sequence[str],
) -> float:
    """Central-difference estimate of a first or second partial of ``f``.

    ``f`` takes a mapping of variable names to floats.  Steps scale with
    ``max(1, |x|)``: ``eps**(1/3)`` for first derivatives and ``eps**(1/4)``
    for second derivatives.
    """
    base = dict(point)

    def at(**shifts: float) -> float:
        p = dict(base)
        for name, dx in shifts.items():
            p[name] = p[name] + dx
        return f(p)

    if len(idx) == 1:
        (x,) = idx
        h = _EPS ** (1 / 3) * max(1.0, abs(base[x]))
        return (at(**{x: h}) - at(**{x: -h})) / (2 * h)
    if len(idx) == 2:
        x, y = idx
        hx = _EPS**0.25 * max(1.0, abs(base[x]))
        if x == y:
            return (at(**{x: hx}) - 2 * f(base) + at(**{x: -hx})) / (hx * hx)
        hy = _EPS**0.25 * max(1.0, abs(base[y]))
        return (
            at(**{x: hx, y: hy})
            - at(**{x: hx, y: -hy})
            - at(**{x: -hx, y: hy})
            + at(**{x: -hx, y: -hy})
        ) / (4 * hx * hy)
    raise ValueError(f"fd_oracle handles derivative orders 1 and 2, got {len(idx)}")


def relative_error(ad: float, fd: float) -> float:
    """``|ad - fd| / max(1, |ad|)``; an absolute error near zero."""
    return abs(ad - fd) / max(1.0, abs(ad))
