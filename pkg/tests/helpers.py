"""Shared test utilities: extensional comparison, corpora and oracles."""

from __future__ import annotations

import itertools
import math
import random

from tensorad import Registry, Var, VarId, seed
from tensorad.core import DomainError, as_var
from tensorad.expr import Binary, Call, Expr, Number, Unary, Variable, evaluate
from tensorad.extract import derivative, tensor


def keys_of(*vs: Var) -> list[VarId]:
    found: set[VarId] = set()

    def visit(v: Var) -> None:
        for k, w in v.dtau.items():
            found.add(k)
            visit(w)

    for v in vs:
        visit(v)
    return sorted(found)


def flatten(v: Var, keys=None, order=None) -> dict:
    keys = keys_of(v) if keys is None else keys
    order = v.order if order is None else order
    return tensor(v, keys, order).entries


def var_diffs(a: Var, b: Var):
    """Yield ``(path, x, y)`` over every derivative both Vars can supply."""
    keys = keys_of(a, b)
    order = min(a.order, b.order)
    fa, fb = flatten(a, keys, order), flatten(b, keys, order)
    for path in fa:
        yield path, fa[path], fb[path]


def assert_var_close(a: Var, b: Var, rtol: float = 1e-9, atol: float = 1e-12) -> None:
    for path, x, y in var_diffs(a, b):
        assert math.isclose(x, y, rel_tol=rtol, abs_tol=atol), (path, x, y)


def assert_var_identical(a: Var, b: Var) -> None:
    assert a.order == b.order
    for path, x, y in var_diffs(a, b):
        assert x == y, (path, x, y)


def max_rel_diff(a: Var, b: Var) -> float:
    return max(abs(x - y) / max(1.0, abs(y)) for _, x, y in var_diffs(a, b))


def uniform_depth(v: Var) -> bool:
    return all(w.order == v.order - 1 and uniform_depth(w) for w in v.dtau.values())


# Random expression corpus ---------------------------------------------------

FUNCS = ("sin", "cos", "exp", "ln", "sqrt")
EXPONENTS = (2.0, 3.0, 0.5, -1.0, 4.0)


def random_expr(rng: random.Random, names: list[str], depth: int) -> Expr:
    if depth == 0 or rng.random() < 0.1:
        if rng.random() < 0.75:
            return Variable(rng.choice(names))
        return Number(round(rng.uniform(0.25, 3.0), 2))
    kind = rng.random()
    if kind < 0.45:
        op = rng.choice("+-*/")
        return Binary(op, random_expr(rng, names, depth - 1), random_expr(rng, names, depth - 1))
    if kind < 0.6:
        return Binary("^", random_expr(rng, names, depth - 1), Number(rng.choice(EXPONENTS)))
    if kind < 0.68:
        return Unary("-", random_expr(rng, names, depth - 1))
    return Call(rng.choice(FUNCS), random_expr(rng, names, depth - 1))


def size(e: Expr) -> int:
    if isinstance(e, Binary):
        return 1 + size(e.left) + size(e.right)
    if isinstance(e, (Unary, Call)):
        return 1 + size(e.child)
    return 1


def random_program(rng: random.Random, n_vars: int = 2, depth: int = 3):
    """A random expression over ``x0..`` plus an in-domain point for it."""
    names = [f"x{i}" for i in range(n_vars)]
    while True:
        e = random_expr(rng, names, depth)
        if size(e) < 4:
            continue
        point = {n: round(rng.uniform(0.3, 1.7), 3) for n in names}
        try:
            v = evaluate(e, seeded_env(point, 2))
        except DomainError:
            continue
        if abs(v.id) < 50:
            return e, point


def well_conditioned_corpus(count: int, rng_seed: int, n_vars: int = 2, depth: int = 3):
    """Expressions whose values and derivatives through order 4 stay moderate.

    Central differences lose accuracy when the function or its higher
    derivatives are large; those draws are rejected.
    """
    rng = random.Random(rng_seed)
    out = []
    while len(out) < count:
        e, point = random_program(rng, n_vars, depth)
        env = seeded_env(point, 4)
        v = evaluate(e, env)
        if v.order == 0:
            continue
        mags = [abs(x) for x in tensor(v, list(env.values()), 4).entries.values()]
        if not any(x != 0.0 for x in mags[1:]) or max(mags) > 100.0:
            continue
        out.append((e, point))
    return out


def seeded_env(point: dict[str, float], order: int):
    reg = Registry()
    return {n: seed(point[n], order, reg) for n in sorted(point)}


# Polynomial oracle ------------------------------------------------------------
# A polynomial is {exponent tuple: coefficient}; differentiation is term by
# term and never touches Var.


def random_polynomial(rng: random.Random, n_vars: int, degree: int) -> dict[tuple[int, ...], float]:
    monomials = [
        e for e in itertools.product(range(degree + 1), repeat=n_vars) if sum(e) <= degree
    ]
    top = [e for e in monomials if sum(e) == degree]
    chosen = {rng.choice(top)}
    chosen.update(rng.sample(monomials, k=min(len(monomials), rng.randint(0, 5))))
    return {e: float(rng.randint(-5, 5) or 1) for e in sorted(chosen)}


def poly_degree(p) -> int:
    return max(sum(e) for e in p)


def poly_diff(p, i: int):
    out = {}
    for e, c in p.items():
        if e[i] == 0:
            continue
        e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
        out[e2] = out.get(e2, 0.0) + c * e[i]
    return out


def poly_eval(p, point) -> float:
    total = 0.0
    for e, c in p.items():
        term = c
        for x, k in zip(point, e):
            term *= x**k
        total += term
    return total


def poly_to_var(p, xs: list[Var]) -> Var:
    """Build the polynomial with repeated products (no pow) through the algebra."""
    total = None
    for e, c in p.items():
        term = None
        for x, k in zip(xs, e):
            for _ in range(k):
                term = x if term is None else term * x
        term = c if term is None else term * c
        total = term if total is None else total + term
    return as_var(total)


def poly_oracle(p, point, path: tuple[int, ...]) -> float:
    for i in path:
        p = poly_diff(p, i)
    return poly_eval(p, point)


def ad_derivative(v: Var, xs: list[Var], path: tuple[int, ...]) -> float:
    return derivative(v, [xs[i] for i in path])
