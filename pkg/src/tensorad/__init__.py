"""Higher-order forward-mode automatic differentiation on nested derivative tensors."""

from .algebra import add, div, mul, neg, pow_scalar, scalar_mul, sub
from .core import (
    DivisionByZeroError,
    DomainError,
    OrderError,
    Registry,
    Var,
    VarId,
    constant,
    d,
    reduce,
    seed,
    value,
)
from .elementary import LiftedFn, apply_lifted, cos, exp, ln, sin, sqrt
from .expr import eval_expr, parse, unparse
from .extract import DerivTensor, derivative, fd_oracle, gradient, hessian, taylor_coeffs, tensor

__all__ = [
    "DerivTensor",
    "DivisionByZeroError",
    "DomainError",
    "LiftedFn",
    "OrderError",
    "Registry",
    "Var",
    "VarId",
    "add",
    "apply_lifted",
    "constant",
    "cos",
    "d",
    "derivative",
    "div",
    "eval_expr",
    "exp",
    "fd_oracle",
    "gradient",
    "hessian",
    "ln",
    "mul",
    "neg",
    "parse",
    "pow_scalar",
    "reduce",
    "scalar_mul",
    "seed",
    "sin",
    "sqrt",
    "sub",
    "taylor_coeffs",
    "tensor",
    "unparse",
    "value",
]
