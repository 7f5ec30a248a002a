"""Exact-arithmetic kernel: scalars, polynomials, differential operators, brackets."""

from .diffop import DiffOp, commutator, falling, product
from .linalg import charpoly, nullspace, row_reduce, solve
from .multipoly import MultiPoly
from .poisson import PHASE_VARIABLES, phase_function, phase_var, poisson_bracket
from .scalar import I, ONE, ZERO, CScalar, rational_str
from .serialize import from_json, to_json
from .spaces import GradedSpace, Restriction, annihilates, annihilation_witness, restrict_matrix


def op_compose(a: DiffOp, b: DiffOp) -> DiffOp:
    return a.compose(b)


def op_commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return commutator(a, b)


def op_apply(a: DiffOp, q: MultiPoly) -> MultiPoly:
    return a.apply(q)


__all__ = [
    "CScalar", "I", "ONE", "ZERO", "rational_str",
    "MultiPoly", "DiffOp", "commutator", "product", "falling",
    "op_compose", "op_commutator", "op_apply",
    "GradedSpace", "Restriction", "restrict_matrix", "annihilates", "annihilation_witness",
    "PHASE_VARIABLES", "phase_function", "phase_var", "poisson_bracket",
    "charpoly", "nullspace", "row_reduce", "solve",
    "to_json", "from_json",
]
