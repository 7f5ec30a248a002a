"""Triangular monomial spaces and restriction of operators to them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .diffop import DiffOp
from .multipoly import MultiPoly
from .scalar import ZERO, CScalar


@dataclass(frozen=True)
class GradedSpace:
    """Span of ``t^p`` with ``0 <= f.p <= n``.

    With ``d == 1`` and ``f == (1,)`` this is the space of polynomials of
    degree at most ``n``.
    """

    n: int
    f: tuple[int, ...] = (1,)
    variables: tuple[str, ...] = field(default=None)

    def __post_init__(self):
        f = tuple(int(x) for x in self.f)
        object.__setattr__(self, "f", f)
        if self.n < 0:
            raise ValueError("degree bound n must be non-negative")
        if not f or any(x <= 0 for x in f):
            raise ValueError("characteristic vector must have positive entries")
        if any(a > b for a, b in zip(f, f[1:])):
            raise ValueError("characteristic vector must be non-decreasing")
        if self.variables is None:
            names = ("t",) if len(f) == 1 else tuple(f"t{i + 1}" for i in range(len(f)))
            object.__setattr__(self, "variables", names)
        else:
            object.__setattr__(self, "variables", tuple(self.variables))
        if len(self.variables) != len(f):
            raise ValueError("need one variable per grading weight")

    @property
    def d(self) -> int:
        return len(self.f)

    def grading(self, exps) -> int:
        return sum(a * b for a, b in zip(self.f, exps))

    def contains(self, exps) -> bool:
        return min(exps) >= 0 and self.grading(exps) <= self.n

    def basis(self) -> list[tuple[int, ...]]:
        """Basis exponents ordered by grading, then lexicographically."""
        ranges = [range(self.n // w + 1) for w in self.f]
        out = [e for e in itertools.product(*ranges) if self.grading(e) <= self.n]
        return sorted(out, key=lambda e: (self.grading(e), e))

    def dim(self) -> int:
        return len(self.basis())

    def monomial(self, exps) -> MultiPoly:
        return MultiPoly.monomial(exps, self.variables)

    def with_n(self, n: int) -> "GradedSpace":
        return GradedSpace(n, self.f, self.variables)


@dataclass
class Restriction:
    basis: list
    matrix: list  # matrix[i][j] = coefficient of basis[i] in op(basis[j])
    leakage: list  # basis monomials whose image leaves the space

    @property
    def preserves(self) -> bool:
        return not self.leakage


def _check_vars(a: DiffOp, s: GradedSpace):
    if len(a.variables) != s.d:
        raise ValueError(f"operator has {len(a.variables)} variables, space has dimension {s.d}")


def restrict_matrix(a: DiffOp, s: GradedSpace) -> Restriction:
    _check_vars(a, s)
    basis = s.basis()
    index = {e: i for i, e in enumerate(basis)}
    m = len(basis)
    mat = [[ZERO] * m for _ in range(m)]
    leak = []
    for j, e in enumerate(basis):
        img = a.apply(MultiPoly.monomial(e, a.variables))
        leaked = False
        for ee, c in img.terms.items():
            i = index.get(ee)
            if i is None:
                leaked = True
            else:
                mat[i][j] = c
        if leaked:
            leak.append(e)
    return Restriction(basis, mat, leak)


def annihilation_witness(a: DiffOp, s: GradedSpace):
    """First ``(basis monomial, nonzero image)`` pair, or ``None`` if ``a`` kills ``s``."""
    _check_vars(a, s)
    for e in s.basis():
        img = a.apply(MultiPoly.monomial(e, a.variables))
        if not img.is_zero():
            return e, img
    return None


def annihilates(a: DiffOp, s: GradedSpace) -> bool:
    return annihilation_witness(a, s) is None


def apply_matrix(mat, vec):
    return [sum((row[j] * vec[j] for j in range(len(vec))), ZERO) for row in mat]


def vector_to_poly(vec, basis, variables) -> MultiPoly:
    return MultiPoly(variables, {e: CScalar.coerce(c) for e, c in zip(basis, vec)})
