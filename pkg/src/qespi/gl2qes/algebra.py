"""gl(2) generators acting on polynomials in t, their particular integrals,
and the general quadratic (Heun) element of the enveloping algebra."""

from __future__ import annotations

from random import Random
from dataclasses import dataclass, fields
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..polyops import (
    DiffOp,
    GradedSpace,
    MultiPoly,
    annihilation_witness,
    charpoly,
    commutator,
    restrict_matrix,
)

T = ("t",)


class NotQESError(ValueError):
    """Raised when an operator does not preserve the requested polynomial space."""


@dataclass(frozen=True)
class Gl2Generators:
    n: int
    jm: DiffOp
    j0: DiffOp
    jp: DiffOp
    t0: DiffOp


@lru_cache(maxsize=None)
def gl2_generators(n: int) -> Gl2Generators:
    """First-order realisation with ``P_n`` as the (n+1)-dimensional module."""
    if n < 0:
        raise ValueError("n must be non-negative")
    t = DiffOp.var("t", T)
    jm = DiffOp.derivative("t", T)
    j0 = t * jm - n
    jp = t * j0
    return Gl2Generators(n, jm, j0, jp, DiffOp.identity(T))


def poly_space(n: int) -> GradedSpace:
    """Polynomials of degree at most ``n`` in ``t``."""
    return GradedSpace(n, (1,), T)


@lru_cache(maxsize=None)
def pi_integral_gl2(n: int, k: int) -> DiffOp:
    """``i_n^(k)``: ``d^(n+1)`` for ``k = -1``, else ``d^(n-k) prod_{j=0..k} (J0_n + j)``.

    Every such operator kills ``P_n``; its grading is ``-(n-k)``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not -1 <= k <= n:
        raise ValueError(f"k must lie in [-1, {n}], got {k}")
    g = gl2_generators(n)
    if k == -1:
        return g.jm ** (n + 1)
    out = g.jm ** (n - k)
    for j in range(k + 1):
        out = out * (g.j0 + j)
    return out


# ---------------------------------------------------------------------------
# 9-parameter quadratic element


@dataclass(frozen=True)
class HeunCoeffs:
    c_pp: Fraction = Fraction(0)
    c_p0: Fraction = Fraction(0)
    c_pm: Fraction = Fraction(0)
    c_0m: Fraction = Fraction(0)
    c_mm: Fraction = Fraction(0)
    c_p: Fraction = Fraction(0)
    c_0: Fraction = Fraction(0)
    c_m: Fraction = Fraction(0)
    c: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, Fraction(getattr(self, f.name)))

    @classmethod
    def random(cls, rng: Random, bound: int = 3, lower_triangular: bool = False):
        """Small-integer coefficients; ``lower_triangular`` drops every J+ term."""
        vals = {f.name: rng.randint(-bound, bound) for f in fields(cls)}
        if lower_triangular:
            for name in ("c_pp", "c_p0", "c_pm", "c_p"):
                vals[name] = 0
        return cls(**vals)

    @classmethod
    def sextic(cls, n: int, q: int, a, b) -> "HeunCoeffs":
        """Coefficients reproducing ``-4t d^2 + 2(2at^2+2bt-1-2q) d - 4ant`` with ``J0 = t d - n``."""
        a, b = Fraction(a), Fraction(b)
        return cls(c_0m=-4, c_p=4 * a, c_0=4 * b, c_m=-2 * (2 * n + 1 + 2 * q), c=4 * b * n)

    def as_dict(self) -> dict[str, Fraction]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def has_raising(self) -> bool:
        return any((self.c_pp, self.c_p0, self.c_pm, self.c_p))


@dataclass(frozen=True)
class HeunData:
    h: DiffOp
    p4: MultiPoly
    p3: MultiPoly
    p2: MultiPoly


def h2_operator(c: HeunCoeffs, n: int) -> DiffOp:
    g = gl2_generators(n)
    jp, j0, jm = g.jp, g.j0, g.jm
    return (
        jp * jp * c.c_pp
        + jp * j0 * c.c_p0
        + jp * jm * c.c_pm
        + j0 * jm * c.c_0m
        + jm * jm * c.c_mm
        + jp * c.c_p
        + j0 * c.c_0
        + jm * c.c_m
        + g.t0 * c.c
    )


def heun_operator(c: HeunCoeffs, n: int) -> HeunData:
    """Substitute the generators into the quadratic element and read off ``P4, P3, P2``."""
    h = h2_operator(c, n)
    p4 = -h.coefficient((2,))
    p3 = h.coefficient((1,))
    p2 = h.coefficient((0,))
    rebuilt = DiffOp.from_coefficients({(2,): -p4, (1,): p3, (0,): p2}, T)
    if rebuilt != h:
        raise AssertionError("quadratic element is not second order")
    for poly, bound in ((p4, 4), (p3, 3), (p2, 2)):
        if poly.degree() > bound:
            raise AssertionError(f"coefficient degree {poly.degree()} exceeds {bound}")
    return HeunData(h, p4, p3, p2)


# ---------------------------------------------------------------------------
# finite block spectrum


@dataclass
class BlockSpectrum:
    n: int
    matrix: list  # exact restriction to P_n
    char_poly: list  # exact, ascending, monic
    eigenvalues: np.ndarray  # complex, sorted by (real, imag)
    eigenvectors: list  # numpy Polynomial per eigenvalue (ascending coefficients in t)
    residuals: np.ndarray  # ||M v - lambda v|| / ||v||

    @property
    def pairs(self):
        return list(zip(self.eigenvalues, self.eigenvectors))


def exact_matrix_to_numpy(mat) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in mat], dtype=complex)


def qes_block_spectrum(h: DiffOp, n: int) -> BlockSpectrum:
    """Eigenpairs of ``h`` restricted to ``P_n``.

    The matrix and characteristic polynomial are exact; the eigen-decomposition
    runs in complex floating point on top of them.
    """
    res = restrict_matrix(h, poly_space(n))
    if not res.preserves:
        raise NotQESError(
            f"not quasi-exactly-solvable on P_{n}: monomials {res.leakage} leave the space"
        )
    m = exact_matrix_to_numpy(res.matrix)
    vals, vecs = np.linalg.eig(m)
    order = np.lexsort((np.round(vals.imag, 12), np.round(vals.real, 12)))
    vals = vals[order]
    vecs = vecs[:, order]
    polys = []
    resid = []
    for j in range(len(vals)):
        v = vecs[:, j]
        # fix phase: largest component real positive
        k = int(np.argmax(np.abs(v)))
        v = v * (abs(v[k]) / v[k])
        polys.append(np.polynomial.Polynomial(v))
        resid.append(np.linalg.norm(m @ v - vals[j] * v) / np.linalg.norm(v))
    return BlockSpectrum(n, res.matrix, charpoly(res.matrix), vals, polys, np.array(resid))


# ---------------------------------------------------------------------------
# commutant verification


@dataclass
class CommutantReport:
    exact_zero: bool
    checked: int
    witness: tuple | None = None  # (basis element, nonzero image)


def verify_commutant(h: DiffOp, i: DiffOp, s) -> CommutantReport:
    """Apply ``[h, i]`` to every basis element of ``s``.

    ``s`` is either a :class:`GradedSpace` or a sequence of objects accepted by
    :func:`apply_to_quasipoly` (x-space basis).
    """
    if h.variables != i.variables:
        raise ValueError("operators act on different variables")
    comm = commutator(h, i)
    if isinstance(s, GradedSpace):
        w = annihilation_witness(comm, s)
        if w is None:
            return CommutantReport(True, s.dim())
        return CommutantReport(False, s.dim(), w)
    from .sextic import apply_to_quasipoly

    basis = list(s)
    for f in basis:
        img = apply_to_quasipoly(comm, f)
        if not img.is_zero():
            return CommutantReport(False, len(basis), (f, img))
    return CommutantReport(True, len(basis))


@dataclass
class FlagEntry:
    p: int
    preserves: bool
    checks: list  # (m, k, exact_zero)

    @property
    def ok(self) -> bool:
        return self.preserves and all(z for _, _, z in self.checks)


def flag_preservation_report(h: DiffOp, p_max: int, m_max: int | None = None) -> list[FlagEntry]:
    """For each ``p <= p_max``: does ``h`` preserve ``P_p``, and does ``[h, i_m^(k)]``
    kill ``P_p`` for ``p <= m <= m_max`` and every ``k``?"""
    m_max = p_max if m_max is None else m_max
    out = []
    for p in range(p_max + 1):
        s = poly_space(p)
        preserves = restrict_matrix(h, s).preserves
        checks = []
        for m in range(p, m_max + 1):
            for k in range(-1, m + 1):
                checks.append((m, k, verify_commutant(h, pi_integral_gl2(m, k), s).exact_zero))
        out.append(FlagEntry(p, preserves, checks))
    return out
