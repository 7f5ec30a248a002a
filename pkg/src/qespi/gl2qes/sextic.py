"""The sextic quasi-exactly-solvable oscillator in the t- and x-representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..polyops import DiffOp, MultiPoly, product
from .algebra import HeunCoeffs

X = ("x",)
T = ("t",)


@dataclass(frozen=True)
class SexticModel:
    n: int
    q: int
    a: Fraction
    b: Fraction
    h2p: DiffOp  # in t
    v6: tuple  # (x^6, x^4, x^2, x^0) coefficients
    gauge: tuple  # (a/4, b/2, -q/2): A = (a/4) t^2 + (b/2) t + (-q/2) ln t

    @property
    def heun(self) -> HeunCoeffs:
        return HeunCoeffs.sextic(self.n, self.q, self.a, self.b)

    def potential(self) -> MultiPoly:
        c6, c4, c2, c0 = self.v6
        return MultiPoly(X, {(6,): c6, (4,): c4, (2,): c2, (0,): c0})

    def potential_value(self, x) -> float:
        c6, c4, c2, c0 = (float(c) for c in self.v6)
        x2 = x * x
        return ((c6 * x2 + c4) * x2 + c2) * x2 + c0

    def params(self) -> dict:
        return {"n": self.n, "q": self.q, "a": str(self.a), "b": str(self.b)}


def sextic_model(n: int, q: int, a, b) -> SexticModel:
    """Sextic QES data; the first ``n+1`` states of parity ``q`` are algebraic."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if q not in (0, 1):
        raise ValueError(f"q must be 0 or 1, got {q}")
    a, b = Fraction(a), Fraction(b)
    if not (a > 0 or (a == 0 and b > 0)):
        raise ValueError(f"need a > 0, or a = 0 and b > 0 (got a={a}, b={b})")
    t = DiffOp.var("t", T)
    d = DiffOp.derivative("t", T)
    tt = MultiPoly.var("t", T)
    h2p = -4 * t * d * d + DiffOp.multiplication(2 * (2 * a * tt * tt + 2 * b * tt - 1 - 2 * q)) * d
    h2p = h2p - 4 * a * n * t
    v6 = (a * a, 2 * a * b, b * b - (4 * n + 3 + 2 * q) * a, -b * (1 + 2 * q))
    return SexticModel(n, q, a, b, h2p, v6, (a / 4, b / 2, Fraction(-q, 2)))


def hamiltonian_x(m: SexticModel) -> DiffOp:
    """``-d^2/dx^2 + V_6(x)``."""
    return -DiffOp.derivative("x", X, 2) + DiffOp.multiplication(m.potential())


@dataclass(frozen=True)
class QuantumPiIntegral:
    factors: tuple  # first-order DiffOps in x (without the 1/2^(n+1) prefactor)
    prefactor: Fraction
    expanded: DiffOp

    def factored_product(self) -> DiffOp:
        return product(list(self.factors)) * self.prefactor


def sextic_pi_integral_quantum(m: SexticModel) -> QuantumPiIntegral:
    """``2^-(n+1) prod_j (x d/dx + a x^4 + b x^2 - q - 2n + 2j)``.

    The factors commute (each is a shift of the same operator), so the order
    of the product is immaterial.
    """
    x = MultiPoly.var("x", X)
    base = DiffOp.var("x", X) * DiffOp.derivative("x", X) + DiffOp.multiplication(
        m.a * x ** 4 + m.b * x ** 2
    )
    factors = tuple(base + (-m.q - 2 * m.n + 2 * j) for j in range(m.n + 1))
    pref = Fraction(1, 2 ** (m.n + 1))
    return QuantumPiIntegral(factors, pref, product(list(factors)) * pref)


# ---------------------------------------------------------------------------
# functions x^q P(x^2) exp(-a x^4/4 - b x^2/2)


@dataclass(frozen=True)
class QuasiPoly:
    """``F(x) * exp(-a x^4/4 - b x^2/2)`` with ``F`` an exact polynomial in x.

    ``F`` carries the ``x^q`` prefactor, so differentiating never produces
    ``1/x``.  ``parity`` is 0/1 when ``F`` is even/odd, ``None`` if mixed.
    """

    a: Fraction
    b: Fraction
    poly: MultiPoly = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.poly is None:
            object.__setattr__(self, "poly", MultiPoly.zero(X))
        if self.poly.variables != X:
            raise ValueError("QuasiPoly polynomial part must be in x")

    @classmethod
    def from_t(cls, q: int, a, b, p_t: MultiPoly) -> "QuasiPoly":
        """``x^q * P(x^2)`` with ``P`` given as a polynomial in t."""
        terms = {(2 * e[0] + q,): c for e, c in p_t.terms.items()}
        return cls(a, b, MultiPoly(X, terms))

    @property
    def parity(self):
        ps = {e[0] % 2 for e in self.poly.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def t_part(self) -> tuple[int, MultiPoly]:
        """Split ``F = x^q P(x^2)``; returns ``(q, P in t)``."""
        q = self.parity
        if q is None:
            raise ValueError("mixed parity: no x^q P(x^2) form")
        return q, MultiPoly(T, {((e[0] - q) // 2,): c for e, c in self.poly.terms.items()})

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def _same(self, other: "QuasiPoly"):
        if (self.a, self.b) != (other.a, other.b):
            raise ValueError("different exponential weights")

    def __add__(self, other):
        self._same(other)
        return QuasiPoly(self.a, self.b, self.poly + other.poly)

    def __sub__(self, other):
        self._same(other)
        return QuasiPoly(self.a, self.b, self.poly - other.poly)

    def scale(self, s) -> "QuasiPoly":
        return QuasiPoly(self.a, self.b, self.poly * s)

    def times(self, poly: MultiPoly) -> "QuasiPoly":
        return QuasiPoly(self.a, self.b, self.poly * poly)

    def weight_log_derivative(self) -> MultiPoly:
        x = MultiPoly.var("x", X)
        return -self.a * x ** 3 - self.b * x

    def dx(self) -> "QuasiPoly":
        return QuasiPoly(self.a, self.b, self.poly.diff("x") + self.weight_log_derivative() * self.poly)

    def numeric(self):
        f = self.poly.numeric()
        a, b = float(self.a), float(self.b)
        return lambda x: f(x) * np.exp(-a * np.asarray(x) ** 4 / 4 - b * np.asarray(x) ** 2 / 2)


def apply_to_quasipoly(op: DiffOp, f: QuasiPoly) -> QuasiPoly:
    """Exact action of a polynomial-coefficient operator in x on ``f``."""
    if op.variables != X:
        raise ValueError(f"operator must act on x, got {op.variables}")
    derivs = [f]
    out = QuasiPoly(f.a, f.b)
    for d, coeff in sorted(op.coefficients().items()):
        k = d[0]
        while len(derivs) <= k:
            derivs.append(derivs[-1].dx())
        out = out + derivs[k].times(coeff)
    return out


def quasipoly_basis(m: SexticModel) -> list[QuasiPoly]:
    """``x^q x^(2k) exp(...)`` for ``k = 0..n``: the gauge image of ``P_n``."""
    return [
        QuasiPoly.from_t(m.q, m.a, m.b, MultiPoly.monomial((k,), T)) for k in range(m.n + 1)
    ]


def gauge_intertwining_witness(m: SexticModel, k_max: int | None = None):
    """Check ``H_6 (x^q t^k e^w) = x^q (h2p t^k)(x^2) e^w`` for ``k <= k_max``.

    Returns ``None`` when every identity holds exactly, else the first failing ``k``.
    """
    k_max = m.n + 2 if k_max is None else k_max
    H = hamiltonian_x(m)
    for k in range(k_max + 1):
        tk = MultiPoly.monomial((k,), T)
        lhs = apply_to_quasipoly(H, QuasiPoly.from_t(m.q, m.a, m.b, tk))
        rhs = QuasiPoly.from_t(m.q, m.a, m.b, m.h2p.apply(tk))
        if not (lhs - rhs).is_zero():
            return k
    return None

