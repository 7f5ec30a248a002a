"""Trigonometric A_1 model in the relative coordinate.

With ``r = x1 - x2`` and ``z = exp(i beta r / 2)`` every quantity is a
rational function ``num(z) / (z^s (z^2 - 1)^k)``; the invariant is
``tau = z + 1/z = 2 cos(beta r / 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..gl2qes.algebra import CommutantReport
from ..polyops import I, CScalar, DiffOp, MultiPoly, restrict_matrix
from .gauge import (
    AlgebraicOperator,
    TriangularSpace,
    detect_characteristic_vector,
    verify_cs_commutant,
)
from .roots import AlgebraicityError

Z = ("z",)
TAU = ("tau",)


def _z(k: int) -> MultiPoly:
    return MultiPoly.monomial((k,), Z)


_D = _z(2) - 1


@dataclass(frozen=True)
class ZFrac:
    num: MultiPoly
    s: int = 0
    k: int = 0

    def _lift(self, s, k) -> MultiPoly:
        return self.num * _z(s - self.s) * _D ** (k - self.k)

    def __add__(self, other: "ZFrac") -> "ZFrac":
        s, k = max(self.s, other.s), max(self.k, other.k)
        return ZFrac(self._lift(s, k) + other._lift(s, k), s, k)

    def __neg__(self):
        return ZFrac(-self.num, self.s, self.k)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ZFrac):
            return ZFrac(self.num * other.num, self.s + other.s, self.k + other.k)
        return ZFrac(self.num * other, self.s, self.k)

    __rmul__ = __mul__

    def z_dz(self) -> "ZFrac":
        """``z d/dz``."""
        n = self.num
        inner = MultiPoly.var("z", Z) * n.diff("z") - n * self.s
        return ZFrac(inner * _D - _z(2) * n * (2 * self.k), self.s, self.k + 1)

    def reduce(self) -> "ZFrac":
        num, s, k = self.num, self.s, self.k
        if num.is_zero():
            return ZFrac(num)
        while k > 0:
            q, r = num.divmod_univariate(_D, "z")
            if not r.is_zero():
                break
            num, k = q, k - 1
        low = min(e[0] for e in num.terms)
        cut = min(low, s)
        if cut:
            num = MultiPoly(Z, {(e[0] - cut,): c for e, c in num.terms.items()})
            s -= cut
        return ZFrac(num, s, k)

    def to_tau(self) -> MultiPoly:
        """Rewrite a symmetric Laurent polynomial in ``tau``."""
        r = self.reduce()
        if r.k:
            raise AlgebraicityError("pole at z^2 = 1 survives", r)
        laurent = {e[0] - r.s: c for e, c in r.num.terms.items()}
        out = {}
        while laurent:
            top = max(laurent)
            c = laurent[top]
            if top < 0 or laurent.get(-top) != c:
                raise AlgebraicityError("Laurent polynomial is not z <-> 1/z symmetric", laurent)
            out[(top,)] = c
            tau_pow = (_z(2) + 1) ** top
            for e, v in tau_pow.terms.items():
                key = e[0] - top
                val = laurent.get(key, CScalar.coerce(0)) - c * v
                if val.is_zero():
                    laurent.pop(key, None)
                else:
                    laurent[key] = val
        return MultiPoly(TAU, out)


def _tau_power(m: int) -> ZFrac:
    return ZFrac((_z(2) + 1) ** m, m, 0)


@dataclass
class SutherlandA1:
    beta: Fraction
    mu: Fraction
    operator: AlgebraicOperator
    f: tuple
    spaces: list
    reports: list

    def to_dict(self) -> dict:
        return {"beta": str(self.beta), "mu": str(self.mu), "f": list(self.f), "reports": self.reports}


class _TrigGauge:
    """``-d^2/dr^2 + (beta^2/4) mu(mu-1) / sin^2(beta r/2)`` conjugated by ``|sin(beta r/2)|^mu``."""

    def __init__(self, beta: Fraction, mu: Fraction):
        self.beta, self.mu = beta, mu
        c = I * beta / 2  # d/dr = c z d/dz
        self.c = c
        # log-derivative of Psi0: (mu beta / 2) cot, cot = i (z^2+1)/(z^2-1)
        self.L = ZFrac((_z(2) + 1) * (I * mu * beta / 2), 0, 1)
        # 1/sin^2 = -4 z^2 / (z^2-1)^2
        self.W = ZFrac(_z(2) * (-(beta * beta) * mu * (mu - 1)), 0, 2)

    def dr(self, f: ZFrac) -> ZFrac:
        return f.z_dz() * self.c

    def ground_energy(self) -> CScalar:
        U = -self.dr(self.L) - self.L * self.L + self.W
        r = U.reduce()
        tau = r.to_tau()
        if not tau.is_constant():
            raise AlgebraicityError("ground-state potential is not constant", tau)
        return tau.constant_term()

    def image(self, m: int) -> MultiPoly:
        f = _tau_power(m)
        df = self.dr(f)
        return (-self.dr(df) - self.L * df * 2).to_tau()


def sutherland_a1_model(beta, mu, n_max: int = 4) -> SutherlandA1:
    """Gauge-rotated A_1 trigonometric operator in ``tau`` with its flag and commutant reports."""
    beta, mu = Fraction(beta), Fraction(mu)
    g = _TrigGauge(beta, mu)
    E0 = g.ground_energy()
    tau = MultiPoly.var("tau", TAU)
    B = g.image(1)
    A = (g.image(2) - tau * B * 2) * Fraction(1, 2)
    h = DiffOp.from_coefficients({(2,): A, (1,): B}, TAU)
    checked = []
    for m in range(3, 6):
        ok = h.apply(MultiPoly.monomial((m,), TAU)) == g.image(m)
        checked.append([m, ok])
        if not ok:
            raise AlgebraicityError(f"reconstructed operator disagrees on tau^{m}", m)
    op = AlgebraicOperator(
        None, None, h, E0, {"coefficients_polynomial": True, "probes": [1, 2], "held_out": checked}
    )
    f = detect_characteristic_vector(op, n_probe=n_max)
    spaces, reports = [], []
    for n in range(n_max + 1):
        sp = TriangularSpace.build(n, f, TAU)
        rep: CommutantReport = verify_cs_commutant(op, sp)
        spaces.append(sp)
        reports.append(
            {"n": n, "dim": rep.checked, "exact_zero": rep.exact_zero, "preserves": restrict_matrix(h, sp.space).preserves}
        )
    return SutherlandA1(beta, mu, op, f, spaces, reports)
