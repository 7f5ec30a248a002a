"""A_N root data, the rational Calogero Hamiltonian, its ground state and
the Weyl-invariant coordinates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from ..polyops import CScalar, MultiPoly


class AlgebraicityError(ArithmeticError):
    """A gauge-rotated expression failed to be polynomial."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class RootSystemModel:
    """A_N with a single coupling ``nu`` and oscillator frequency ``omega``.

    Coordinates are ``x_1..x_{N+1}``; only the translation-invariant
    (centre-of-mass free) sector is modelled.
    """

    rank: int
    nu: Fraction
    omega: Fraction
    family: str = "A"

    def __post_init__(self):
        if self.family != "A":
            raise ValueError("only the A family is supported")
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        object.__setattr__(self, "nu", Fraction(self.nu))
        object.__setattr__(self, "omega", Fraction(self.omega))

    @property
    def coords(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.rank + 1))

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        d = self.rank + 1
        out = []
        for i, j in itertools.combinations(range(d), 2):
            r = [0] * d
            r[i], r[j] = 1, -1
            out.append(tuple(r))
        return tuple(out)

    def root_form(self, alpha) -> MultiPoly:
        """The linear form ``alpha . x``."""
        v = self.coords
        return MultiPoly(v, {tuple(int(i == k) for i in range(len(v))): c for k, c in enumerate(alpha) if c})

    @cached_property
    def centered(self) -> tuple[MultiPoly, ...]:
        """``y_i = x_i - mean(x)``."""
        v = self.coords
        d = len(v)
        xs = [MultiPoly.var(name, v) for name in v]
        mean = sum(xs[1:], xs[0]) * Fraction(1, d)
        return tuple(x - mean for x in xs)

    def params(self) -> dict:
        return {"family": self.family, "rank": self.rank, "nu": str(self.nu), "omega": str(self.omega)}


def _sq(alpha) -> int:
    return sum(c * c for c in alpha)


# ---------------------------------------------------------------------------
# rational functions whose denominators are products of root forms


class RootRational:
    """``num / prod_alpha (alpha . x)^e_alpha``, exact."""

    __slots__ = ("model", "num", "den")

    def __init__(self, model: RootSystemModel, num: MultiPoly, den=None):
        self.model = model
        self.num = num
        self.den = tuple(den) if den is not None else (0,) * len(model.positive_roots)

    @classmethod
    def poly(cls, model, p: MultiPoly) -> "RootRational":
        return cls(model, p)

    @classmethod
    def const(cls, model, c) -> "RootRational":
        return cls(model, MultiPoly.constant(c, model.coords))

    @classmethod
    def pole(cls, model, k: int, c, power: int = 1) -> "RootRational":
        den = [0] * len(model.positive_roots)
        den[k] = power
        return cls(model, MultiPoly.constant(c, model.coords), den)

    def _forms(self):
        return [self.model.root_form(a) for a in self.model.positive_roots]

    def _lift(self, den):
        num = self.num
        forms = None
        for k, (have, want) in enumerate(zip(self.den, den)):
            if want > have:
                forms = forms or self._forms()
                num = num * forms[k] ** (want - have)
        return num

    def __add__(self, other):
        if not isinstance(other, RootRational):
            other = RootRational(self.model, MultiPoly.constant(other, self.model.coords)) if not isinstance(
                other, MultiPoly
            ) else RootRational(self.model, other)
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return RootRational(self.model, self._lift(den) + other._lift(den), den)

    __radd__ = __add__

    def __neg__(self):
        return RootRational(self.model, -self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RootRational):
            return RootRational(
                self.model, self.num * other.num, tuple(a + b for a, b in zip(self.den, other.den))
            )
        if isinstance(other, MultiPoly):
            return RootRational(self.model, self.num * other, self.den)
        return RootRational(self.model, self.num * other, self.den)

    __rmul__ = __mul__

    def diff(self, var: str) -> "RootRational":
        i = self.model.coords.index(var)
        out = RootRational(self.model, self.num.diff(var), self.den)
        for k, e in enumerate(self.den):
            c = self.model.positive_roots[k][i]
            if e and c:
                den = list(self.den)
                den[k] += 1
                out = out + RootRational(self.model, self.num * (-e * c), den)
        return out

    def reduce(self) -> "RootRational":
        num = self.num
        den = list(self.den)
        if num.is_zero():
            return RootRational(self.model, num)
        forms = self._forms()
        for k in range(len(den)):
            while den[k] > 0:
                q, r = num.divmod_lex(forms[k])
                if not r.is_zero():
                    break
                num = q
                den[k] -= 1
        return RootRational(self.model, num, den)

    def is_polynomial(self) -> bool:
        return not any(self.den)

    def as_poly(self) -> MultiPoly:
        r = self.reduce()
        if not r.is_polynomial():
            raise AlgebraicityError("expression has non-removable root poles", r)
        return r.num

    def as_constant(self) -> CScalar:
        p = self.as_poly()
        if not p.is_constant():
            raise AlgebraicityError("expression is not constant", p)
        return p.constant_term()

    def __repr__(self):
        return f"RootRational({self.num} / den{self.den})"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroundState:
    """``prod_alpha |alpha.x|^nu * exp(-omega * sum y^2 / 2)`` in factored form."""

    model: RootSystemModel

    @property
    def exponents(self) -> dict:
        return {alpha: self.model.nu for alpha in self.model.positive_roots}

    @property
    def gaussian(self) -> Fraction:
        return self.model.omega

    def log_gradient(self) -> list[RootRational]:
        """``d_i log Psi0 = sum_alpha nu alpha_i / (alpha.x) - omega y_i``."""
        m = self.model
        out = []
        for i in range(len(m.coords)):
            g = RootRational.poly(m, -m.omega * m.centered[i])
            for k, alpha in enumerate(m.positive_roots):
                if alpha[i]:
                    g = g + RootRational.pole(m, k, m.nu * alpha[i])
            out.append(g)
        return out

    def evaluate(self, point) -> float:
        import math

        m = self.model
        val = 1.0
        for alpha in m.positive_roots:
            val *= abs(sum(a * x for a, x in zip(alpha, point))) ** float(m.nu)
        mean = sum(point) / len(point)
        r2 = sum((x - mean) ** 2 for x in point)
        return val * math.exp(-float(m.omega) * r2 / 2)


def ground_state_rational(rs: RootSystemModel) -> GroundState:
    return GroundState(rs)


@dataclass(frozen=True)
class RationalHamiltonian:
    """``-1/2 Lap + omega^2/2 sum y^2 + sum_alpha g_alpha / (alpha.x)^2``
    with ``g_alpha = nu(nu-1)|alpha|^2 / 2``."""

    model: RootSystemModel

    @property
    def kinetic(self) -> Fraction:
        return Fraction(1, 2)

    @property
    def confinement(self) -> Fraction:
        return self.model.omega ** 2 / 2

    @property
    def poles(self) -> list[tuple[tuple[int, ...], Fraction]]:
        nu = self.model.nu
        return [(alpha, nu * (nu - 1) * _sq(alpha) / 2) for alpha in self.model.positive_roots]

    def potential(self) -> RootRational:
        m = self.model
        w = RootRational.poly(m, sum((y * y for y in m.centered[1:]), m.centered[0] * m.centered[0]))
        w = w * self.confinement
        for k, (_, g) in enumerate(self.poles):
            if g:
                w = w + RootRational.pole(m, k, g, power=2)
        return w

    def gauge_potential(self) -> RootRational:
        """``-1/2 (Lap log Psi0 + |grad log Psi0|^2) + W``: constant iff Psi0 is an eigenfunction."""
        m = self.model
        G = ground_state_rational(m).log_gradient()
        lap = None
        sq = None
        for i, var in enumerate(m.coords):
            d = G[i].diff(var)
            lap = d if lap is None else lap + d
            s = G[i] * G[i]
            sq = s if sq is None else sq + s
        return (lap + sq) * Fraction(-1, 2) + self.potential()

    def ground_energy(self) -> CScalar:
        return self.gauge_potential().as_constant()

    def apply_gauged(self, f: MultiPoly, shift=0) -> RootRational:
        """``Psi0^-1 (H - shift) (Psi0 f)`` as an exact rational function."""
        m = self.model
        G = ground_state_rational(m).log_gradient()
        out = RootRational.poly(m, f * Fraction(0))
        for i, var in enumerate(m.coords):
            out = out + RootRational.poly(m, f.diff(var, 2) * Fraction(-1, 2))
            out = out - G[i] * f.diff(var)
        return out + (self.gauge_potential() - shift) * f


def rational_hamiltonian(rs: RootSystemModel) -> RationalHamiltonian:
    return RationalHamiltonian(rs)


@dataclass(frozen=True)
class InvariantChart:
    model: RootSystemModel
    invariants: tuple[MultiPoly, ...]  # t_a(x), a = 2..N+1
    degrees: tuple[int, ...]

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(f"t{a}" for a in self.degrees)


def invariants_rational(rs: RootSystemModel) -> InvariantChart:
    """Weyl invariants of degrees ``2..N+1`` in centred coordinates.

    Even degrees use the positive-root power sums ``sum_{alpha>0} (alpha.x)^a``
    (half the sum over the full root orbit).  Odd root power sums change sign
    under reflections, so odd degrees use the orbit of the first fundamental
    weight instead: ``sum_i y_i^a``.
    """
    degrees = tuple(range(2, rs.rank + 2))
    inv = []
    for a in degrees:
        if a % 2 == 0:
            forms = [rs.root_form(alpha) for alpha in rs.positive_roots]
        else:
            forms = list(rs.centered)
        inv.append(sum((f ** a for f in forms[1:]), forms[0] ** a))
    return InvariantChart(rs, tuple(inv), degrees)
