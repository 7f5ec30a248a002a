"""Normal-ordered linear differential operators with polynomial coefficients.

A term ``c * x^a * d^b`` is stored under the key ``(a, b)``; multiplication
operators sit to the left of all derivatives.  Because this form is canonical,
two operators are equal iff their term maps are equal.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from math import comb

from .multipoly import MultiPoly, _add_into, grlex_key
from .scalar import ONE, CScalar


@lru_cache(maxsize=None)
def _leibniz_weights(b: int, g: int) -> tuple[tuple[int, int], ...]:
    """Pairs ``(k, C(b,k) * g!/(g-k)!)`` from ``d^b x^g = sum_k w_k x^(g-k) d^(b-k)``."""
    out = []
    ff = 1
    for k in range(min(b, g) + 1):
        if k:
            ff *= g - k + 1
        out.append((k, comb(b, k) * ff))
    return tuple(out)


def falling(g: int, b: int) -> int:
    """Falling factorial g (g-1) ... (g-b+1); zero when b > g."""
    out = 1
    for j in range(b):
        out *= g - j
    return out


class DiffOp:
    """Operator ``sum c * x^mon * d^der`` over an ordered variable list."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        self.variables = tuple(variables)
        nv = len(self.variables)
        clean: dict = {}
        for (mon, der), c in (terms or {}).items():
            mon, der = tuple(mon), tuple(der)
            if len(mon) != nv or len(der) != nv or min(mon + der, default=0) < 0:
                raise ValueError(f"bad term key {(mon, der)} for {self.variables}")
            c = CScalar.coerce(c)
            if not c.is_zero():
                _add_into(clean, (mon, der), c)
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms) -> "DiffOp":
        op = object.__new__(cls)
        op.variables = variables
        op.terms = terms
        return op

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, variables) -> "DiffOp":
        return cls._raw(tuple(variables), {})

    @classmethod
    def identity(cls, variables) -> "DiffOp":
        return cls.scalar(1, variables)

    @classmethod
    def scalar(cls, c, variables) -> "DiffOp":
        variables = tuple(variables)
        z = (0,) * len(variables)
        return cls(variables, {(z, z): c})

    @classmethod
    def multiplication(cls, poly: MultiPoly) -> "DiffOp":
        z = (0,) * len(poly.variables)
        return cls._raw(poly.variables, {(e, z): c for e, c in poly.terms.items()})

    @classmethod
    def derivative(cls, name: str, variables, times: int = 1) -> "DiffOp":
        variables = tuple(variables)
        der = [0] * len(variables)
        der[variables.index(name)] = times
        return cls._raw(variables, {((0,) * len(variables), tuple(der)): ONE})

    @classmethod
    def var(cls, name: str, variables) -> "DiffOp":
        return cls.multiplication(MultiPoly.var(name, variables))

    @classmethod
    def from_coefficients(cls, coeffs: Mapping, variables) -> "DiffOp":
        """Build ``sum_b coeffs[b] * d^b`` from a map derivative-index -> MultiPoly."""
        variables = tuple(variables)
        acc: dict = {}
        for der, poly in coeffs.items():
            if poly.variables != variables:
                raise ValueError("coefficient variable mismatch")
            for e, c in poly.terms.items():
                _add_into(acc, (e, tuple(der)), c)
        return cls._raw(variables, acc)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Maximal total derivative order (-1 for the zero operator)."""
        return max((sum(d) for _, d in self.terms), default=-1)

    def coefficient(self, der) -> MultiPoly:
        """Polynomial coefficient multiplying ``d^der``."""
        der = tuple(der)
        return MultiPoly._raw(
            self.variables, {m: c for (m, d), c in self.terms.items() if d == der}
        )

    def coefficients(self) -> dict[tuple, MultiPoly]:
        out: dict = {}
        for (m, d), c in self.terms.items():
            out.setdefault(d, {})[m] = c
        return {d: MultiPoly._raw(self.variables, t) for d, t in out.items()}

    def gradings(self, weights: Sequence[int] | None = None) -> set[int]:
        """Set of weighted gradings ``w.(mon - der)`` of the terms."""
        w = weights or (1,) * len(self.variables)
        return {sum(wi * (a - b) for wi, a, b in zip(w, m, d)) for m, d in self.terms}

    def sorted_terms(self):
        return sorted(
            self.terms.items(),
            key=lambda kv: (grlex_key(kv[0][1]), grlex_key(kv[0][0])),
            reverse=True,
        )

    # -- linear structure -------------------------------------------------
    def _check(self, other: "DiffOp"):
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    def _lift(self, other) -> "DiffOp":
        if isinstance(other, DiffOp):
            self._check(other)
            return other
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError("variable mismatch")
            return DiffOp.multiplication(other)
        if isinstance(other, (int, Fraction, CScalar)):
            return DiffOp.scalar(other, self.variables)
        raise TypeError(f"cannot combine DiffOp with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        acc = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(acc, k, c)
        return DiffOp._raw(self.variables, acc)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp._raw(self.variables, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "DiffOp":
        s = CScalar.coerce(s)
        if s.is_zero():
            return DiffOp.zero(self.variables)
        return DiffOp._raw(self.variables, {k: c * s for k, c in self.terms.items()})

    # -- composition ------------------------------------------------------
    def compose(self, other: "DiffOp") -> "DiffOp":
        """``self o other`` in normal order (generalised Leibniz rule)."""
        self._check(other)
        nv = len(self.variables)
        acc: dict = {}
        for (a, b), c1 in self.terms.items():
            for (g, d), c2 in other.terms.items():
                c12 = c1 * c2
                if not any(b[i] and g[i] for i in range(nv)):
                    key = (
                        tuple(x + y for x, y in zip(a, g)),
                        tuple(x + y for x, y in zip(b, d)),
                    )
                    _add_into(acc, key, c12)
                    continue
                choices = [_leibniz_weights(b[i], g[i]) for i in range(nv)]
                for combo in itertools.product(*choices):
                    w = 1
                    mon = []
                    der = []
                    for i, (k, wk) in enumerate(combo):
                        w *= wk
                        mon.append(a[i] + g[i] - k)
                        der.append(b[i] - k + d[i])
                    _add_into(acc, (tuple(mon), tuple(der)), c12 * w)
        return DiffOp._raw(self.variables, acc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CScalar)):
            return self.scale(other)
        if isinstance(other, MultiPoly):
            other = self._lift(other)
        if isinstance(other, DiffOp):
            return self.compose(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CScalar)):
            return self.scale(other)
        if isinstance(other, MultiPoly):
            return self._lift(other).compose(self)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CScalar)):
            return self.scale(CScalar.coerce(other).inverse())
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = DiffOp.identity(self.variables)
        base = self
        while k:
            if k & 1:
                result = result.compose(base)
            base = base.compose(base)
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction, CScalar, MultiPoly)):
            try:
                return self.terms == self._lift(other).terms
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- action on polynomials -------------------------------------------
    def apply(self, poly: MultiPoly) -> MultiPoly:
        if poly.variables != self.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {poly.variables}")
        acc: dict = {}
        for (a, b), c1 in self.terms.items():
            for g, c2 in poly.terms.items():
                w = 1
                for gi, bi in zip(g, b):
                    if bi > gi:
                        w = 0
                        break
                    if bi:
                        w *= falling(gi, bi)
                if w == 0:
                    continue
                mon = tuple(ai + gi - bi for ai, gi, bi in zip(a, g, b))
                _add_into(acc, mon, c1 * c2 * w)
        return MultiPoly._raw(self.variables, acc)

    def __call__(self, poly: MultiPoly) -> MultiPoly:
        return self.apply(poly)

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"DiffOp({self.variables}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, d), c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, m) if k)
            der = "*".join(
                f"d{v}" if k == 1 else f"d{v}^{k}" for v, k in zip(self.variables, d) if k
            )
            body = "*".join(s for s in (mono, der) if s)
            cs = str(c)
            if c.im != 0 and c.re != 0:
                cs = f"({cs})"
            if not body:
                parts.append(cs)
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{cs}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    """``[a, b] = a o b - b o a``."""
    return a.compose(b) - b.compose(a)


def product(ops: Sequence[DiffOp], variables=None) -> DiffOp:
    """Left-to-right composition ``ops[0] o ops[1] o ...``."""
    if not ops:
        if variables is None:
            raise ValueError("empty product needs variables")
        return DiffOp.identity(variables)
    out = ops[0]
    for op in ops[1:]:
        out = out.compose(op)
    return out
