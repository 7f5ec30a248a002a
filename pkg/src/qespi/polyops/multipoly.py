"""Sparse multivariate polynomials over Gaussian rationals."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from fractions import Fraction

import numpy as np

from .scalar import ONE, ZERO, CScalar

Exps = tuple[int, ...]


def grlex_key(exps: Exps):
    """Sort key for graded-lexicographic order (use with ``reverse=True`` for leading-first)."""
    return (sum(exps), exps)


def _add_into(acc: dict, key, c) -> None:
    prev = acc.get(key)
    if prev is None:
        acc[key] = c
    else:
        s = prev + c
        if s.is_zero():
            del acc[key]
        else:
            acc[key] = s


class MultiPoly:
    """Polynomial ``sum c_e * prod v_i**e_i`` stored as ``{e: c}`` with no zero entries.

    Instances are treated as immutable.  Arithmetic between polynomials requires
    identical variable lists.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exps, object] | None = None):
        self.variables = tuple(variables)
        clean = {}
        if terms:
            nv = len(self.variables)
            for e, c in terms.items():
                e = tuple(int(k) for k in e)
                if len(e) != nv or any(k < 0 for k in e):
                    raise ValueError(f"bad exponent {e} for variables {self.variables}")
                c = CScalar.coerce(c)
                if not c.is_zero():
                    _add_into(clean, e, c)
        self.terms = clean

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "MultiPoly":
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, variables) -> "MultiPoly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, c, variables) -> "MultiPoly":
        variables = tuple(variables)
        c = CScalar.coerce(c)
        return cls._raw(variables, {} if c.is_zero() else {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables) -> "MultiPoly":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls._raw(variables, {tuple(e): ONE})

    @classmethod
    def monomial(cls, exps, variables, coeff=1) -> "MultiPoly":
        return cls(variables, {tuple(exps): coeff})

    @classmethod
    def univariate(cls, coeffs, name: str = "t") -> "MultiPoly":
        """Build ``sum coeffs[k] * name**k``."""
        return cls((name,), {(k,): c for k, c in enumerate(coeffs)})

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[Exps, CScalar]]:
        """Terms in graded-lex order, leading term first."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def __iter__(self):
        return iter(self.sorted_terms())

    def coeff(self, exps) -> CScalar:
        return self.terms.get(tuple(exps), ZERO)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> CScalar:
        return self.terms.get((0,) * len(self.variables), ZERO)

    def is_real(self) -> bool:
        return all(c.im == 0 for c in self.terms.values())

    def depends_on(self, name: str) -> bool:
        i = self.variables.index(name)
        return any(e[i] for e in self.terms)

    # -- ring operations --------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, CScalar)):
            return MultiPoly.constant(other, self.variables)
        raise TypeError(f"cannot combine MultiPoly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        acc = dict(self.terms)
        for e, c in other.terms.items():
            _add_into(acc, e, c)
        return MultiPoly._raw(self.variables, acc)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "MultiPoly":
        s = CScalar.coerce(s)
        if s.is_zero():
            return MultiPoly.zero(self.variables)
        return MultiPoly._raw(self.variables, {e: c * s for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CScalar)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        acc: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                _add_into(acc, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return MultiPoly._raw(self.variables, acc)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CScalar)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CScalar)):
            return self.scale(CScalar.coerce(other).inverse())
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = MultiPoly.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction, CScalar)):
            return self.terms == MultiPoly.constant(other, self.variables).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- calculus / substitution -----------------------------------------
    def diff(self, name: str, times: int = 1) -> "MultiPoly":
        i = self.variables.index(name)
        acc = {}
        for e, c in self.terms.items():
            k = e[i]
            if k < times:
                continue
            w = 1
            for j in range(times):
                w *= k - j
            ne = e[:i] + (k - times,) + e[i + 1:]
            acc[ne] = c * w
        return MultiPoly._raw(self.variables, acc)

    def conjugate(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, {e: c.conjugate() for e, c in self.terms.items()})

    def evaluate(self, values) -> CScalar:
        """Exact evaluation; ``values`` is a mapping name -> scalar or a sequence."""
        if isinstance(values, Mapping):
            values = [values[v] for v in self.variables]
        vals = [CScalar.coerce(v) for v in values]
        total = ZERO
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def substitute(self, name: str, value: "MultiPoly") -> "MultiPoly":
        """Replace variable ``name`` by the polynomial ``value`` (same variable list)."""
        self._check(value)
        i = self.variables.index(name)
        powers = {}
        out = MultiPoly.zero(self.variables)
        for e, c in self.terms.items():
            k = e[i]
            if k not in powers:
                powers[k] = value ** k
            rest = MultiPoly._raw(self.variables, {e[:i] + (0,) + e[i + 1:]: c})
            out = out + rest * powers[k]
        return out

    def rename(self, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        if len(variables) != len(self.variables):
            raise ValueError("rename must keep the number of variables")
        return MultiPoly._raw(variables, dict(self.terms))

    def embed(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express in a larger variable list containing all current variables."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.variables]
        acc = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for j, k in zip(idx, e):
                ne[j] = k
            acc[tuple(ne)] = c
        return MultiPoly._raw(variables, acc)

    def numeric(self):
        """Return a vectorised float/complex evaluator ``f(*arrays)``."""
        items = [(np.array(e), complex(c)) for e, c in self.terms.items()]
        real = self.is_real()

        def f(*args):
            args = [np.asarray(a, dtype=float) for a in args]
            shape = np.broadcast(*args).shape if args else ()
            out = np.zeros(shape, dtype=float if real else complex)
            for e, c in items:
                term = np.full(shape, c.real if real else c)
                for a, k in zip(args, e):
                    if k:
                        term = term * a ** int(k)
                out = out + term
            return out

        return f

    # -- division ---------------------------------------------------------
    def divmod_univariate(self, divisor: "MultiPoly", name: str) -> tuple["MultiPoly", "MultiPoly"]:
        """Long division by a divisor that depends only on ``name``.

        Other variables are treated as coefficients, so the remainder has
        degree in ``name`` strictly below the divisor's.
        """
        self._check(divisor)
        i = self.variables.index(name)
        for e in divisor.terms:
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError(f"divisor must depend on {name!r} only")
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        dd = divisor.degree_in(name)
        lead_e = tuple(dd if j == i else 0 for j in range(len(self.variables)))
        lead_inv = divisor.terms[lead_e].inverse()
        rem = dict(self.terms)
        quo: dict = {}
        while True:
            cands = [e for e in rem if e[i] >= dd]
            if not cands:
                break
            e = max(cands, key=lambda x: (x[i], x))
            c = rem[e] * lead_inv
            qe = e[:i] + (e[i] - dd,) + e[i + 1:]
            _add_into(quo, qe, c)
            for de, dc in divisor.terms.items():
                _add_into(rem, tuple(a + b for a, b in zip(qe, de)), -(c * dc))
        return MultiPoly._raw(self.variables, quo), MultiPoly._raw(self.variables, rem)

    def divmod_lex(self, divisor: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        """Multivariate division w.r.t. lex order.

        A single polynomial is a Groebner basis of its ideal, so the remainder
        is zero exactly when ``divisor`` divides ``self``.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead_e = max(divisor.terms)
        lead_inv = divisor.terms[lead_e].inverse()
        rem = dict(self.terms)
        quo: dict = {}
        out: dict = {}
        while rem:
            e = max(rem)
            c = rem[e]
            if all(a >= b for a, b in zip(e, lead_e)):
                qe = tuple(a - b for a, b in zip(e, lead_e))
                qc = c * lead_inv
                _add_into(quo, qe, qc)
                for de, dc in divisor.terms.items():
                    _add_into(rem, tuple(a + b for a, b in zip(qe, de)), -(qc * dc))
            else:
                del rem[e]
                out[e] = c
        return MultiPoly._raw(self.variables, quo), MultiPoly._raw(self.variables, out)

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        q, r = self.divmod_lex(divisor)
        if not r.is_zero():
            raise ArithmeticError(f"not divisible; remainder {r}")
        return q

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"MultiPoly({self.variables}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            cs = str(c)
            if c.im != 0 and c.re != 0:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")
