"""Classical limit of the sextic model: phase-space functions, bracket
certificates at equilibria, and symplectic trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gl2qes.sextic import SexticModel
from .polyops import CScalar, I, MultiPoly, PHASE_VARIABLES, poisson_bracket

XP = PHASE_VARIABLES


@dataclass(frozen=True)
class ClassicalModel:
    source: SexticModel
    H6: MultiPoly
    In: MultiPoly
    factors: tuple  # the n+1 linear-in-p factors of In (before 2^-(n+1))

    @property
    def potential(self) -> MultiPoly:
        return self.H6 - MultiPoly.var("p", XP) ** 2

    @property
    def dV(self) -> MultiPoly:
        return self.potential.diff("x")


def classical_functions(m: SexticModel) -> ClassicalModel:
    """``H6 = p^2 + V6(x)`` and ``In = 2^-(n+1) prod_j (i x p + a x^4 + b x^2 - q - 2n + 2j)``."""
    x = MultiPoly.var("x", XP)
    p = MultiPoly.var("p", XP)
    c6, c4, c2, c0 = m.v6
    V = c6 * x ** 6 + c4 * x ** 4 + c2 * x ** 2 + c0
    H = p * p + V
    base = x * p * I + m.a * x ** 4 + m.b * x ** 2
    factors = tuple(base + (-m.q - 2 * m.n + 2 * j) for j in range(m.n + 1))
    In = MultiPoly.constant(Fraction(1, 2 ** (m.n + 1)), XP)
    for f in factors:
        In = In * f
    return ClassicalModel(m, H, In, factors)


def origin_value_closed_form(n: int, q: int) -> Fraction:
    """``In(0,0)``: ``(-1)^(n+1) prod_j (q/2 + n - j)`` at ``q = 1``, zero at ``q = 0``."""
    if q == 0:
        return Fraction(0)
    out = Fraction((-1) ** (n + 1))
    for j in range(n + 1):
        out *= Fraction(q, 2) + n - j
    return out


# ---------------------------------------------------------------------------
# special points


@dataclass(frozen=True)
class QuadraticSurd:
    """``r + s*sqrt(d)`` with rational ``r, s, d`` (``d >= 0``)."""

    r: Fraction
    s: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    def is_rational(self) -> bool:
        return self.s == 0 or self.d == 0 or _rational_sqrt(self.d) is not None

    def exact(self) -> Fraction:
        if self.s == 0 or self.d == 0:
            return self.r
        root = _rational_sqrt(self.d)
        if root is None:
            raise ValueError("irrational surd")
        return self.r + self.s * root

    def __float__(self):
        return float(self.r) + float(self.s) * math.sqrt(float(self.d))


def _rational_sqrt(v: Fraction):
    v = Fraction(v)
    if v < 0:
        return None
    rn, rd = math.isqrt(v.numerator), math.isqrt(v.denominator)
    if rn * rn == v.numerator and rd * rd == v.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class SpecialPoint:
    """Rest point ``p = 0`` at ``x = sign * sqrt(u)``."""

    u: QuadraticSurd
    sign: int

    @property
    def x(self) -> float:
        return self.sign * math.sqrt(max(float(self.u), 0.0))

    @property
    def p(self) -> float:
        return 0.0


def special_points(cm: ClassicalModel) -> list[SpecialPoint]:
    """``x = 0`` plus real roots of ``V6'(x)/x = 6a^2 u^2 + 8ab u + 2(b^2 - (4n+3+2q)a)`` in ``u = x^2``."""
    m = cm.source
    A = 6 * m.a * m.a
    B = 8 * m.a * m.b
    C = 2 * (m.b * m.b - (4 * m.n + 3 + 2 * m.q) * m.a)
    pts = [SpecialPoint(QuadraticSurd(Fraction(0)), 1)]
    us: list[QuadraticSurd] = []
    if A != 0:
        disc = B * B - 4 * A * C
        if disc >= 0:
            for s in (1, -1) if disc > 0 else (1,):
                us.append(QuadraticSurd(-B / (2 * A), Fraction(s, 2) / A, disc))
    elif B != 0:
        us.append(QuadraticSurd(-C / B))
    for u in us:
        if float(u) > 0:
            pts.extend(SpecialPoint(u, s) for s in (1, -1))
    return pts


# ---------------------------------------------------------------------------
# bracket certificate


@dataclass
class BracketCertificate:
    bracket: MultiPoly  # B = {H6, In}
    Q: MultiPoly  # B = -2p dIn/dx - x V6'(x) Q
    residual: MultiPoly
    p_free_remainder: MultiPoly  # remainder of B|_{p=0} / (-x V6')

    @property
    def ok(self) -> bool:
        return self.residual.is_zero() and self.p_free_remainder.is_zero()

    def to_dict(self) -> dict:
        from .polyops import to_json

        return {"Q_terms": to_json(self.Q)["terms"], "residual_zero": self.ok}


class CertificateError(ArithmeticError):
    def __init__(self, msg, remainder):
        super().__init__(msg)
        self.remainder = remainder


def restrict_p0(f: MultiPoly) -> MultiPoly:
    return MultiPoly(XP, {e: c for e, c in f.terms.items() if e[1] == 0})


def bracket_vanishing_certificate(cm: ClassicalModel, In: MultiPoly | None = None) -> BracketCertificate:
    """Exact factorisation ``{H6, In} = -2p dIn/dx - x V6'(x) Q(p, x)``.

    The bracket convention is ``{f, g} = f_x g_p - f_p g_x``.  ``Q`` is
    obtained by exact division of ``B + 2p In_x`` by ``-x V6'``; on ``p = 0``
    this reduces to ``B|_{p=0} = -x V6' Q(0, x)``.
    """
    In = cm.In if In is None else In
    x = MultiPoly.var("x", XP)
    p = MultiPoly.var("p", XP)
    B = poisson_bracket(cm.H6, In)
    divisor = -(x * cm.dV)
    if divisor.is_zero():
        # V6 constant: bracket is pure kinetic
        Q = MultiPoly.zero(XP)
        return BracketCertificate(B, Q, B + 2 * p * In.diff("x"), restrict_p0(B))
    Q, rem = (B + 2 * p * In.diff("x")).divmod_univariate(divisor, "x")
    if not rem.is_zero():
        raise CertificateError("bracket is not divisible by x V6'(x)", rem)
    _, rem0 = restrict_p0(B).divmod_univariate(divisor, "x")
    residual = B - (-2 * p * In.diff("x") + divisor * Q)
    return BracketCertificate(B, Q, residual, rem0)


def _surd_mul(a, b, d):
    return (a[0] * b[0] + a[1] * b[1] * d, a[0] * b[1] + a[1] * b[0])


def _eval_even_in_surd(poly: MultiPoly, u: QuadraticSurd):
    """Evaluate an even polynomial in x at ``x^2 = u`` in ``Q(sqrt d)``; returns
    ``(re, im)`` pairs ``(rational part, sqrt-d part)``."""
    acc_re, acc_im = (Fraction(0), Fraction(0)), (Fraction(0), Fraction(0))
    base = (Fraction(u.r), Fraction(u.s))
    powers = {0: (Fraction(1), Fraction(0))}
    for e, c in poly.terms.items():
        k = e[0] // 2
        for j in range(max(powers) + 1, k + 1):
            powers[j] = _surd_mul(powers[j - 1], base, u.d)
        pw = powers[k]
        cr, ci = Fraction(c.re), Fraction(c.im)
        acc_re = (acc_re[0] + cr * pw[0], acc_re[1] + cr * pw[1])
        acc_im = (acc_im[0] + ci * pw[0], acc_im[1] + ci * pw[1])
    return acc_re, acc_im


def bracket_at_special_point(cm: ClassicalModel, pt: SpecialPoint, bracket: MultiPoly | None = None):
    """Value of ``{H6, In}`` at ``(x*, 0)``.

    ``B|_{p=0}`` is even in x, so it is evaluated exactly at ``x*^2 = u`` in
    ``Q(sqrt d)``; the result is a ``CScalar`` when that value is rational and
    a complex float otherwise.
    """
    B = poisson_bracket(cm.H6, cm.In) if bracket is None else bracket
    B0 = restrict_p0(B)
    if any(e[0] % 2 for e in B0.terms):
        return complex(B0.numeric()(pt.x, 0.0))
    (rr, rs), (ir, is_) = _eval_even_in_surd(B0, pt.u)
    d = pt.u.d
    root = _rational_sqrt(d) if d else Fraction(0)
    if root is not None:
        return CScalar(rr + rs * root, ir + is_ * root)
    if rs == 0 and is_ == 0:
        return CScalar(rr, ir)
    sq = math.sqrt(float(d))
    return complex(float(rr) + float(rs) * sq, float(ir) + float(is_) * sq)


# ---------------------------------------------------------------------------
# dynamics

# 4th-order compositions of Stoermer-Verlet (step weights)
_CBRT2 = 2.0 ** (1.0 / 3.0)
_W1 = 1.0 / (2.0 - _CBRT2)
YOSHIDA4 = (_W1, 1.0 - 2.0 * _W1, _W1)
_P5 = 1.0 / (4.0 - 4.0 ** (1.0 / 3.0))
SUZUKI4 = (_P5, _P5, 1.0 - 4.0 * _P5, _P5, _P5)
COMPOSITIONS = {"suzuki4": SUZUKI4, "yoshida4": YOSHIDA4}


@dataclass
class Trajectory:
    time: np.ndarray
    x: np.ndarray
    p: np.ndarray
    H: np.ndarray
    I: np.ndarray  # complex
    meta: dict = field(default_factory=dict)

    @property
    def aborted(self) -> bool:
        return bool(self.meta.get("aborted", False))

    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.H - self.H[0])))

    def integral_drift(self) -> float:
        return float(np.max(np.abs(self.I - self.I[0])))

    def rows(self):
        for t, x, p, h, i in zip(self.time, self.x, self.p, self.H, self.I):
            yield (t, x, p, h, i.real, i.imag)


def integrate(
    cm: ClassicalModel,
    x0: float,
    p0: float,
    T: float,
    dt: float,
    record_every: int = 1,
    bound: float = 1e3,
    method: str = "suzuki4",
) -> Trajectory:
    """Flow of ``H6 = p^2 + V6`` (``dx/dt = 2p``, ``dp/dt = -V6'``).

    Fixed-step 4th-order symmetric composition of Stoermer-Verlet.  The
    5-stage Suzuki weights have a far smaller error constant than the
    3-stage triple jump at the same order.
    """
    if T <= 0 or dt <= 0:
        raise ValueError("T and dt must be positive")
    weights = COMPOSITIONS[method]
    steps = int(round(T / dt))
    if steps < 1:
        raise ValueError("T must cover at least one step")
    c6, c4, c2, _ = (float(c) for c in cm.source.v6)

    def force(x):
        x2 = x * x
        return -x * ((6 * c6 * x2 + 4 * c4) * x2 + 2 * c2)

    x, p = float(x0), float(p0)
    ts, xs, ps = [0.0], [x], [p]
    aborted = False
    for k in range(1, steps + 1):
        for w in weights:
            h = w * dt
            p += 0.5 * h * force(x)
            x += h * 2.0 * p
            p += 0.5 * h * force(x)
        if not math.isfinite(x) or abs(x) > bound:
            aborted = True
            ts.append(k * dt)
            xs.append(x)
            ps.append(p)
            break
        if k % record_every == 0 or k == steps:
            ts.append(k * dt)
            xs.append(x)
            ps.append(p)
    xs_a, ps_a = np.array(xs), np.array(ps)
    Hf = cm.H6.numeric()
    If = cm.In.numeric()
    with np.errstate(all="ignore"):
        H = np.asarray(Hf(xs_a, ps_a), dtype=float)
        Ival = np.asarray(If(xs_a, ps_a), dtype=complex)
    meta = {"dt": dt, "T": T, "method": method, "steps": steps, "aborted": aborted, "bound": bound}
    return Trajectory(np.array(ts), xs_a, ps_a, H, Ival, meta)
