"""Finite-difference 1D Schroedinger eigenvalues and the numerical gauge map
from a Heun operator to a Schroedinger potential."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize
from scipy.linalg import eigh_tridiagonal

from .gl2qes.algebra import HeunCoeffs, heun_operator
from .gl2qes.sextic import SexticModel


class NonConfiningError(ValueError):
    pass


class GaugeMapError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on ``[-L, L]`` (parity ``none``) or ``[0, L]`` (``even``/``odd``)."""

    L: float
    N: int
    parity: str = "none"

    def __post_init__(self):
        if self.N < 64:
            raise ValueError("need at least 64 grid points")
        if self.L <= 0:
            raise ValueError("half-width must be positive")
        if self.parity not in ("none", "even", "odd"):
            raise ValueError(f"unknown parity {self.parity!r}")

    @property
    def h(self) -> float:
        return self.L / self.N if self.parity != "none" else 2 * self.L / self.N

    def points(self) -> np.ndarray:
        h = self.h
        if self.parity == "none":
            return -self.L + h * np.arange(1, self.N)
        # cell-centred, reflection ghost at -h/2
        return h * (np.arange(self.N) + 0.5)

    def refined(self) -> "GridSpec":
        return GridSpec(self.L, 2 * self.N, self.parity)

    @classmethod
    def for_sextic(cls, m: SexticModel, N: int = 1500, parity: str | None = None, tol=1e-14):
        """Box half-width chosen so that ``exp(-aL^4/4 - bL^2/2) < tol`` (with margin)."""
        a, b = float(m.a), float(m.b)
        target = -math.log(tol)
        if a > 0:
            # a u^2/4 + b u/2 = target in u = L^2
            u = (-b / 2 + math.sqrt(b * b / 4 + a * target)) / (a / 2)
        else:
            u = 2 * target / b
        L = 1.15 * math.sqrt(u) + 0.5
        if parity is None:
            parity = "even" if m.q == 0 else "odd"
        return cls(L, N, parity)


@dataclass
class PotentialSpec:
    """A potential evaluable on numpy arrays."""

    func: Callable[[np.ndarray], np.ndarray]
    label: str = "custom"
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    @classmethod
    def sextic(cls, m: SexticModel) -> "PotentialSpec":
        c6, c4, c2, c0 = (float(c) for c in m.v6)

        def v(x):
            x2 = x * x
            return ((c6 * x2 + c4) * x2 + c2) * x2 + c0

        return cls(v, "sextic", m.params())

    @classmethod
    def heun(cls, c: HeunCoeffs, n: int, branch: int = 1, t0: float = 0.0) -> "PotentialSpec":
        gm = HeunGauge(c, n, t0)

        def v(x):
            x = np.atleast_1d(x)
            return np.array([gm.potential(float(xi), branch) for xi in x])

        return cls(v, "heun", {"n": n, "branch": branch, "t0": t0})


def _tridiagonal(v: PotentialSpec, g: GridSpec):
    x = g.points()
    h = g.h
    diag = 2.0 / h ** 2 + v(x)
    off = np.full(len(x) - 1, -1.0 / h ** 2)
    if g.parity == "even":
        diag[0] -= 1.0 / h ** 2
    elif g.parity == "odd":
        diag[0] += 1.0 / h ** 2
    return diag, off


def _raw_eigen(v: PotentialSpec, g: GridSpec, count: int) -> np.ndarray:
    npts = len(g.points())
    if count > int(0.8 * npts):
        raise ValueError(f"{count} eigenvalues requested; only the lowest 80% of {npts} are reliable")
    diag, off = _tridiagonal(v, g)
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, count - 1))


def eigen_1d(v: PotentialSpec, g: GridSpec, count: int, richardson: bool = True) -> np.ndarray:
    """Lowest ``count`` Dirichlet eigenvalues of ``-d^2/dx^2 + V``.

    With ``richardson`` the grid is also solved at half spacing and the two
    second-order results are combined as ``(4 E(h/2) - E(h)) / 3``.
    """
    if count < 1:
        return np.array([])
    e = _raw_eigen(v, g, count)
    if richardson:
        e2 = _raw_eigen(v, g.refined(), count)
        e = (4 * e2 - e) / 3
    wall = float(v(np.array([g.L]))[0])
    if g.parity == "none":
        wall = min(wall, float(v(np.array([-g.L]))[0]))
    if wall <= e[-1]:
        raise NonConfiningError(
            f"V(L)={wall:.4g} does not exceed the highest requested energy {e[-1]:.4g}; enlarge L"
        )
    return e


def sextic_energies(m: SexticModel, count: int | None = None, N: int = 1500) -> np.ndarray:
    """Lowest energies in the parity sector ``q`` of the sextic model."""
    count = m.n + 1 if count is None else count
    return eigen_1d(PotentialSpec.sextic(m), GridSpec.for_sextic(m, N=N), count)


# ---------------------------------------------------------------------------
# numerical gauge map


class HeunGauge:
    """Schroedinger potential attached to ``h = -P4 d^2 + P3 d + P2``.

    ``x(t) = branch * int_{t0}^{t} dt / sqrt(P4)``; the phase derivative that
    removes the first-order term is ``A_t = P3/(2 P4) + P4'/(4 P4)``, giving
    ``V = P4 A_t^2 - P4 A_tt - A_t P4'/2 + P2``.
    """

    def __init__(self, c: HeunCoeffs, n: int, t0: float = 0.0):
        data = heun_operator(c, n)
        self.t0 = float(t0)

        def coeffs(poly):
            out = np.zeros(5)
            for e, v in poly.terms.items():
                out[e[0]] = float(v)
            return np.polynomial.Polynomial(out)

        self.p4 = coeffs(data.p4)
        self.p3 = coeffs(data.p3)
        self.p2 = coeffs(data.p2)
        self.dp4 = self.p4.deriv()
        self.ddp4 = self.p4.deriv(2)
        self.dp3 = self.p3.deriv()
        roots = self.p4.roots() if self.p4.degree() > 0 else np.array([])
        self._p4_roots = np.sort(roots[np.abs(roots.imag) < 1e-12].real)

    def _check_path(self, t: float):
        lo, hi = sorted((self.t0, t))
        for r in self._p4_roots:
            if lo < r < hi and not math.isclose(r, self.t0, abs_tol=1e-14):
                raise GaugeMapError(f"P4 vanishes at t={r:.6g} inside the path [{lo:.6g}, {hi:.6g}]")

    def _x_of_t(self, t: float) -> float:
        """``int_{t0}^{t} dt/sqrt(P4)`` via ``t = t0 + sgn s^2`` (smooth at a simple root of P4)."""
        if t == self.t0:
            return 0.0
        sgn = 1.0 if t > self.t0 else -1.0
        p4 = self.p4

        def integrand(s):
            val = p4(self.t0 + sgn * s * s)
            if val <= 0:
                if s == 0:
                    # simple root at the base point: integrable limit
                    d = sgn * self.dp4(self.t0)
                    if d <= 0:
                        raise GaugeMapError("P4 is not positive along the path")
                    return 2.0 / math.sqrt(d)
                raise GaugeMapError(f"P4 is not positive at t={self.t0 + sgn * s * s:.6g}")
            return 2.0 * s / math.sqrt(val)

        smax = math.sqrt(abs(t - self.t0))
        val, _ = integrate.quad(integrand, 0.0, smax, epsabs=1e-14, epsrel=1e-13, limit=200)
        return sgn * val

    def t_of_x(self, x: float, branch: int = 1) -> float:
        if branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        target = branch * x
        if target == 0:
            return self.t0
        sgn = 1.0 if target > 0 else -1.0
        # expanding bracket in s = sqrt|t - t0|
        s_hi = 1.0
        while True:
            t_hi = self.t0 + sgn * s_hi * s_hi
            self._check_path(t_hi)
            if self.p4(t_hi) <= 0:
                raise GaugeMapError(f"P4 is not positive at t={t_hi:.6g}")
            if abs(self._x_of_t(t_hi)) >= abs(target):
                break
            s_hi *= 2
            if s_hi > 1e6:
                raise GaugeMapError(f"could not bracket x={x}")

        def f(s):
            return abs(self._x_of_t(self.t0 + sgn * s * s)) - abs(target)

        try:
            s = optimize.brentq(f, 0.0, s_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        except ValueError as exc:
            raise GaugeMapError(f"inversion bracketing failed for x={x}") from exc
        return self.t0 + sgn * s * s

    def potential_at_t(self, t: float) -> float:
        p4 = self.p4(t)
        if p4 <= 0:
            raise GaugeMapError(f"P4 vanishes or is negative at t={t:.6g}")
        p3, dp3, dp4, ddp4 = self.p3(t), self.dp3(t), self.dp4(t), self.ddp4(t)
        at = p3 / (2 * p4) + dp4 / (4 * p4)
        att = (dp3 * p4 - p3 * dp4) / (2 * p4 ** 2) + (ddp4 * p4 - dp4 ** 2) / (4 * p4 ** 2)
        return p4 * at * at - p4 * att - at * dp4 / 2 + self.p2(t)

    def potential(self, x: float, branch: int = 1) -> float:
        return self.potential_at_t(self.t_of_x(x, branch))


def potential_from_heun(c: HeunCoeffs, n: int, x: float, branch: int = 1, t0: float = 0.0) -> float:
    """Numeric ``V(x)`` of the Schroedinger form of the Heun operator."""
    return HeunGauge(c, n, t0).potential(x, branch)


# ---------------------------------------------------------------------------


@dataclass
class SpectrumComparison:
    pairs: list  # (algebraic, numeric, relative error)
    max_rel_error: float
    rel_tol: float

    @property
    def ok(self) -> bool:
        return self.max_rel_error <= self.rel_tol

    def to_dict(self) -> dict:
        return {
            "pairs": [
                {"algebraic": float(a), "numeric": float(b), "rel_error": float(e)}
                for a, b, e in self.pairs
            ],
            "max_rel_error": float(self.max_rel_error),
            "rel_tol": self.rel_tol,
            "ok": self.ok,
        }


def relative_error(a: float, b: float) -> float:
    """``|a - b| / max(|a|, 1)``: relative for large values, absolute near zero."""
    return abs(a - b) / max(abs(a), 1.0)


def compare_spectra(algebraic, numeric, rel_tol: float = 1e-6) -> SpectrumComparison:
    """Greedy nearest matching of each algebraic eigenvalue to an unused numeric one."""
    free = [float(np.real(v)) for v in numeric]
    pairs = []
    for a in sorted(float(np.real(v)) for v in algebraic):
        if not free:
            pairs.append((a, math.nan, math.inf))
            continue
        j = min(range(len(free)), key=lambda k: abs(free[k] - a))
        b = free.pop(j)
        pairs.append((a, b, relative_error(a, b)))
    worst = max((e for _, _, e in pairs), default=0.0)
    return SpectrumComparison(pairs, worst, rel_tol)
