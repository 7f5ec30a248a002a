"""Gauge rotation of the rational A_N model to an operator in the invariants,
triangular spaces, the Euler-Cartan operator and the pi-integral."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..gl2qes.algebra import CommutantReport, verify_commutant
from ..polyops import CScalar, DiffOp, GradedSpace, MultiPoly, restrict_matrix, solve
from .roots import (
    AlgebraicityError,
    InvariantChart,
    RootSystemModel,
    invariants_rational,
    rational_hamiltonian,
)


class CharacteristicVectorError(LookupError):
    pass


class InvariantExpander:
    """Rewrites symmetric x-polynomials as polynomials in chart variables."""

    def __init__(self, chart: InvariantChart):
        self.chart = chart
        self.variables = chart.variables
        self._powers: dict[tuple, MultiPoly] = {}

    def expand(self, p: tuple) -> MultiPoly:
        """``t^p`` as an x-polynomial."""
        if p not in self._powers:
            out = MultiPoly.constant(1, self.chart.model.coords)
            for t, k in zip(self.chart.invariants, p):
                if k:
                    out = out * t ** k
            self._powers[p] = out
        return self._powers[p]

    def candidates(self, degree: int) -> list[tuple]:
        ranges = [range(degree // a + 1) for a in self.chart.degrees]
        return [p for p in itertools.product(*ranges) if sum(a * k for a, k in zip(self.chart.degrees, p)) <= degree]

    def to_chart(self, g: MultiPoly) -> MultiPoly:
        if g.is_zero():
            return MultiPoly.zero(self.variables)
        cands = self.candidates(g.degree())
        cols = [self.expand(p) for p in cands]
        rows = set(g.terms)
        for c in cols:
            rows.update(c.terms)
        rows = sorted(rows)
        mat = [[c.coeff(r) for c in cols] for r in rows]
        rhs = [g.coeff(r) for r in rows]
        try:
            sol = solve(mat, rhs)
        except ArithmeticError as exc:
            raise AlgebraicityError("polynomial is not expressible in the invariants", g) from exc
        return MultiPoly(self.variables, {p: c for p, c in zip(cands, sol) if not c.is_zero()})


class GaugedAction:
    """``f -> Psi0^-1 (H - E0) Psi0 f`` on polynomials, with exact pole cancellation."""

    def __init__(self, rs: RootSystemModel):
        self.model = rs
        self.forms = [rs.root_form(a) for a in rs.positive_roots]

    def __call__(self, f: MultiPoly) -> MultiPoly:
        m = self.model
        grads = [f.diff(v) for v in m.coords]
        out = MultiPoly.zero(m.coords)
        for v in m.coords:
            out = out - f.diff(v, 2) * CScalar.coerce(1) / 2
        for alpha, form in zip(m.positive_roots, self.forms):
            num = MultiPoly.zero(m.coords)
            for c, g in zip(alpha, grads):
                if c:
                    num = num + g * c
            if num.is_zero():
                continue
            q, r = num.divmod_lex(form)
            if not r.is_zero():
                raise AlgebraicityError(f"root derivative not divisible by root form {alpha}", r)
            out = out - q * m.nu
        for y, g in zip(m.centered, grads):
            out = out + y * g * m.omega
        return out


@dataclass
class AlgebraicOperator:
    model: RootSystemModel
    chart: InvariantChart
    h: DiffOp
    E0: CScalar
    algebraicity_witness: dict = field(default_factory=dict)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.h.variables

    def annihilates_constants(self) -> bool:
        return self.h.apply(MultiPoly.constant(1, self.variables)).is_zero()


def gauge_rotate(rs: RootSystemModel, chart: InvariantChart | None = None, held_out_degree: int = 3) -> AlgebraicOperator:
    """Reconstruct ``h = Psi0^-1 (H - E0) Psi0`` in the chart variables.

    First- and second-order coefficients come from probing with ``t_a`` and
    ``t_a t_b``; all monomials of total degree ``held_out_degree`` are then
    used as fresh checks.
    """
    chart = invariants_rational(rs) if chart is None else chart
    E0 = rational_hamiltonian(rs).ground_energy()
    act = GaugedAction(rs)
    ex = InvariantExpander(chart)
    tv = chart.variables
    d = len(tv)

    def image(p):
        return ex.to_chart(act(ex.expand(p)))

    unit = [tuple(int(i == a) for i in range(d)) for a in range(d)]
    tvars = [MultiPoly.var(v, tv) for v in tv]
    first = [image(u) for u in unit]
    coeffs: dict[tuple, MultiPoly] = {}
    for a in range(d):
        if not first[a].is_zero():
            coeffs[unit[a]] = first[a]
    pairs = []
    for a in range(d):
        for b in range(a, d):
            p = tuple(x + y for x, y in zip(unit[a], unit[b]))
            pairs.append(p)
            img = image(p) - tvars[a] * first[b] - tvars[b] * first[a]
            if a == b:
                img = img * CScalar.coerce(1) / 2
            if not img.is_zero():
                coeffs[p] = img
    h = DiffOp.from_coefficients(coeffs, tv)

    checked = []
    for p in itertools.product(range(held_out_degree + 1), repeat=d):
        if sum(p) != held_out_degree:
            continue
        ok = h.apply(MultiPoly.monomial(p, tv)) == image(p)
        checked.append((p, ok))
        if not ok:
            raise AlgebraicityError(f"reconstructed operator disagrees on held-out monomial {p}", p)
    witness = {
        "coefficients_polynomial": True,
        "probes": [list(u) for u in unit] + [list(p) for p in pairs],
        "held_out": [list(p) for p, _ in checked],
        "held_out_ok": all(ok for _, ok in checked),
    }
    return AlgebraicOperator(rs, chart, h, E0, witness)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriangularSpace:
    space: GradedSpace

    @classmethod
    def build(cls, n: int, f, variables) -> "TriangularSpace":
        return cls(GradedSpace(n, tuple(f), tuple(variables)))

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def f(self) -> tuple[int, ...]:
        return self.space.f

    @property
    def variables(self) -> tuple[str, ...]:
        return self.space.variables


def _as_graded(space) -> GradedSpace:
    return space.space if isinstance(space, TriangularSpace) else space


def euler_cartan(space) -> DiffOp:
    """``sum_i f_i t_i d/dt_i - n``."""
    s = _as_graded(space)
    v = s.variables
    out = DiffOp.scalar(-s.n, v)
    for w, name in zip(s.f, v):
        out = out + DiffOp.var(name, v) * DiffOp.derivative(name, v) * w
    return out


def cs_pi_integral(space) -> DiffOp:
    """``prod_{j=0..n} (J0_n + j)``; the factors commute."""
    s = _as_graded(space)
    j0 = euler_cartan(s)
    out = j0
    for j in range(1, s.n + 1):
        out = out * (j0 + j)
    return out


def _operator(h) -> DiffOp:
    return h.h if isinstance(h, AlgebraicOperator) else h


def detect_characteristic_vector(h, n_probe: int = 4, max_component: int = 4) -> tuple[int, ...]:
    """Smallest non-decreasing ``f`` (by sum, then lexicographically) whose
    triangular spaces ``n = 0..max(n_probe, max f)`` are all preserved by ``h``."""
    op = _operator(h)
    v = op.variables
    d = len(v)
    cands = [f for f in itertools.combinations_with_replacement(range(1, max_component + 1), d)]
    cands.sort(key=lambda f: (sum(f), f))
    for f in cands:
        # spaces with n < max(f) miss some variable entirely, so probe at least that far
        top = max(n_probe, max(f))
        if all(restrict_matrix(op, GradedSpace(n, f, v)).preserves for n in range(top + 1)):
            return f
    raise CharacteristicVectorError(f"no characteristic vector with entries <= {max_component} found")


def verify_cs_commutant(h, space) -> CommutantReport:
    s = _as_graded(space)
    return verify_commutant(_operator(h), cs_pi_integral(s), s)


def build_rational_model(rank: int, nu, omega, n_max: int | None = None) -> dict:
    """Full rational pipeline: gauge rotation, ``f`` detection, commutant checks."""
    rs = RootSystemModel(rank, nu, omega)
    alg = gauge_rotate(rs)
    f = detect_characteristic_vector(alg, n_probe=4)
    n_max = (4 if rank == 1 else 3) if n_max is None else n_max
    reports = []
    for n in range(n_max + 1):
        sp = TriangularSpace.build(n, f, alg.variables)
        rep = verify_cs_commutant(alg, sp)
        reports.append({"n": n, "dim": rep.checked, "exact_zero": rep.exact_zero, "preserves": restrict_matrix(alg.h, sp.space).preserves})
    return {"model": rs, "operator": alg, "f": f, "reports": reports}


def model_to_json(result: dict) -> dict:
    """``{family, rank, nu, omega, invariants, h_terms, E0, f, reports}`` for a rational model."""
    from ..polyops import rational_str, to_json

    rs: RootSystemModel = result["model"]
    alg: AlgebraicOperator = result["operator"]
    return {
        "family": rs.family,
        "rank": rs.rank,
        "nu": rational_str(rs.nu),
        "omega": rational_str(rs.omega),
        "invariants": [
            {"name": name, "degree": deg, "poly": to_json(t)}
            for name, deg, t in zip(alg.chart.variables, alg.chart.degrees, alg.chart.invariants)
        ],
        "h_terms": to_json(alg.h)["terms"],
        "h_variables": list(alg.variables),
        "E0": dict(zip(("re", "im"), alg.E0.parts())),
        "f": list(result["f"]),
        "algebraicity_witness": alg.algebraicity_witness,
        "reports": result["reports"],
    }
