import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qespi.gl2qes import gl2_generators, pi_integral_gl2
from qespi.polyops import (
    I,
    CScalar,
    DiffOp,
    GradedSpace,
    MultiPoly,
    annihilates,
    charpoly,
    commutator,
    from_json,
    nullspace,
    op_apply,
    op_commutator,
    op_compose,
    phase_function,
    phase_var,
    poisson_bracket,
    product,
    rational_str,
    restrict_matrix,
    solve,
    to_json,
)

T = ("t",)
XY = ("x", "y")
t = DiffOp.var("t", T)
d = DiffOp.derivative("t", T)


def mono(k, coeff=1):
    return MultiPoly.monomial((k,), T, coeff)


# -- scalars --------------------------------------------------------------

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(CScalar, fracs, fracs)


@given(scalars, scalars, scalars)
def test_scalar_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inverse() == 1


def test_scalar_normalises_integers():
    z = CScalar(Fraction(6, 3), Fraction(0))
    assert z == 2 and hash(z) == hash(2)
    assert (I * I) == -1
    assert rational_str(Fraction(-3, 4)) == "-3/4"
    assert CScalar(Fraction(1, 2), 3).parts() == ("1/2", "3/1")


# -- polynomials ------------------------------------------------------------


def random_poly(rng, variables, deg=3, terms=4, complex_coeffs=False):
    out = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, deg) for _ in variables)
        im = Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if complex_coeffs else 0
        out[e] = CScalar(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), im)
    return MultiPoly(variables, out)


def random_op(rng, variables, order=2, deg=2, terms=4):
    out = {}
    for _ in range(terms):
        m = tuple(rng.randint(0, deg) for _ in variables)
        dd = tuple(rng.randint(0, order) for _ in variables)
        out[(m, dd)] = CScalar(rng.randint(-4, 4), rng.randint(-1, 1))
    return DiffOp(variables, out)


def test_polynomial_ring_identities():
    rng = random.Random(11)
    for _ in range(30):
        a, b, c = (random_poly(rng, XY, complex_coeffs=True) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a * b).diff("x") == a.diff("x") * b + a * b.diff("x")


def test_exact_division_roundtrip():
    rng = random.Random(3)
    for _ in range(20):
        a = random_poly(rng, XY)
        b = random_poly(rng, XY, deg=2, terms=2)
        if b.is_zero():
            continue
        assert (a * b).exact_div(b) == a
    with pytest.raises(ArithmeticError):
        MultiPoly.var("x", XY).exact_div(MultiPoly.var("y", XY))


def test_univariate_division():
    p = mono(3) - mono(0)
    q, r = p.divmod_univariate(mono(1) - mono(0), "t")
    assert r.is_zero() and q == mono(2) + mono(1) + mono(0)


def test_numeric_evaluator_matches_exact():
    p = MultiPoly(XY, {(2, 1): Fraction(1, 3), (0, 0): 2, (1, 3): -1})
    f = p.numeric()
    assert math.isclose(f(1.5, -2.0), float(p.evaluate([Fraction(3, 2), -2])))


# -- operators -----------------------------------------------------------------


def test_compose_examples():
    assert op_compose(d, t) == t * d + 1
    assert op_compose(DiffOp.identity(T), t * d * d) == t * d * d
    assert op_compose(t * t * d, d * d) == DiffOp(T, {((2,), (3,)): 1})


def test_commutator_examples():
    assert op_commutator(d, t) == DiffOp.identity(T)
    a = t * t * d - 3 * t
    assert op_commutator(a, a).is_zero()
    g = gl2_generators(3)
    assert commutator(g.jm, g.jp) == 2 * g.j0 + 3 * g.t0


def test_apply_examples():
    n = 4
    assert op_apply(d ** (n + 1), mono(n)).is_zero()
    for k in range(6):
        assert op_apply(t * d - n, mono(k)) == mono(k, k - n)
    prod = product([t * d - n + j for j in range(n + 1)])
    assert op_apply(prod, mono(n + 1)) == mono(n + 1, math.factorial(n + 1))


def test_operator_algebra_properties():
    rng = random.Random(5)
    for _ in range(25):
        a, b, c = (random_op(rng, XY) for _ in range(3))
        f = random_poly(rng, XY, deg=4)
        assert (a * b) * c == a * (b * c)
        assert (a * b).apply(f) == a.apply(b.apply(f))
        jac = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
        assert jac.is_zero()


def test_normal_order_against_leibniz_closed_form():
    # d^b t^g = sum_k C(b,k) g!/(g-k)! t^(g-k) d^(b-k)
    for b in range(5):
        for g in range(5):
            lhs = d ** b * t ** g if g else d ** b
            terms = {}
            for k in range(min(b, g) + 1):
                terms[((g - k,), (b - k,))] = math.comb(b, k) * math.perm(g, k)
            assert lhs == DiffOp(T, terms)


# -- spaces ---------------------------------------------------------------


def test_restrict_matrix_examples():
    r = restrict_matrix(d, GradedSpace(2))
    assert r.preserves
    assert r.matrix == [[0, 1, 0], [0, 0, 2], [0, 0, 0]]
    jp1 = gl2_generators(1).jp
    r = restrict_matrix(jp1, GradedSpace(1))
    assert r.preserves
    assert r.matrix == [[0, 0], [-1, 0]]
    r = restrict_matrix(d, GradedSpace(0))
    assert r.preserves and r.matrix == [[0]]
    assert not restrict_matrix(t, GradedSpace(2)).preserves


def test_annihilates_examples():
    for n in range(5):
        assert annihilates(d ** (n + 1), GradedSpace(n))
        assert annihilates(pi_integral_gl2(n, n), GradedSpace(n))
    assert not annihilates(d, GradedSpace(1))


def test_graded_space_basis():
    s = GradedSpace(3, (1, 2))
    assert s.basis() == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0)]
    with pytest.raises(ValueError):
        GradedSpace(2, (2, 1))


# -- linear algebra -----------------------------------------------------------


def test_charpoly_and_solve():
    m = [[0, -2], [-4, 0]]
    assert charpoly(m) == [-8, 0, 1]
    x = solve([[2, 1], [1, 3]], [3, 5])
    assert x == [Fraction(4, 5), Fraction(7, 5)]
    assert len(nullspace([[1, 1], [2, 2]])) == 1


# -- brackets ---------------------------------------------------------------


def test_poisson_examples():
    x, p = phase_var("x"), phase_var("p")
    assert poisson_bracket(x, p) == phase_function(MultiPoly.constant(1, ("x", "p")))
    assert poisson_bracket(x * p, x * p).is_zero()
    assert poisson_bracket(p * p, x * x) == -4 * x * p


def test_poisson_jacobi_and_leibniz():
    rng = random.Random(9)
    for _ in range(20):
        f, g, h = (random_poly(rng, ("x", "p"), complex_coeffs=True) for _ in range(3))
        jac = (
            poisson_bracket(f, poisson_bracket(g, h))
            + poisson_bracket(g, poisson_bracket(h, f))
            + poisson_bracket(h, poisson_bracket(f, g))
        )
        assert jac.is_zero()
        assert poisson_bracket(f, g * h) == poisson_bracket(f, g) * h + g * poisson_bracket(f, h)


# -- serialisation --------------------------------------------------------------


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_json_roundtrip(seed):
    rng = random.Random(seed)
    op = random_op(rng, XY)
    poly = random_poly(rng, XY, complex_coeffs=True)
    assert from_json(to_json(op)) == op
    assert from_json(to_json(poly)) == poly
