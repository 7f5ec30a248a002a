import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from qespi.gl2qes import (
    HeunCoeffs,
    QuasiPoly,
    apply_to_quasipoly,
    flag_preservation_report,
    gauge_intertwining_witness,
    gl2_generators,
    h2_operator,
    hamiltonian_x,
    heun_operator,
    pi_integral_gl2,
    poly_space,
    qes_block_spectrum,
    quasipoly_basis,
    sextic_model,
    sextic_pi_integral_quantum,
    verify_commutant,
)
from qespi.polyops import DiffOp, GradedSpace, MultiPoly, commutator, nullspace, restrict_matrix

T = ("t",)
X = ("x",)
d = DiffOp.derivative("t", T)
t = DiffOp.var("t", T)


def test_generators():
    g = gl2_generators(2)
    assert g.j0 == t * d - 2
    assert commutator(g.j0, g.jm) == -g.jm
    for n in range(5):
        gn = gl2_generators(n)
        assert gn.jp.apply(MultiPoly.monomial((n,), T)).is_zero()


def test_pi_integral_examples():
    assert pi_integral_gl2(2, -1) == d ** 3
    assert pi_integral_gl2(1, 1).apply(MultiPoly.var("t", T)).is_zero()
    assert pi_integral_gl2(1, 0) == t * d * d
    with pytest.raises(ValueError):
        pi_integral_gl2(2, 3)


def test_pi_integral_grading():
    for n in range(6):
        for k in range(-1, n + 1):
            assert pi_integral_gl2(n, k).gradings() == {-(n - k)}


def test_heun_examples():
    zero = heun_operator(HeunCoeffs(), 3)
    assert zero.h.is_zero()
    only_pp = heun_operator(HeunCoeffs(c_pp=1), 1)
    jp = gl2_generators(1).jp
    assert only_pp.h == jp * jp
    assert only_pp.p4 == -MultiPoly.monomial((4,), T)


def test_sextic_heun_coefficients_reproduce_h2p():
    for n, q, a, b in [(0, 0, 1, 0), (1, 0, 1, 0), (2, 1, Fraction(1, 2), 3), (3, 1, 2, -1)]:
        m = sextic_model(n, q, a, b)
        assert heun_operator(m.heun, n).h == m.h2p


def test_listed_sextic_coefficients_differ_by_lowering_term():
    # c_m = -2(n+1+2q), c = 2bn in place of -2(2n+1+2q), 4bn: off by 2n (d - b)
    for n, q, a, b in [(1, 0, 1, 0), (2, 1, 1, 2), (3, 0, Fraction(1, 3), -1)]:
        m = sextic_model(n, q, a, b)
        listed = HeunCoeffs(c_0m=-4, c_p=4 * Fraction(a), c_0=4 * Fraction(b), c_m=-2 * (n + 1 + 2 * q), c=2 * b * n)
        diff = h2_operator(listed, n) - m.h2p
        assert diff == 2 * n * (d - b)


def test_block_spectrum_examples():
    m = sextic_model(0, 0, 1, 0)
    s = qes_block_spectrum(m.h2p, 0)
    assert s.eigenvalues[0] == 0
    m = sextic_model(1, 0, 1, 0)
    s = qes_block_spectrum(m.h2p, 1)
    assert s.matrix == [[0, -2], [-4, 0]]
    assert s.char_poly == [-8, 0, 1]
    assert np.allclose(s.eigenvalues.real, [-2 * math.sqrt(2), 2 * math.sqrt(2)], atol=1e-12)
    s = qes_block_spectrum(d, 2)
    assert np.allclose(s.eigenvalues, 0)
    assert s.char_poly == [0, 0, 0, 1]


def test_sextic_potential_examples():
    m = sextic_model(1, 0, 1, 0)
    assert m.v6 == (1, 0, -7, 0)
    m = sextic_model(0, 1, 0, 1)
    assert m.v6 == (0, 0, 1, -3)
    with pytest.raises(ValueError):
        sextic_model(1, 0, 0, 0)
    with pytest.raises(ValueError):
        sextic_model(1, 2, 1, 0)


def test_quantum_pi_integral_examples():
    a, b = Fraction(2), Fraction(-1, 3)
    m = sextic_model(0, 1, a, b)
    ipi = sextic_pi_integral_quantum(m)
    x = MultiPoly.var("x", X)
    expected = (DiffOp.var("x", X) * DiffOp.derivative("x", X) + DiffOp.multiplication(a * x ** 4 + b * x ** 2) - 1) * Fraction(1, 2)
    assert ipi.expanded == expected
    psi = quasipoly_basis(m)[0]
    assert apply_to_quasipoly(ipi.expanded, psi).is_zero()
    for n in range(4):
        mm = sextic_model(n, n % 2, 1, 1)
        ip = sextic_pi_integral_quantum(mm)
        assert ip.factored_product() == ip.expanded


def test_quasipoly_examples():
    f = QuasiPoly.from_t(0, 1, 0, MultiPoly.constant(1, T))
    assert f.dx().poly == -MultiPoly.monomial((3,), X)
    g = QuasiPoly.from_t(1, 1, 0, MultiPoly.constant(1, T))
    assert g.times(MultiPoly.monomial((2,), X)).poly == MultiPoly.monomial((3,), X)
    assert g.parity == 1
    m = sextic_model(0, 0, 1, 2)
    assert apply_to_quasipoly(hamiltonian_x(m), quasipoly_basis(m)[0]).is_zero()


@pytest.mark.parametrize("n,q,a,b", [(0, 0, 1, 0), (1, 1, Fraction(1, 2), 2), (2, 0, 3, -1)])
def test_hamiltonian_intertwining_sympy_oracle(n, q, a, b):
    """Symbolic -psi'' + V psi for psi = x^q t^k e^w versus the t-side operator."""
    m = sextic_model(n, q, a, b)
    xs = sp.Symbol("x")
    ar, br = sp.Rational(a), sp.Rational(b)
    V = ar ** 2 * xs ** 6 + 2 * ar * br * xs ** 4 + (br ** 2 - (4 * n + 3 + 2 * q) * ar) * xs ** 2 - br * (1 + 2 * q)
    w = sp.exp(-ar * xs ** 4 / 4 - br * xs ** 2 / 2)
    for k in range(n + 2):
        psi = xs ** q * xs ** (2 * k) * w
        lhs = sp.expand(sp.simplify((-sp.diff(psi, xs, 2) + V * psi) / w))
        hk = m.h2p.apply(MultiPoly.monomial((k,), T))
        rhs = sum(sp.Rational(c.real_fraction()) * xs ** (q + 2 * e[0]) for e, c in hk.terms.items())
        assert sp.expand(lhs - rhs) == 0
    assert gauge_intertwining_witness(m) is None


def test_exact_eigenfunctions_harmonic_limit():
    # a = 0: the block is triangular, so eigenvectors are exact rational polynomials
    for q in (0, 1):
        b = Fraction(3, 2)
        m = sextic_model(3, q, 0, b)
        res = restrict_matrix(m.h2p, poly_space(3))
        for k in range(4):
            lam = 4 * b * k
            shifted = [[v - (lam if i == j else 0) for j, v in enumerate(row)] for i, row in enumerate(res.matrix)]
            (vec,) = nullspace(shifted)
            p = MultiPoly(T, {(i,): c for i, c in enumerate(vec) if not c.is_zero()})
            psi = QuasiPoly.from_t(q, 0, b, p)
            out = apply_to_quasipoly(hamiltonian_x(m), psi) - psi.scale(lam)
            assert out.is_zero()


def test_commutant_examples():
    rng = random.Random(1)
    for n in range(4):
        h = h2_operator(HeunCoeffs.random(rng), n)
        for k in range(-1, n + 1):
            assert verify_commutant(h, pi_integral_gl2(n, k), poly_space(n)).exact_zero
    h = h2_operator(HeunCoeffs(c_pp=1, c_0=2), 2)
    rep = verify_commutant(h, pi_integral_gl2(2, 0), poly_space(3))
    assert not rep.exact_zero and rep.witness is not None
    assert verify_commutant(pi_integral_gl2(3, 1), pi_integral_gl2(3, -1), poly_space(3)).exact_zero


def test_x_space_commutant():
    for n in range(3):
        for q in (0, 1):
            m = sextic_model(n, q, Fraction(1, 2), 1)
            ipi = sextic_pi_integral_quantum(m)
            assert verify_commutant(hamiltonian_x(m), ipi.expanded, quasipoly_basis(m)).exact_zero


def test_flag_report_examples():
    h = h2_operator(HeunCoeffs(c_0m=-3, c_0=2), 5)
    assert all(e.ok for e in flag_preservation_report(h, 4))
    h = h2_operator(HeunCoeffs(c_p=1), 2)
    assert not all(e.preserves for e in flag_preservation_report(h, 3))
    rep = flag_preservation_report(h2_operator(HeunCoeffs(c_mm=1), 0), 0)
    assert len(rep) == 1 and rep[0].ok


def test_random_quadratic_grading_bounds():
    rng = random.Random(4)
    for _ in range(20):
        n = rng.randint(0, 5)
        h = h2_operator(HeunCoeffs.random(rng), n)
        assert max(h.gradings() or {0}) <= 2
        assert restrict_matrix(h, GradedSpace(n)).preserves
