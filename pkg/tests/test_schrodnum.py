import math

import numpy as np
import pytest

from qespi.gl2qes import HeunCoeffs, qes_block_spectrum, sextic_model
from qespi.schrodnum import (
    GaugeMapError,
    GridSpec,
    NonConfiningError,
    PotentialSpec,
    compare_spectra,
    eigen_1d,
    potential_from_heun,
    sextic_energies,
)

harmonic = PotentialSpec(lambda x: x * x, "harmonic")


def test_harmonic_oscillator():
    e = eigen_1d(harmonic, GridSpec(10.0, 2000), 3)
    assert np.allclose(e, [1, 3, 5], atol=1e-6)


def test_second_order_convergence():
    exact = np.array([1.0, 3.0])
    errs = [np.max(np.abs(eigen_1d(harmonic, GridSpec(10.0, N), 2, richardson=False) - exact)) for N in (400, 800)]
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_parity_sectors_union():
    g = GridSpec(10.0, 2000)
    full = eigen_1d(harmonic, g, 4)
    even = eigen_1d(harmonic, GridSpec(5.0, 1000, "even"), 2)
    odd = eigen_1d(harmonic, GridSpec(5.0, 1000, "odd"), 2)
    assert np.allclose(np.sort(np.concatenate([even, odd])), full, atol=1e-6)
    assert np.allclose(even, [1, 5], atol=1e-6) and np.allclose(odd, [3, 7], atol=1e-6)


def test_sextic_even_sector_contains_algebraic_pair():
    m = sextic_model(1, 0, 1, 0)
    e = sextic_energies(m, count=2)
    assert abs(e[0] + 2 * math.sqrt(2)) < 1e-6
    assert abs(e[1] - 2 * math.sqrt(2)) < 1e-6


def test_confinement_check():
    with pytest.raises(NonConfiningError):
        eigen_1d(harmonic, GridSpec(1.0, 200), 5)
    with pytest.raises(ValueError):
        GridSpec(1.0, 10)


@pytest.mark.parametrize("x", [0.2, 0.9, 1.7, 2.4])
def test_potential_from_heun_matches_sextic(x):
    m = sextic_model(2, 1, 1, -1)
    for sign in (1, -1):
        v = potential_from_heun(m.heun, m.n, sign * x, branch=sign)
        assert abs(v - m.potential_value(x)) < 1e-9


def test_branch_reflection():
    m = sextic_model(1, 0, 1, 2)
    assert math.isclose(
        potential_from_heun(m.heun, 1, 0.8, branch=1), potential_from_heun(m.heun, 1, -0.8, branch=-1), rel_tol=1e-13
    )


def test_p4_root_inside_path():
    # P4 = (t - 2)^2: the map from t0 = 1 cannot cross t = 2
    c = HeunCoeffs(c_pm=-1, c_0m=4, c_mm=-4)
    with pytest.raises(GaugeMapError):
        potential_from_heun(c, 1, 50.0, t0=1.0)


def test_compare_spectra_examples():
    rep = compare_spectra([1.0, 2.0], [2.0, 1.0])
    assert rep.max_rel_error == 0 and rep.ok
    empty = compare_spectra([], [1.0])
    assert empty.pairs == [] and empty.ok


def test_sextic_sweep_small():
    for n in range(3):
        for q in (0, 1):
            m = sextic_model(n, q, 2, -1)
            alg = qes_block_spectrum(m.h2p, n).eigenvalues
            assert compare_spectra(alg, sextic_energies(m)).ok
