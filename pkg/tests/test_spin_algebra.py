import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from spinjcm.coherent_states import CoherentStateSpec, coherent_amplitudes
from spinjcm.errors import DomainError, InvalidParameterError
from spinjcm.spin_algebra import (
    SpinRepresentation,
    commutator_defect,
    kerr_evolve_field,
    kerr_spectrum,
    ladder_matrices,
    make_representation,
    number_from_bdag_b,
    raising_coeff,
    raising_coeffs,
    spin_matrices,
)


@pytest.mark.parametrize("two_j, dim", [(50, 51), (1000, 1001), (1, 2)])
def test_make_representation(two_j, dim):
    assert make_representation(two_j).dim == dim


@pytest.mark.parametrize("bad", [0, -3, 2.5, True])
def test_make_representation_rejects(bad):
    with pytest.raises(InvalidParameterError):
        make_representation(bad)


def test_raising_coeff_values():
    rep = SpinRepresentation(50)
    assert raising_coeff(rep, 50) == 0.0
    expected = float(mpmath.sqrt(mpmath.mpf(11) * mpmath.mpf("0.8")))
    assert raising_coeff(rep, 10) == pytest.approx(expected, rel=1e-15)
    assert raising_coeff(rep, 10) == pytest.approx(2.96647939483827, abs=1e-13)


def test_raising_coeff_out_of_range():
    rep = SpinRepresentation(4)
    with pytest.raises(IndexError):
        raising_coeff(rep, 5)
    with pytest.raises(IndexError):
        raising_coeff(rep, -1)


@pytest.mark.parametrize("two_j", [1, 2, 7, 50, 301])
def test_raising_coeff_positive_below_top(two_j):
    c = raising_coeffs(SpinRepresentation(two_j))
    assert c[-1] == 0.0
    assert np.all(c[:-1] > 0)


def test_harmonic_limit_of_raising_coeff():
    n = 3
    errs = []
    for two_j in (10**2, 10**3, 10**4):
        err = abs(raising_coeff(SpinRepresentation(two_j), n) - math.sqrt(n + 1))
        # 1 - sqrt(1 - x) lies in [x/2, x]
        assert math.sqrt(n + 1) * n / (2 * two_j) <= err <= math.sqrt(n + 1) * n / two_j
        errs.append(err)
    assert errs[0] > errs[1] > errs[2]
    assert raising_coeff(SpinRepresentation(10**8), n) == pytest.approx(2.0, abs=1e-6)


def test_kerr_spectrum_values():
    e = kerr_spectrum(SpinRepresentation(50), 1.0).energies
    assert e[0] == 0.5
    assert e[10] == pytest.approx(8.5, abs=1e-14)
    assert e[10] == pytest.approx(e[40], rel=1e-12)


@given(two_j=st.integers(1, 3000), omega=st.floats(1e-3, 1e3))
def test_kerr_degeneracy(two_j, omega):
    e = kerr_spectrum(SpinRepresentation(two_j), omega).energies
    np.testing.assert_allclose(e, e[::-1], rtol=1e-12, atol=1e-12 * omega)


def test_kerr_spectrum_matches_spin_hamiltonian():
    rep = SpinRepresentation(9)
    sp, sm, _ = spin_matrices(rep)
    h = 0.7 / (2 * rep.two_j) * (sp @ sm + sm @ sp)
    np.testing.assert_allclose(np.diag(h), kerr_spectrum(rep, 0.7).energies, atol=1e-13)
    np.testing.assert_allclose(h, np.diag(np.diag(h)), atol=1e-14)


def test_kerr_spectrum_rejects_nonpositive_omega():
    with pytest.raises(InvalidParameterError):
        kerr_spectrum(SpinRepresentation(3), 0.0)


def test_spin_matrices_obey_su2():
    rep = SpinRepresentation(6)
    sp, sm, s3 = spin_matrices(rep)
    np.testing.assert_allclose(sp @ sm - sm @ sp, 2 * s3, atol=1e-12)
    np.testing.assert_allclose(s3 @ sp - sp @ s3, sp, atol=1e-12)


def test_number_relation_examples():
    assert number_from_bdag_b(SpinRepresentation(2), 1.0) == pytest.approx(1.0, abs=1e-15)
    assert number_from_bdag_b(SpinRepresentation(17), 0.0) == 0.0
    assert number_from_bdag_b(SpinRepresentation(10**9), 4.0) == pytest.approx(4.0, abs=1e-6)


@pytest.mark.parametrize("two_j", [1, 2, 5, 20, 101, 200])
def test_number_relation_on_lower_half(two_j):
    rep = SpinRepresentation(two_j)
    _, bdag, _ = ladder_matrices(rep)
    eigs = np.diag(bdag @ bdag.T)  # b^dag b is diagonal in the n basis
    for n in range(two_j // 2 + 1):
        assert number_from_bdag_b(rep, eigs[n]) == pytest.approx(n, abs=1e-9)


@pytest.mark.parametrize("two_j", [2, 5, 20])
def test_number_relation_upper_half_returns_partner(two_j):
    # b^dag b has the same eigenvalue on |n> and |2j+1-n>
    rep = SpinRepresentation(two_j)
    for n in range(two_j // 2 + 1, two_j + 1):
        eig = n * (two_j + 1 - n) / two_j
        assert number_from_bdag_b(rep, eig) == pytest.approx(two_j + 1 - n, abs=1e-6)


def test_number_relation_domain():
    with pytest.raises(DomainError):
        number_from_bdag_b(SpinRepresentation(4), 100.0)


def test_commutator_two_by_two_exact():
    defect = commutator_defect(SpinRepresentation(1))
    assert defect.shape == (2, 2)
    assert np.abs(defect).max() < 1e-15


@pytest.mark.parametrize("two_j, tol", [(50, 1e-12), (2000, 1e-10)])
def test_commutator_identity(two_j, tol):
    assert np.abs(commutator_defect(SpinRepresentation(two_j))).max() < tol


def test_kerr_evolution_identity_and_basis_states():
    rep = SpinRepresentation(8)
    c = coherent_amplitudes(rep, CoherentStateSpec(0.3))
    np.testing.assert_array_equal(kerr_evolve_field(rep, 1.0, c, 0.0), c)
    basis = np.zeros(rep.dim, complex)
    basis[3] = 1.0
    out = kerr_evolve_field(rep, 1.0, basis, 2.7)
    np.testing.assert_allclose(np.abs(out) ** 2, np.abs(basis) ** 2, atol=1e-15)


@settings(max_examples=50)
@given(two_j=st.integers(1, 60), t=st.floats(-100, 100), seed=st.integers(0, 2**32 - 1))
def test_kerr_evolution_preserves_populations(two_j, t, seed):
    rep = SpinRepresentation(two_j)
    rng = np.random.default_rng(seed)
    c = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
    c /= np.linalg.norm(c)
    out = kerr_evolve_field(rep, 1.3, c, t)
    assert abs(np.linalg.norm(out) - 1) <= 1e-12
    np.testing.assert_allclose(np.abs(out) ** 2, np.abs(c) ** 2, atol=1e-14)


@pytest.mark.parametrize("t", [0.3, 2.0, 11.0])
def test_kerr_evolution_matches_matrix_exponential(t):
    rep = SpinRepresentation(12)
    omega = 0.9
    sp, sm, _ = spin_matrices(rep)
    h = omega / (2 * rep.two_j) * (sp @ sm + sm @ sp)
    s1 = 0.5 * (sp + sm)
    c = coherent_amplitudes(rep, CoherentStateSpec(0.35, phi=0.4))
    u = expm(-1j * h * t)
    # Heisenberg picture S_1(t) = U^dag S_1 U against the evolved state
    heis = np.vdot(c, u.conj().T @ s1 @ u @ c).real
    evolved = kerr_evolve_field(rep, omega, c, t)
    assert np.vdot(evolved, s1 @ evolved).real == pytest.approx(heis, abs=1e-10)
