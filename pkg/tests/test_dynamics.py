import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from spinjcm.coherent_states import CoherentStateSpec, coherent_amplitudes
from spinjcm.dynamics import (
    JointState,
    ModelParams,
    Superposition,
    detuning,
    evolve_closed_form,
    evolve_closed_form_grid,
    evolve_ode_grid,
    evolve_ode_oracle,
    field_moments,
    initial_state,
    rabi_frequencies,
    rabi_frequency,
    reduced_density_atom,
    to_schrodinger_picture,
)
from spinjcm.errors import InvalidParameterError, UnsupportedSectorError
from spinjcm.spin_algebra import SpinRepresentation, kerr_spectrum, ladder_matrices, spin_matrices

from conftest import make_random_state


def _dense_basis(rep):
    """Embedding of (a, b) into the 2d-dimensional field x atom space, |n>|+-> ordering."""
    d = rep.dim

    def embed(state):
        psi = np.zeros(2 * d, complex)
        psi[0::2] = state.a
        psi[3::2] = state.b[:-1]
        return psi

    return embed


def _dense_hamiltonian(params):
    rep = params.rep
    e = kerr_spectrum(rep, params.omega).energies
    b, bdag, _ = ladder_matrices(rep)
    sz = np.diag([0.5, -0.5])
    sp = np.array([[0, 1], [0, 0]], float)
    h = np.kron(np.diag(e), np.eye(2)) + params.omega0 * np.kron(np.eye(rep.dim), sz)
    h = h + params.lam * (np.kron(b, sp) + np.kron(bdag, sp.T))
    return h


def test_detuning_examples():
    p = ModelParams.resonant(1000)
    assert detuning(p, 20) == pytest.approx(41 / 1000, abs=1e-15)
    p = ModelParams(1.0, 1.0, 1.0, SpinRepresentation(50))
    assert detuning(p, 20) == pytest.approx(0.82, abs=1e-15)
    p = ModelParams(1.0, 2.0, 1.0, SpinRepresentation(4))
    assert detuning(p, 1) == pytest.approx(1.75, abs=1e-15)


def test_rabi_frequency_value():
    p = ModelParams.resonant(50)
    om = 41 / 50
    expected = math.sqrt(om**2 + 4 * 21 * (1 - 20 / 50))
    assert rabi_frequency(p, 20) == pytest.approx(expected, rel=1e-15)
    with pytest.raises(IndexError):
        rabi_frequency(p, 51)


@given(two_j=st.integers(1, 2000), w0=st.floats(0.1, 5), lam=st.floats(0.01, 5))
def test_rabi_dominates_detuning(two_j, w0, lam):
    p = ModelParams(1.0, w0, lam, SpinRepresentation(two_j))
    g = rabi_frequencies(p)
    om = np.abs(p.omega0 - p.omega + p.omega * (2 * p.rep.n + 1) / two_j)
    assert np.all(g[:-1] > om[:-1])
    assert g[-1] == pytest.approx(om[-1], rel=1e-15)


def test_params_validation():
    with pytest.raises(InvalidParameterError):
        ModelParams(0.0, 1.0, 1.0, SpinRepresentation(2))
    with pytest.raises(InvalidParameterError):
        ModelParams(1.0, 1.0, math.nan, SpinRepresentation(2))


def test_joint_state_requires_empty_top():
    with pytest.raises(InvalidParameterError):
        JointState(np.zeros(3), np.array([0, 0, 1.0]))


def test_closed_form_identity_at_zero(random_state):
    s0 = random_state(9)
    p = ModelParams(0.7, 1.3, 0.4, SpinRepresentation(9))
    out = evolve_closed_form(p, s0, 0.0)
    np.testing.assert_allclose(out.a, s0.a, atol=1e-15)
    np.testing.assert_allclose(out.b, s0.b, atol=1e-15)


def test_top_level_is_trapped():
    rep = SpinRepresentation(40)
    p = ModelParams.resonant(40)
    c = np.zeros(rep.dim)
    c[-1] = 1
    s0 = initial_state(rep, c)
    for t in (0.3, 7.0, 1e3):
        s = evolve_closed_form(p, s0, t)
        assert abs(s.a[-1]) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("two_j", [1, 2, 7, 20])
def test_closed_form_matches_ode(two_j, rng):
    p = ModelParams(1.0, 1.4, 0.6, SpinRepresentation(two_j))
    s0 = make_random_state(two_j, rng)
    ts = np.array([0.5, 3.0, 12.0, 40.0])
    a_cf, b_cf = evolve_closed_form_grid(p, s0, ts)
    a_ode, b_ode = evolve_ode_grid(p, s0, ts)
    assert np.max(np.abs(a_cf - a_ode)) < 1e-8
    assert np.max(np.abs(b_cf - b_ode)) < 1e-8
    single = evolve_ode_oracle(p, s0, 3.0)
    np.testing.assert_allclose(single.a, a_ode[1], atol=1e-9)


def test_full_phase_rotation_is_wrong(rng):
    # using exp(i Omega t) instead of exp(i Omega t / 2) breaks the ODE
    p = ModelParams(1.0, 1.4, 0.6, SpinRepresentation(6))
    s0 = make_random_state(6, rng)
    t = 2.5
    good = evolve_closed_form(p, s0, t)
    om = p.omega0 - p.omega + p.omega * (2 * p.rep.n + 1) / 6
    wrong_a = good.a * np.exp(0.5j * om * t)
    ode = evolve_ode_oracle(p, s0, t)
    assert np.max(np.abs(good.a - ode.a)) < 1e-8
    assert np.max(np.abs(wrong_a - ode.a)) > 1e-2


def test_ode_grid_rejects_decreasing_times(random_state):
    p = ModelParams.resonant(3)
    with pytest.raises(InvalidParameterError):
        evolve_ode_grid(p, random_state(3), [1.0, 0.5])


@settings(max_examples=40, deadline=None)
@given(two_j=st.integers(1, 60), t=st.floats(0, 1e3), seed=st.integers(0, 2**31))
def test_block_unitarity(two_j, t, seed):
    p = ModelParams(1.0, 0.8, 0.9, SpinRepresentation(two_j))
    s0 = make_random_state(two_j, np.random.default_rng(seed))
    s = evolve_closed_form(p, s0, t)
    np.testing.assert_allclose(s.block_populations(), s0.block_populations(), atol=1e-13)
    assert abs(s.norm2 - 1) < 1e-12


@pytest.mark.parametrize("two_j", [1, 4, 9])
def test_schrodinger_picture_matches_dense_hamiltonian(two_j, rng):
    p = ModelParams(0.9, 1.3, 0.7, SpinRepresentation(two_j))
    s0 = make_random_state(two_j, rng)
    embed = _dense_basis(p.rep)
    h = _dense_hamiltonian(p)
    for t in (0.4, 5.0, 31.0):
        want = expm(-1j * h * t) @ embed(s0)
        got = embed(to_schrodinger_picture(p, evolve_closed_form(p, s0, t)))
        np.testing.assert_allclose(got, want, atol=1e-10)


def test_initial_state_layouts():
    rep = SpinRepresentation(4)
    one = np.zeros(5)
    one[1] = 1
    s = initial_state(rep, one, "ground")
    assert s.b[0] == 1 and np.all(s.a == 0)
    s = initial_state(rep, one, Superposition(1 / math.sqrt(2), 1j / math.sqrt(2)))
    assert s.a[1] == pytest.approx(1 / math.sqrt(2))
    assert s.b[0] == pytest.approx(1j / math.sqrt(2))


def test_initial_state_rejects_dark_sector():
    rep = SpinRepresentation(4)
    c = coherent_amplitudes(rep, CoherentStateSpec(0.3))
    with pytest.raises(UnsupportedSectorError):
        initial_state(rep, c, "ground")
    with pytest.raises(InvalidParameterError):
        initial_state(rep, 2 * c)
    with pytest.raises(InvalidParameterError):
        initial_state(rep, c, "sideways")


def _dense_rho(state, rep):
    psi = _dense_basis(rep)(state)
    return np.outer(psi, psi.conj())


@pytest.mark.parametrize("two_j", [2, 4, 7])
def test_field_moments_against_dense_density(two_j, rng):
    rep = SpinRepresentation(two_j)
    p = ModelParams(1.0, 1.2, 0.8, rep)
    s = to_schrodinger_picture(p, evolve_closed_form(p, make_random_state(two_j, rng), 1.7))
    rho = _dense_rho(s, rep)
    rho_f = np.einsum("iaja->ij", rho.reshape(rep.dim, 2, rep.dim, 2))
    rho_a = np.einsum("iaib->ab", rho.reshape(rep.dim, 2, rep.dim, 2))
    sp, sm, _ = spin_matrices(rep)
    _, _, n = ladder_matrices(rep)
    m = field_moments(s, rep)
    assert m.n_mean == pytest.approx(np.trace(rho_f @ n).real, abs=1e-12)
    assert m.n2_mean == pytest.approx(np.trace(rho_f @ n @ n).real, abs=1e-12)
    assert abs(m.splus_mean - np.trace(rho_f @ sp)) < 1e-12
    assert abs(m.splus2_mean - np.trace(rho_f @ sp @ sp)) < 1e-12
    assert m.splus_sminus_mean == pytest.approx(np.trace(rho_f @ sp @ sm).real, abs=1e-12)
    np.testing.assert_allclose(reduced_density_atom(s), rho_a, atol=1e-12)


def test_mean_photon_is_picture_independent(rng):
    rep = SpinRepresentation(30)
    p = ModelParams(1.0, 1.1, 0.5, rep)
    s = evolve_closed_form(p, make_random_state(30, rng), 9.0)
    m_i = field_moments(s, rep)
    m_s = field_moments(to_schrodinger_picture(p, s), rep)
    assert m_i.n_mean == pytest.approx(m_s.n_mean, abs=1e-12)
    assert m_i.n2_mean == pytest.approx(m_s.n2_mean, abs=1e-10)
