"""Interaction-picture dynamics of the spin-j Jaynes-Cummings model.

The coupling only connects |n>|+> with |n+1>|->, so the state is a direct sum
of independent two-level blocks with amplitudes a_n, b_n, n = 0 ... 2j.  Each
block rotates with the generalized Rabi frequency

    Gamma_n = sqrt(Omega_n^2 + 4 lambda^2 (n+1)(1 - n/2j)),

where Omega_n = omega0 - omega + omega (2n+1)/2j is the n-dependent detuning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np
from scipy.integrate import solve_ivp

from . import _kernels
from .errors import IntegratorError, InvalidParameterError, UnsupportedSectorError
from .spin_algebra import SpinRepresentation, kerr_spectrum, raising_coeffs

__all__ = [
    "ModelParams",
    "JointState",
    "FieldMoments",
    "Superposition",
    "detuning",
    "detunings",
    "rabi_frequency",
    "rabi_frequencies",
    "couplings",
    "evolve_closed_form_grid",
    "field_vectors",
    "evolve_closed_form",
    "evolve_ode_oracle",
    "evolve_ode_grid",
    "initial_state",
    "to_schrodinger_picture",
    "schrodinger_rates",
    "field_moments",
    "reduced_density_atom",
]

NORM_TOL = 1e-10
# population of the dark state |0>|- > tolerated (and dropped) by initial_state
DARK_SECTOR_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    omega: float
    omega0: float
    lam: float
    rep: SpinRepresentation

    def __post_init__(self) -> None:
        for name in ("omega", "omega0", "lam"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InvalidParameterError(f"{name} must be a positive finite number, got {value}")

    @classmethod
    def resonant(cls, two_j: int, value: float = 1.0) -> "ModelParams":
        """omega = omega0 = lambda = ``value``."""
        return cls(value, value, value, SpinRepresentation(two_j))


@dataclass(frozen=True)
class JointState:
    a: np.ndarray
    b: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        if a.ndim != 1 or a.shape != b.shape:
            raise InvalidParameterError(f"a and b must be 1-d of equal length, got {a.shape}, {b.shape}")
        if b[-1] != 0:
            raise InvalidParameterError("b[2j] must vanish: the field has no level 2j+1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.a, self.a).real + np.vdot(self.b, self.b).real)

    def block_populations(self) -> np.ndarray:
        return np.abs(self.a) ** 2 + np.abs(self.b) ** 2


@dataclass(frozen=True)
class FieldMoments:
    n_mean: float
    n2_mean: float
    splus_mean: complex
    splus2_mean: complex
    splus_sminus_mean: float

    @property
    def n_variance(self) -> float:
        return self.n2_mean - self.n_mean**2


@dataclass(frozen=True)
class Superposition:
    """Atomic state c_plus |+> + c_minus |->."""

    c_plus: complex
    c_minus: complex


AtomSpec = Union[str, Superposition]


def _check_level(params: ModelParams, n: int) -> None:
    if not 0 <= n <= params.rep.two_j:
        raise IndexError(f"level n={n} outside 0..{params.rep.two_j}")


def detunings(params: ModelParams) -> np.ndarray:
    n = params.rep.n
    return params.omega0 - params.omega + params.omega * (2.0 * n + 1.0) / params.rep.two_j


def detuning(params: ModelParams, n: int) -> float:
    _check_level(params, n)
    return params.omega0 - params.omega + params.omega * (2.0 * n + 1.0) / params.rep.two_j


def couplings(params: ModelParams) -> np.ndarray:
    """2 lambda c_n, the off-diagonal part of Gamma_n."""
    return 2.0 * params.lam * raising_coeffs(params.rep)


def rabi_frequencies(params: ModelParams) -> np.ndarray:
    return np.hypot(detunings(params), couplings(params))


def rabi_frequency(params: ModelParams, n: int) -> float:
    _check_level(params, n)
    return float(rabi_frequencies(params)[n])


def _validate_state(state: JointState, rep: SpinRepresentation) -> None:
    if state.a.size != rep.dim:
        raise InvalidParameterError(f"state has {state.a.size} levels, representation has {rep.dim}")


def evolve_closed_form(params: ModelParams, state0: JointState, t: float) -> JointState:
    """Exact amplitudes at time ``t`` (interaction picture), from t = 0."""
    _validate_state(state0, params.rep)
    a, b = _kernels.closed_form(
        state0.a, state0.b, detunings(params), rabi_frequencies(params), couplings(params), [t]
    )
    b = b[0]
    b[-1] = 0.0
    return JointState(a[0], b, float(t))


def evolve_closed_form_grid(params: ModelParams, state0: JointState, times) -> tuple[np.ndarray, np.ndarray]:
    """Amplitude rows a(t), b(t) for every t in ``times``."""
    _validate_state(state0, params.rep)
    a, b = _kernels.closed_form(
        state0.a, state0.b, detunings(params), rabi_frequencies(params), couplings(params), times
    )
    b[:, -1] = 0.0
    return a, b


def evolve_ode_oracle(
    params: ModelParams,
    state0: JointState,
    t: float,
    rtol: float = 1e-11,
    atol: float = 1e-13,
) -> JointState:
    """Integrate the coupled amplitude equations numerically (DOP853).

    i da_n/dt = lambda c_n exp(+i Omega_n t) b_n
    i db_n/dt = lambda c_n exp(-i Omega_n t) a_n

    Shares nothing with the closed form beyond the coefficients.
    """
    if t == 0:
        _validate_state(state0, params.rep)
        return replace(state0, t=0.0)
    a, b = evolve_ode_grid(params, state0, [t], rtol=rtol, atol=atol)
    return JointState(a[0], b[0], float(t))


def evolve_ode_grid(
    params: ModelParams, state0: JointState, times, rtol: float = 1e-11, atol: float = 1e-13
) -> tuple[np.ndarray, np.ndarray]:
    """ODE amplitudes at several nonnegative ``times`` from one integration."""
    _validate_state(state0, params.rep)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or np.any(times < 0) or np.any(np.diff(times) < 0):
        raise InvalidParameterError("times must be a nondecreasing 1-d array of nonnegative values")
    d = params.rep.dim
    g = params.lam * raising_coeffs(params.rep)
    om = detunings(params)

    def rhs(s, y):
        ph = np.exp(1j * om * s)
        return np.concatenate((-1j * g * ph * y[d:], -1j * g * np.conj(ph) * y[:d]))

    y0 = np.concatenate((state0.a, state0.b))
    t_end = float(times[-1]) if times.size else 0.0
    if t_end == 0.0:
        ys = np.repeat(y0[:, None], times.size, axis=1)
    else:
        sol = solve_ivp(
            rhs, (0.0, t_end), y0, method="DOP853", t_eval=times, rtol=rtol, atol=atol
        )
        if not sol.success:
            raise IntegratorError(
                f"DOP853 failed near t={sol.t[-1] if sol.t.size else 0.0:.6g} of {t_end}: "
                f"{sol.message} (nfev={sol.nfev}, njev={sol.njev})"
            )
        ys = sol.y
    a = ys[:d].T.copy()
    b = ys[d:].T.copy()
    b[:, -1] = 0.0
    return a, b


def initial_state(rep: SpinRepresentation, field_amplitudes, atom: AtomSpec = "excited") -> JointState:
    """Product state (field) x (atom) in the (a_n, b_n) layout.

    The ground-state branch |n>|-> is stored as b_{n-1}.  A field component
    on |0> paired with the ground atom has no slot in this layout; it raises
    UnsupportedSectorError unless its weight is below ``DARK_SECTOR_TOL``.
    """
    c = np.asarray(field_amplitudes, dtype=complex)
    if c.shape != (rep.dim,):
        raise InvalidParameterError(f"expected {rep.dim} field amplitudes, got shape {c.shape}")
    if abs(np.vdot(c, c).real - 1.0) > NORM_TOL:
        raise InvalidParameterError("field amplitudes are not normalized")
    if atom == "excited":
        c_plus, c_minus = 1.0, 0.0
    elif atom == "ground":
        c_plus, c_minus = 0.0, 1.0
    elif isinstance(atom, Superposition):
        c_plus, c_minus = complex(atom.c_plus), complex(atom.c_minus)
        if abs(abs(c_plus) ** 2 + abs(c_minus) ** 2 - 1.0) > NORM_TOL:
            raise InvalidParameterError("atomic amplitudes are not normalized")
    else:
        raise InvalidParameterError(f"unknown atomic state {atom!r}")

    a = c_plus * c
    b = np.zeros(rep.dim, dtype=complex)
    b[:-1] = c_minus * c[1:]
    dark = abs(c_minus * c[0]) ** 2
    if dark > DARK_SECTOR_TOL:
        raise UnsupportedSectorError(
            f"state puts weight {dark:.3e} on |0>|->, which the coupled ladder does not contain"
        )
    return JointState(a, b, 0.0)


def schrodinger_rates(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Free-evolution frequencies of |n>|+> and |n+1>|->."""
    e = kerr_spectrum(params.rep, params.omega).energies
    n_top = params.rep.two_j + 1
    # E_{2j+1} from the same formula; only multiplies the always-zero b[2j]
    e_next = np.append(e[1:], params.omega * (n_top + 0.5 - n_top**2 / params.rep.two_j))
    half = 0.5 * params.omega0
    return e + half, e_next - half


def to_schrodinger_picture(params: ModelParams, state: JointState) -> JointState:
    rate_a, rate_b = schrodinger_rates(params)
    t = state.t
    return JointState(state.a * np.exp(-1j * rate_a * t), state.b * np.exp(-1j * rate_b * t), t)


def field_vectors(state: JointState) -> tuple[np.ndarray, np.ndarray]:
    """Field-level amplitudes of the |+> branch and the |-> branch."""
    fb = np.zeros_like(state.b)
    fb[1:] = state.b[:-1]
    return state.a, fb


def field_moments(state: JointState, rep: SpinRepresentation) -> FieldMoments:
    """Field expectation values from the reduced field density matrix.

    rho_F = |f_+><f_+| + |f_-><f_-| with f_+ = a and f_-[n+1] = b[n], so every
    moment is the sum of two pure-state moments and no d x d matrix is formed.
    """
    _validate_state(state, rep)
    fa, fb = field_vectors(state)
    n = rep.n
    s = np.sqrt(rep.two_j) * raising_coeffs(rep)  # <n+1|S_+|n>
    pf = np.abs(fa) ** 2 + np.abs(fb) ** 2
    sp = sum(np.dot(np.conj(f[1:]) * f[:-1], s[:-1]) for f in (fa, fb))
    sp2 = sum(np.dot(np.conj(f[2:]) * f[:-2], s[:-2] * s[1:-1]) for f in (fa, fb))
    spsm = float(np.dot(pf[1:], s[:-1] ** 2))
    return FieldMoments(
        n_mean=float(np.dot(pf, n)),
        n2_mean=float(np.dot(pf, n * n)),
        splus_mean=complex(sp),
        splus2_mean=complex(sp2),
        splus_sminus_mean=spsm,
    )


def reduced_density_atom(state: JointState) -> np.ndarray:
    """2x2 atomic density matrix in the ordering (|+>, |->)."""
    fa, fb = field_vectors(state)
    rho_pp = np.vdot(fa, fa).real
    rho_mm = np.vdot(fb, fb).real
    rho_pm = np.vdot(fb, fa)  # sum_n a_n conj(f_-[n])
    return np.array([[rho_pp, rho_pm], [np.conj(rho_pm), rho_mm]], dtype=complex)
