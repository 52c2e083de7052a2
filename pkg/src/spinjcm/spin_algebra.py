"""Finite spin-j field mode.

States are labelled by the excitation number n = m + j, n = 0 ... 2j, so j
only ever enters through n / (2j) and 1 / (2j).  With b = S_- / sqrt(2j) the
mode behaves like a boson whose ladder is cut off at n = 2j, and the free
Hamiltonian is the Kerr form  omega (n + 1/2 - n^2 / 2j).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidParameterError

__all__ = [
    "SpinRepresentation",
    "KerrSpectrum",
    "make_representation",
    "raising_coeff",
    "raising_coeffs",
    "kerr_spectrum",
    "number_from_bdag_b",
    "ladder_matrices",
    "spin_matrices",
    "commutator_defect",
    "kerr_evolve_field",
]


@dataclass(frozen=True)
class SpinRepresentation:
    """Spin-j irrep, stored through the integer ``two_j`` = 2j."""

    two_j: int

    def __post_init__(self) -> None:
        if isinstance(self.two_j, bool) or int(self.two_j) != self.two_j:
            raise InvalidParameterError(f"two_j must be an integer, got {self.two_j!r}")
        if self.two_j < 1:
            raise InvalidParameterError(f"two_j must be >= 1, got {self.two_j}")
        object.__setattr__(self, "two_j", int(self.two_j))

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def n(self) -> np.ndarray:
        """Excitation numbers 0 ... 2j."""
        return np.arange(self.dim, dtype=float)


@dataclass(frozen=True)
class KerrSpectrum:
    energies: np.ndarray
    omega: float


def make_representation(two_j: int) -> SpinRepresentation:
    return SpinRepresentation(two_j)


def _check_level(rep: SpinRepresentation, n: int) -> int:
    if not 0 <= n <= rep.two_j:
        raise IndexError(f"level n={n} outside 0..{rep.two_j}")
    return int(n)


def raising_coeff(rep: SpinRepresentation, n: int) -> float:
    """Matrix element <n+1| b^dagger |n> = sqrt((n+1)(1 - n/2j)).

    Exactly zero at the top of the ladder, n = 2j.
    """
    n = _check_level(rep, n)
    return float(np.sqrt((n + 1) * (rep.two_j - n) / rep.two_j))


def raising_coeffs(rep: SpinRepresentation) -> np.ndarray:
    """Vector of ``raising_coeff(rep, n)`` for every n."""
    n = rep.n
    return np.sqrt((n + 1.0) * (rep.two_j - n) / rep.two_j)


def kerr_spectrum(rep: SpinRepresentation, omega: float) -> KerrSpectrum:
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega}")
    n = rep.n
    energies = omega * (n + 0.5 - n * n / rep.two_j)
    return KerrSpectrum(energies=energies, omega=float(omega))


def number_from_bdag_b(rep: SpinRepresentation, lambda_bb: float) -> float:
    """Excitation number from an eigenvalue of b^dagger b.

    Evaluates (2j+1)/2 [1 - sqrt(1 - 8j lambda_bb / (2j+1)^2)].  The
    eigenvalue n(2j+1-n)/2j is shared by n and 2j+1-n, and the principal
    root always returns the smaller of the two.
    """
    d = rep.two_j + 1
    radicand = 1.0 - 4.0 * rep.two_j * lambda_bb / d**2
    if radicand < 0:
        # allow rounding noise at the top eigenvalue
        if radicand < -1e-12:
            raise DomainError(
                f"b^dagger b eigenvalue {lambda_bb} exceeds the maximum {d**2 / (4 * rep.two_j)}"
            )
        radicand = 0.0
    return d / 2 * (1.0 - np.sqrt(radicand))


def ladder_matrices(rep: SpinRepresentation) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense (b, b^dagger, n).  Only meant for small dimensions and tests."""
    bdag = np.diag(raising_coeffs(rep)[:-1], k=-1)
    return bdag.T.copy(), bdag, np.diag(rep.n)


def spin_matrices(rep: SpinRepresentation) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense (S_+, S_-, S_3) in the n basis."""
    splus = np.sqrt(rep.two_j) * np.diag(raising_coeffs(rep)[:-1], k=-1)
    return splus, splus.T.copy(), np.diag(rep.n - rep.j)


def commutator_defect(rep: SpinRepresentation) -> np.ndarray:
    """[b, b^dagger] - (1 - n/j) built from explicit matrices; ideally zero."""
    b, bdag, number = ladder_matrices(rep)
    rhs = np.eye(rep.dim) - number / rep.j
    return b @ bdag - bdag @ b - rhs


def kerr_evolve_field(
    rep: SpinRepresentation, omega: float, c: np.ndarray, t: float
) -> np.ndarray:
    """Evolve field amplitudes under the Kerr Hamiltonian for time ``t``."""
    c = np.asarray(c, dtype=complex)
    if c.shape != (rep.dim,):
        raise InvalidParameterError(f"expected {rep.dim} amplitudes, got shape {c.shape}")
    energies = kerr_spectrum(rep, omega).energies
    return np.exp(-1j * energies * t) * c
