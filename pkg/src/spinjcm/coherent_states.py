"""SU(2) coherent states of the field mode and their photon statistics.

A coherent state is parameterized by the filling fraction chi = <n>/2j and a
phase phi; |xi|^2 = chi / (1 - chi) and xi = |xi| exp(-i phi).  Its number
distribution is Binomial(2j, chi), which tends to Poisson(<n>) as 2j grows at
fixed <n>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy
from scipy.stats import binom, poisson

from .errors import InvalidParameterError, TruncationError
from .spin_algebra import SpinRepresentation

__all__ = [
    "CoherentStateSpec",
    "PhotonDistribution",
    "coherent_amplitudes",
    "photon_distribution",
    "binomial_probs",
    "poisson_cutoff",
    "mean_photon",
    "chi_from_mean",
    "poisson_reference",
    "total_variation",
]

POISSON_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class CoherentStateSpec:
    chi: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.chi <= 1.0:
            raise InvalidParameterError(f"chi must lie in [0, 1], got {self.chi}")

    @property
    def xi_abs2(self) -> float:
        return math.inf if self.chi == 1.0 else self.chi / (1.0 - self.chi)

    @property
    def theta(self) -> float:
        """Polar angle on the sphere, |xi| = tan(theta/2)."""
        return 2.0 * math.asin(math.sqrt(self.chi))


@dataclass(frozen=True)
class PhotonDistribution:
    probs: np.ndarray
    mean: float
    variance: float

    @classmethod
    def from_probs(cls, probs: np.ndarray) -> "PhotonDistribution":
        n = np.arange(probs.size, dtype=float)
        mean = float(np.dot(n, probs))
        variance = float(np.dot((n - mean) ** 2, probs))
        return cls(probs=probs, mean=mean, variance=variance)


# below this, boost's binomial pmf can overflow (it does by 1e-305 at 2j = 1000)
_TINY = 1e-250


def _log_comb(two_j: int, n: np.ndarray) -> np.ndarray:
    return gammaln(two_j + 1) - gammaln(n + 1) - gammaln(two_j - n + 1)


def binomial_probs(two_j: int, chi: float) -> np.ndarray:
    """C(2j, n) chi^n (1-chi)^(2j-n) for n = 0 ... 2j.

    Evaluated for min(chi, 1-chi) and mirrored, so that the distributions for
    chi and 1-chi are exact reflections of each other.
    """
    n = np.arange(two_j + 1)
    if chi > 0.5:
        return binomial_probs(two_j, 1.0 - chi)[::-1].copy()
    if 0.0 < chi < _TINY:
        # the mass is all at n = 0 here, so log-space rounding is harmless
        return np.exp(_log_comb(two_j, n) + xlogy(n, chi) + xlog1py(two_j - n, -chi))
    probs = binom.pmf(n, two_j, chi)
    if chi == 0.5:
        probs = 0.5 * (probs + probs[::-1])
    return probs


def photon_distribution(rep: SpinRepresentation, chi: float) -> PhotonDistribution:
    if not 0.0 <= chi <= 1.0:
        raise InvalidParameterError(f"chi must lie in [0, 1], got {chi}")
    probs = binomial_probs(rep.two_j, chi)
    return PhotonDistribution(
        probs=probs, mean=rep.two_j * chi, variance=rep.two_j * chi * (1.0 - chi)
    )


def coherent_amplitudes(rep: SpinRepresentation, spec: CoherentStateSpec) -> np.ndarray:
    """Amplitudes c_n = C(2j,n)^(1/2) xi^n / (1+|xi|^2)^j in the n basis.

    chi = 1 gives the top state |2j> exactly.
    """
    c = np.sqrt(binomial_probs(rep.two_j, spec.chi)).astype(complex)
    if spec.phi:
        c *= np.exp(-1j * spec.phi * rep.n)
    return c


def mean_photon(rep: SpinRepresentation, xi_abs2: float) -> float:
    if xi_abs2 < 0:
        raise InvalidParameterError(f"|xi|^2 must be nonnegative, got {xi_abs2}")
    if math.isinf(xi_abs2):
        return float(rep.two_j)
    return rep.two_j * xi_abs2 / (1.0 + xi_abs2)


def chi_from_mean(rep: SpinRepresentation, mean_n: float) -> float:
    if not 0.0 <= mean_n <= rep.two_j:
        raise InvalidParameterError(f"mean photon number must lie in [0, {rep.two_j}], got {mean_n}")
    return mean_n / rep.two_j


def poisson_reference(mean_n: float, n_max: int) -> PhotonDistribution:
    """Poisson(mean_n) on 0..n_max, renormalized over the window."""
    if not mean_n > 0:
        raise InvalidParameterError(f"mean photon number must be positive, got {mean_n}")
    tail = poisson.sf(n_max, mean_n)
    if tail >= POISSON_TAIL_TOL:
        raise TruncationError(
            f"n_max={n_max} drops Poisson({mean_n}) tail mass {tail:.3e} >= {POISSON_TAIL_TOL}"
        )
    probs = poisson.pmf(np.arange(n_max + 1), mean_n)
    return PhotonDistribution.from_probs(probs / probs.sum())


def poisson_cutoff(mean_n: float, tol: float = POISSON_TAIL_TOL) -> int:
    """Smallest n_max whose Poisson tail mass is below ``tol``."""
    n_max = int(poisson.isf(tol, mean_n)) + 1
    while poisson.sf(n_max, mean_n) >= tol:
        n_max += 1
    return n_max


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    """Total-variation distance, zero-padding the shorter array."""
    size = max(p.size, q.size)
    p = np.pad(p, (0, size - p.size))
    q = np.pad(q, (0, size - q.size))
    return 0.5 * float(np.abs(p - q).sum())
