"""Atomic inversion, Mandel Q, quadrature variances and the standard-JCM reference."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from . import _kernels
from .coherent_states import POISSON_TAIL_TOL, photon_distribution, poisson_cutoff
from .dynamics import FieldMoments, JointState, ModelParams, couplings, detunings, rabi_frequencies
from .errors import DomainError, InvalidParameterError, TruncationError, UndefinedObservableError
from .spin_algebra import SpinRepresentation

__all__ = [
    "ObservableRecord",
    "QuadratureVariances",
    "atomic_inversion",
    "inversion_closed_form",
    "revival_time_estimate",
    "mandel_q",
    "quadrature_variances",
    "quadrature_variances_printed",
    "robertson_bound",
    "standard_jcm_inversion",
    "find_revival_peak",
    "series_records",
    "SQUEEZING_THRESHOLD",
]

# vacuum / coherent-state quadrature variance (hbar = 1)
SQUEEZING_THRESHOLD = 0.25


@dataclass(frozen=True)
class ObservableRecord:
    t: float
    sigma3: float | None = None
    q_mandel: float | None = None
    var_x: float | None = None
    var_y: float | None = None
    robertson_bound: float | None = None


@dataclass(frozen=True)
class QuadratureVariances:
    var_x: float
    var_y: float
    robertson_bound: float

    @property
    def squeezed_x(self) -> bool:
        return self.var_x < SQUEEZING_THRESHOLD

    @property
    def squeezed_y(self) -> bool:
        return self.var_y < SQUEEZING_THRESHOLD


def atomic_inversion(state: JointState) -> float:
    return float(np.vdot(state.a, state.a).real - np.vdot(state.b, state.b).real)


def _nonzero_support(weights: np.ndarray) -> np.ndarray:
    # terms whose weight underflowed to zero contribute exactly nothing
    return np.flatnonzero(weights)


def inversion_closed_form(params: ModelParams, chi: float, t) -> np.ndarray | float:
    """<sigma_3(t)> for an excited atom and a coherent field of filling ``chi``.

    Accepts a scalar or an array of times.
    """
    weights = photon_distribution(params.rep, chi).probs
    gamma = rabi_frequencies(params)
    om = detunings(params)
    keep = _nonzero_support(weights)
    ratio = np.divide(om**2, gamma**2, out=np.ones_like(gamma), where=gamma > 0)
    out = _kernels.inversion_sum(weights[keep], ratio[keep], gamma[keep], t)
    return float(out[0]) if np.ndim(t) == 0 else out


def revival_time_estimate(params: ModelParams, chi: float) -> float:
    """Scaled revival time lambda t_R from the large-2j estimate.

    Derived for the resonant case omega = omega0 = lambda; the parameters are
    only used through 2j.
    """
    if not 0.0 <= chi < 1.0:
        raise DomainError(f"revival time needs 0 <= chi < 1, got {chi}")
    two_j = params.rep.two_j
    upper = math.sqrt(chi * chi + (2.0 + two_j * chi) * (1.0 - chi))
    lower = math.sqrt(chi * chi + (1.0 + two_j * chi) * (1.0 - chi))
    return math.pi / (upper - lower)


def mandel_q(moments: FieldMoments) -> float:
    if not moments.n_mean > 0:
        raise UndefinedObservableError("Mandel Q is undefined for <n> = 0")
    return (moments.n_variance - moments.n_mean) / moments.n_mean


def robertson_bound(n_mean, rep: SpinRepresentation):
    """(1/16)(1 - <n>/j)^2, i.e. |<[x, y]>|^2 / 4 with [x, y] = i S_3 / 2j."""
    return (1.0 - np.asarray(n_mean) / rep.j) ** 2 / 16.0


def quadrature_variances(moments: FieldMoments, rep: SpinRepresentation) -> QuadratureVariances:
    """Variances of x = S_x/sqrt(2j) and y = S_y/sqrt(2j).

    <x^2> = (1/2j)(1/4)<S+S- + S-S+ + S+^2 + S-^2>, using S-S+ = S+S- - 2 S_3.
    """
    vx, vy = _variances(
        moments.n_mean, moments.splus_sminus_mean, moments.splus_mean, moments.splus2_mean, rep
    )
    return QuadratureVariances(float(vx), float(vy), float(robertson_bound(moments.n_mean, rep)))


def _variances(n_mean, spsm, splus, splus2, rep: SpinRepresentation):
    s3 = np.asarray(n_mean) - rep.j
    sym = 0.5 * np.asarray(spsm) - 0.5 * s3  # (1/4)<S+S- + S-S+>
    splus = np.asarray(splus)
    splus2 = np.asarray(splus2)
    vx = (sym + 0.5 * splus2.real - splus.real**2) / rep.two_j
    vy = (sym - 0.5 * splus2.real - splus.imag**2) / rep.two_j
    return vx, vy


def quadrature_variances_printed(moments: FieldMoments, rep: SpinRepresentation) -> tuple[float, float]:
    """The literature expression without the S-S+ symmetrization term.

    Kept for comparison only: it gives 0 instead of 1/4 for the vacuum.
    """
    spsm = moments.splus_sminus_mean
    sp, sp2 = moments.splus_mean, moments.splus2_mean
    vx = (0.5 * spsm + 0.5 * sp2.real - sp.real**2) / rep.two_j
    vy = (0.5 * spsm - 0.5 * sp2.real - sp.imag**2) / rep.two_j
    return vx, vy


def standard_jcm_inversion(mean_n: float, delta: float, lam: float, t, n_max: int | None = None):
    """Inversion of the ordinary JCM, coherent field Poisson(mean_n), atom excited."""
    if not mean_n > 0:
        raise InvalidParameterError(f"mean photon number must be positive, got {mean_n}")
    if not lam > 0:
        raise InvalidParameterError(f"lambda must be positive, got {lam}")
    if n_max is None:
        n_max = poisson_cutoff(mean_n)
    tail = poisson.sf(n_max, mean_n)
    if tail >= POISSON_TAIL_TOL:
        raise TruncationError(f"n_max={n_max} leaves Poisson tail mass {tail:.3e}")
    n = np.arange(n_max + 1, dtype=float)
    weights = poisson.pmf(n, mean_n)
    gamma = np.sqrt(delta * delta + 4.0 * lam * lam * (n + 1.0))
    ratio = delta * delta / gamma**2
    out = _kernels.inversion_sum(weights, ratio, gamma, t)
    return float(out[0]) if np.ndim(t) == 0 else out


def find_revival_peak(func, t_lo: float, t_hi: float, dt: float = 0.01) -> tuple[float, float]:
    """Location and height of the maximum of ``func`` on [t_lo, t_hi].

    Scans a uniform grid, then refines with a parabola through the best point
    and its two neighbours.
    """
    ts = np.arange(t_lo, t_hi + 0.5 * dt, dt)
    ys = np.asarray(func(ts))
    k = int(np.argmax(ys))
    if 0 < k < ts.size - 1:
        y0, y1, y2 = ys[k - 1], ys[k], ys[k + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom < 0:
            shift = 0.5 * (y0 - y2) / denom
            t_peak = ts[k] + shift * dt
            return float(t_peak), float(y1 - 0.25 * (y0 - y2) * shift)
    return float(ts[k]), float(ys[k])


def series_records(times, table: np.ndarray, rep: SpinRepresentation, scale: float = 1.0) -> dict:
    """Observable columns from a ``_kernels.series_moments`` table."""
    k = _kernels
    n_mean = table[:, k.N_MEAN]
    var_n = table[:, k.N2_MEAN] - n_mean**2
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(n_mean > 0, (var_n - n_mean) / n_mean, np.nan)
    splus = table[:, k.SPLUS_RE] + 1j * table[:, k.SPLUS_IM]
    splus2 = table[:, k.SPLUS2_RE] + 1j * table[:, k.SPLUS2_IM]
    vx, vy = _variances(n_mean, table[:, k.SPSM], splus, splus2, rep)
    return {
        "t": np.asarray(times) * scale,
        "sigma3": table[:, k.SIGMA3],
        "q_mandel": q,
        "var_x": vx,
        "var_y": vy,
        "robertson_bound": robertson_bound(n_mean, rep),
        "n_mean": n_mean,
    }
