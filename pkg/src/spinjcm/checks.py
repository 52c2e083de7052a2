"""Numerical acceptance checks, shared by ``jcm check`` and the test suite.

Each check returns a :class:`CheckResult`; none of them raise on failure.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coherent_states import (
    CoherentStateSpec,
    coherent_amplitudes,
    photon_distribution,
    poisson_reference,
    total_variation,
)
from .dynamics import (
    JointState,
    ModelParams,
    evolve_closed_form_grid,
    evolve_ode_grid,
    field_moments,
    initial_state,
)
from .observables import (
    SQUEEZING_THRESHOLD,
    find_revival_peak,
    inversion_closed_form,
    mandel_q,
    revival_time_estimate,
    standard_jcm_inversion,
)
from .runner import figure_preset, run
from .spin_algebra import SpinRepresentation, commutator_defect, kerr_spectrum, number_from_bdag_b

MEAN_N = 20.0
REVIVAL_REL_TOL = 0.05
# |sigma3| ceiling inside the collapse window, and that window in lambda t
COLLAPSE_LEVEL = 0.1
COLLAPSE_WINDOW = (6.0, 15.0)
REVIVAL_WINDOW = (15.0, 45.0)
CONTRACTION_TWO_J = 10**6
CONTRACTION_TOL = 1e-2


@dataclass(frozen=True)
class CheckResult:
    key: str
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.key:<3} {self.title}: {self.detail} ({self.seconds:.2f}s)"


def _timed(key: str, title: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    start = time.perf_counter()
    passed, detail = fn()
    return CheckResult(key, title, bool(passed), detail, time.perf_counter() - start)


def random_joint_state(two_j: int, rng: np.random.Generator) -> JointState:
    d = two_j + 1
    a = rng.normal(size=d) + 1j * rng.normal(size=d)
    b = rng.normal(size=d) + 1j * rng.normal(size=d)
    b[-1] = 0.0
    norm = math.sqrt(np.vdot(a, a).real + np.vdot(b, b).real)
    return JointState(a / norm, b / norm)


def coherent_excited(two_j: int, chi: float, phi: float = 0.0) -> JointState:
    rep = SpinRepresentation(two_j)
    return initial_state(rep, coherent_amplitudes(rep, CoherentStateSpec(chi, phi)), "excited")


# ---------------------------------------------------------------------------


def check_oracle_equivalence(seed: int = 2024, states_per_rep: int = 3) -> CheckResult:
    def body():
        rng = np.random.default_rng(seed)
        times = np.linspace(0.0, 50.0, 26)
        worst = 0.0
        for two_j in (4, 20, 50):
            rep = SpinRepresentation(two_j)
            for params in (ModelParams(1.0, 1.0, 1.0, rep), ModelParams(1.0, 1.7, 0.8, rep)):
                for _ in range(states_per_rep):
                    s0 = random_joint_state(two_j, rng)
                    a1, b1 = evolve_closed_form_grid(params, s0, times)
                    a2, b2 = evolve_ode_grid(params, s0, times)
                    worst = max(worst, np.abs(a1 - a2).max(), np.abs(b1 - b2).max())
        return worst < 1e-8, f"max |closed form - ODE| = {worst:.2e} (tol 1e-8)"

    return _timed("1", "closed form vs ODE oracle", body)


def _collapse_and_peak(func, reference: float) -> tuple[bool, str]:
    lo, hi = COLLAPSE_WINDOW
    ts = np.arange(lo, hi, 0.01)
    collapse = float(np.abs(func(ts)).max())
    t_peak, height = find_revival_peak(func, *REVIVAL_WINDOW)
    rel = abs(t_peak - reference) / reference
    passed = collapse < COLLAPSE_LEVEL and rel <= REVIVAL_REL_TOL and height > COLLAPSE_LEVEL
    return passed, (
        f"collapse max|s3|={collapse:.3f} on [{lo:g},{hi:g}], revival peak at {t_peak:.3f} "
        f"(height {height:.3f}) vs {reference:.3f}: {100 * rel:.2f}% (tol 5%)"
    )


def check_standard_revival() -> CheckResult:
    def body():
        ref = 2.0 * math.pi * math.sqrt(MEAN_N)
        return _collapse_and_peak(lambda ts: standard_jcm_inversion(MEAN_N, 0.0, 1.0, ts), ref)

    return _timed("2", "standard JCM revival near 2 pi sqrt(20)", body)


def check_finite_revival() -> CheckResult:
    def body():
        params = ModelParams.resonant(1000)
        chi = MEAN_N / 1000
        ref = revival_time_estimate(params, chi)
        return _collapse_and_peak(lambda ts: inversion_closed_form(params, chi, ts), ref)

    return _timed("3", "2j=1000 revival vs estimate", body)


def check_trapping() -> CheckResult:
    def body():
        params = ModelParams.resonant(50)
        times = np.linspace(0.0, 60.0, 3000)
        closed = inversion_closed_form(params, 1.0, times)
        a, b = evolve_closed_form_grid(params, coherent_excited(50, 1.0), times)
        evolved = (np.abs(a) ** 2).sum(axis=1) - (np.abs(b) ** 2).sum(axis=1)
        worst = float(max(np.abs(closed - 1).max(), np.abs(evolved - 1).max()))
        return worst <= 1e-12, f"max |<s3> - 1| = {worst:.1e} over {times.size} samples (tol 1e-12)"

    return _timed("4", "chi=1 trapping", body)


def check_photon_statistics() -> CheckResult:
    def body():
        worst = 0.0
        for two_j in (1000, 100, 50):
            chi = MEAN_N / two_j
            q0 = mandel_q(field_moments(coherent_excited(two_j, chi), SpinRepresentation(two_j)))
            worst = max(worst, abs(q0 + chi))
        series = run(figure_preset("figure3c")[0])
        t, q = series.columns["t"], series.columns["q_mandel"]
        window = (t >= 2.0) & (t <= 60.0)
        frac = float(np.mean(q[window] < 0))
        passed = worst <= 1e-12 and frac > 0.9
        return passed, f"max |Q(0) + chi| = {worst:.1e} (tol 1e-12); 2j=50 fraction Q<0 on [2,60] = {frac:.3f} (> 0.9)"

    return _timed("5", "Mandel Q", body)


def check_squeezing() -> CheckResult:
    def body():
        notes = []
        passed = True
        for config in figure_preset("figure4"):
            cols = run(config).columns
            t, vx, vy, bound = cols["t"], cols["var_x"], cols["var_y"], cols["robertson_bound"]
            short = t <= 5.0
            late = (t >= 30.0) & (t <= 60.0)
            dips = bool(np.any(vx[short] < SQUEEZING_THRESHOLD))
            vy_ok = bool(np.all(vy[short] >= SQUEEZING_THRESHOLD - 1e-10))
            late_ok = bool(np.all(vx[late] >= SQUEEZING_THRESHOLD) and np.all(vy[late] >= SQUEEZING_THRESHOLD))
            slack = float(np.min(vx * vy - bound))
            rob_ok = slack >= -1e-10
            passed &= dips and vy_ok and late_ok and rob_ok
            notes.append(
                f"2j={config.two_j}: min var_x[0,5]={vx[short].min():.4f}, min var_y[0,5]={vy[short].min():.4f}, "
                f"min var[30,60]={min(vx[late].min(), vy[late].min()):.3f}, min(vx*vy-bound)={slack:.1e}"
            )
        return passed, "; ".join(notes)

    return _timed("6", "quadrature squeezing structure", body)


def check_commutator() -> CheckResult:
    def body():
        worst_ratio = 0.0
        for two_j in (1, 2, 3, 10, 50, 200, 1000, 2000):
            defect = float(np.abs(commutator_defect(SpinRepresentation(two_j))).max())
            worst_ratio = max(worst_ratio, defect / (1e-10 * two_j))
        return worst_ratio <= 1.0, f"max defect / (1e-10 * 2j) = {worst_ratio:.1e} for 2j <= 2000"

    return _timed("7a", "[b, b^dag] = 1 - n/j", body)


def check_degeneracy() -> CheckResult:
    def body():
        worst = 0.0
        for two_j in (1, 2, 7, 50, 1000):
            e = kerr_spectrum(SpinRepresentation(two_j), 1.3).energies
            worst = max(worst, float(np.max(np.abs(e - e[::-1]) / np.abs(e).max())))
        return worst <= 1e-12, f"max relative |E(n) - E(2j-n)| = {worst:.1e}"

    return _timed("7b", "Kerr degeneracy", body)


def check_number_relation() -> CheckResult:
    def body():
        failures = []
        lower_worst = 0.0
        for two_j in range(1, 201):
            rep = SpinRepresentation(two_j)
            for n in range(two_j + 1):
                eig = n * (two_j + 1 - n) / two_j  # b^dag b on |n>
                got = number_from_bdag_b(rep, eig)
                if 2 * n <= two_j:
                    lower_worst = max(lower_worst, abs(got - n))
                if abs(got - n) > 1e-9:
                    failures.append((two_j, n, got))
        if not failures:
            return True, "recovers n for every level, 2j <= 200"
        two_j, n, got = failures[0]
        return False, (
            f"{len(failures)} levels not recovered (first: 2j={two_j}, n={n} -> {got:.6g}); "
            f"eigenvalue of b^dag b is shared by n and 2j+1-n, formula returns the lower one; "
            f"lower-half max error {lower_worst:.1e}"
        )

    return _timed("7c", "number operator from b^dag b", body)


def check_binomial() -> CheckResult:
    def body():
        worst_norm = worst_sym = worst_mom = 0.0
        for two_j in (1, 4, 50, 1000, 10**4):
            rep = SpinRepresentation(two_j)
            n = rep.n
            for chi in (0.0, 0.002, 0.02, 0.25, 0.4, 0.5, 0.75, 0.98, 1.0):
                p = photon_distribution(rep, chi).probs
                if np.any(p < 0):
                    return False, f"negative probability at 2j={two_j}, chi={chi}"
                worst_norm = max(worst_norm, abs(p.sum() - 1.0))
                # reflection only compares equal inputs when 1 - (1 - chi) == chi in floats
                if 1.0 - (1.0 - chi) == chi:
                    q = photon_distribution(rep, 1.0 - chi).probs
                    nz = p > 0
                    worst_sym = max(worst_sym, float(np.max(np.abs(p[nz] - q[::-1][nz]) / p[nz])))
                mean, var = two_j * chi, two_j * chi * (1 - chi)
                m1 = float(p @ n)
                m2 = float(p @ (n - mean) ** 2)
                worst_mom = max(worst_mom, abs(m1 - mean) / max(mean, 1.0), abs(m2 - var) / max(var, 1.0))
        passed = worst_norm <= 1e-12 and worst_sym <= 1e-15 and worst_mom <= 1e-10
        return passed, f"|sum-1|={worst_norm:.1e}, symmetry rel={worst_sym:.1e}, moments rel={worst_mom:.1e}"

    return _timed("7d", "binomial distribution", body)


def check_poisson_limit() -> CheckResult:
    def body():
        two_j = 10**4
        p = photon_distribution(SpinRepresentation(two_j), MEAN_N / two_j).probs
        ref = poisson_reference(MEAN_N, 80).probs
        tv = total_variation(p, ref)
        return tv < 0.01, f"TV(Binomial(1e4, 0.002), Poisson(20)) = {tv:.2e} (tol 0.01)"

    return _timed("7e", "binomial -> Poisson", body)


def check_contraction(two_j: int = CONTRACTION_TWO_J) -> CheckResult:
    def body():
        ts = np.linspace(0.0, 30.0, 3001)
        ref = standard_jcm_inversion(MEAN_N, 0.0, 1.0, ts)
        devs = {}
        for tj in (10**5, two_j):
            spin = inversion_closed_form(ModelParams.resonant(tj), MEAN_N / tj, ts)
            devs[tj] = float(np.abs(spin - ref).max())
        return devs[two_j] < CONTRACTION_TOL, (
            f"max |spin - standard| on [0,30]: 2j=1e5 -> {devs[10**5]:.2e}, "
            f"2j={two_j:.0e} -> {devs[two_j]:.2e} (tol 1e-2)"
        )

    return _timed("8", "contraction to the standard JCM", body)


ALL_CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_oracle_equivalence,
    check_standard_revival,
    check_finite_revival,
    check_trapping,
    check_photon_statistics,
    check_squeezing,
    check_commutator,
    check_degeneracy,
    check_number_relation,
    check_binomial,
    check_poisson_limit,
    check_contraction,
)


def run_all() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]
