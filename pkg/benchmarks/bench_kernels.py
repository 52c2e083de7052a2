"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

The numba functions are warmed up once before timing so compilation (or the
on-disk cache load) is not counted.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from spinjcm import _kernels as k
from spinjcm.coherent_states import CoherentStateSpec, coherent_amplitudes
from spinjcm.dynamics import (
    ModelParams,
    couplings,
    detunings,
    initial_state,
    rabi_frequencies,
    schrodinger_rates,
)
from spinjcm.spin_algebra import raising_coeffs

CASES = [(50, 3000), (1000, 3000), (10**4, 3000)]


def _series_args(two_j: int, steps: int):
    p = ModelParams.resonant(two_j)
    rep = p.rep
    s = initial_state(rep, coherent_amplitudes(rep, CoherentStateSpec(min(1.0, 20 / two_j))))
    return (
        s.a, s.b, detunings(p), rabi_frequencies(p), couplings(p), *schrodinger_rates(p),
        np.sqrt(two_j) * raising_coeffs(rep), np.linspace(0.0, 60.0, steps),
    )


def _best(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    opts = parser.parse_args()
    if k.series_moments_numba is None:
        raise SystemExit("numba is not installed")

    print(f"{'kernel':<16}{'2j':>8}{'steps':>8}{'numpy s':>12}{'numba s':>12}{'speedup':>10}{'max diff':>12}")
    for two_j, steps in CASES:
        args = _series_args(two_j, steps)
        k.series_moments_numba(*args)
        t_np = _best(k.series_moments_numpy, args, opts.repeat)
        t_nb = _best(k.series_moments_numba, args, opts.repeat)
        diff = np.max(np.abs(k.series_moments_numpy(*args) - k.series_moments_numba(*args)))
        print(f"{'series_moments':<16}{two_j:>8}{steps:>8}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}{diff:>12.1e}")

        a0, b0, om, g, c, *_, ts = args
        cf = (a0, b0, om, g, c, ts)
        k.closed_form_numba(*cf)
        t_np = _best(k.closed_form_numpy, cf, opts.repeat)
        t_nb = _best(k.closed_form_numba, cf, opts.repeat)
        print(f"{'closed_form':<16}{two_j:>8}{steps:>8}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
