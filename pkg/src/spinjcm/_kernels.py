"""Hot loops over (time, excitation number).

Every kernel exists twice: a numba ``@njit`` version and a vectorized numpy
version.  The numba path is used when numba imports and ``SPINJCM_DISABLE_NUMBA``
is unset (or "0"); both paths are importable regardless so they can be
compared directly.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_flag = os.environ.get("SPINJCM_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = numba is not None and _flag in ("", "0", "false", "no")

# columns of the per-time moment table
SIGMA3, N_MEAN, N2_MEAN, SPLUS_RE, SPLUS_IM, SPLUS2_RE, SPLUS2_IM, SPSM = range(8)
N_COLUMNS = 8

# rows of a (Tc, d) block evaluated at once by the numpy path
_CHUNK_ELEMENTS = 1 << 21


def _chunks(n_times: int, dim: int):
    step = max(1, _CHUNK_ELEMENTS // max(dim, 1))
    for start in range(0, n_times, step):
        yield slice(start, min(start + step, n_times))


# ---------------------------------------------------------------------------
# inversion sum:  sum_n w_n [r_n + (1 - r_n) cos(G_n t)]


def inversion_sum_numpy(weights, ratio, gamma, times):
    times = np.asarray(times, dtype=float)
    out = np.empty(times.size)
    const = np.dot(weights, ratio)
    amp = weights * (1.0 - ratio)
    for sl in _chunks(times.size, gamma.size):
        out[sl] = const + np.cos(np.outer(times[sl], gamma)) @ amp
    return out


def _inversion_sum_py(weights, ratio, gamma, times):
    out = np.empty(times.size)
    for k in numba.prange(times.size):
        t = times[k]
        acc = 0.0
        for n in range(gamma.size):
            r = ratio[n]
            acc += weights[n] * (r + (1.0 - r) * np.cos(gamma[n] * t))
        out[k] = acc
    return out


# ---------------------------------------------------------------------------
# closed-form amplitudes of the 2x2 blocks at many times


def closed_form_numpy(a0, b0, detune, gamma, coupling, times):
    """Rows of a(t), b(t) for each t in ``times``; ``coupling`` is 2 lambda c_n."""
    times = np.asarray(times, dtype=float)
    d = a0.size
    a_out = np.empty((times.size, d), dtype=complex)
    b_out = np.empty((times.size, d), dtype=complex)
    for sl in _chunks(times.size, d):
        a_out[sl], b_out[sl] = _closed_form_block(a0, b0, detune, gamma, coupling, times[sl])
    return a_out, b_out


def _closed_form_block(a0, b0, detune, gamma, coupling, t):
    half_t = 0.5 * t[:, None]
    x = gamma * half_t
    cos_ = np.cos(x)
    # sin(G t/2)/G, finite as G -> 0; np.sinc would round-trip through pi
    safe = np.where(gamma > 0, gamma, 1.0)
    sin_over = np.where(gamma > 0, np.sin(x) / safe, half_t)
    u = detune * sin_over
    v = coupling * sin_over
    rot = np.exp(0.5j * detune * t[:, None])
    a = (a0 * (cos_ - 1j * u) - 1j * v * b0) * rot
    b = (b0 * (cos_ + 1j * u) - 1j * v * a0) * np.conj(rot)
    return a, b


def _closed_form_py(a0, b0, detune, gamma, coupling, times):
    d = a0.size
    a_out = np.empty((times.size, d), dtype=np.complex128)
    b_out = np.empty((times.size, d), dtype=np.complex128)
    for k in numba.prange(times.size):
        t = times[k]
        for n in range(d):
            an, bn = _block(a0[n], b0[n], detune[n], gamma[n], coupling[n], t)
            a_out[k, n] = an
            b_out[k, n] = bn
    return a_out, b_out


def _block_py(a0, b0, detune, gamma, coupling, t):
    x = 0.5 * gamma * t
    c = np.cos(x)
    if gamma == 0.0:
        so = 0.5 * t
    else:
        so = np.sin(x) / gamma
    u = detune * so
    v = coupling * so
    ph = 0.5 * detune * t
    rot = complex(np.cos(ph), np.sin(ph))
    a = (a0 * complex(c, -u) - 1j * v * b0) * rot
    b = (b0 * complex(c, u) - 1j * v * a0) * rot.conjugate()
    return a, b


# ---------------------------------------------------------------------------
# field moments along a time grid, without storing the (T, d) amplitudes


def series_moments_numpy(a0, b0, detune, gamma, coupling, rate_a, rate_b, splus_coeff, times):
    """Per-time table of the columns listed at the top of this module.

    ``rate_a``/``rate_b`` are the free-evolution phase rates applied on top of
    the interaction-picture amplitudes (zeros for the interaction picture).
    ``splus_coeff[k]`` is <k+1|S_+|k>.
    """
    times = np.asarray(times, dtype=float)
    d = a0.size
    nn = np.arange(d, dtype=float)
    sps = np.concatenate(([0.0], splus_coeff[:-1] ** 2))
    s1 = splus_coeff[:-1]
    s2 = splus_coeff[:-2] * splus_coeff[1:-1]
    out = np.empty((times.size, N_COLUMNS))
    for sl in _chunks(times.size, d):
        t = times[sl]
        a, b = _closed_form_block(a0, b0, detune, gamma, coupling, t)
        a = a * np.exp(-1j * np.outer(t, rate_a))
        b = b * np.exp(-1j * np.outer(t, rate_b))
        pa = np.abs(a) ** 2
        pb = np.abs(b) ** 2
        # b_n sits on field level n + 1
        fb = np.zeros_like(b)
        fb[:, 1:] = b[:, :-1]
        pf = pa.copy()
        pf[:, 1:] += pb[:, :-1]
        sp = (np.conj(a[:, 1:]) * a[:, :-1] + np.conj(fb[:, 1:]) * fb[:, :-1]) @ s1
        sp2 = (np.conj(a[:, 2:]) * a[:, :-2] + np.conj(fb[:, 2:]) * fb[:, :-2]) @ s2
        out[sl, SIGMA3] = pa.sum(axis=1) - pb.sum(axis=1)
        out[sl, N_MEAN] = pf @ nn
        out[sl, N2_MEAN] = pf @ (nn * nn)
        out[sl, SPLUS_RE] = sp.real
        out[sl, SPLUS_IM] = sp.imag
        out[sl, SPLUS2_RE] = sp2.real
        out[sl, SPLUS2_IM] = sp2.imag
        out[sl, SPSM] = pf @ sps
    return out


def _series_moments_py(a0, b0, detune, gamma, coupling, rate_a, rate_b, splus_coeff, times):
    d = a0.size
    out = np.empty((times.size, N_COLUMNS))
    for k in numba.prange(times.size):
        t = times[k]
        # field-level vectors of the |+> and |-> branches
        fa = np.empty(d, dtype=np.complex128)
        fb = np.zeros(d, dtype=np.complex128)
        s3 = 0.0
        for n in range(d):
            an, bn = _block(a0[n], b0[n], detune[n], gamma[n], coupling[n], t)
            pha = rate_a[n] * t
            phb = rate_b[n] * t
            an = an * complex(np.cos(pha), -np.sin(pha))
            bn = bn * complex(np.cos(phb), -np.sin(phb))
            fa[n] = an
            if n + 1 < d:
                fb[n + 1] = bn
            s3 += an.real * an.real + an.imag * an.imag - (bn.real * bn.real + bn.imag * bn.imag)
        n1 = 0.0
        n2 = 0.0
        spsm = 0.0
        sp = 0j
        sp2 = 0j
        for n in range(d):
            p = fa[n].real ** 2 + fa[n].imag ** 2 + fb[n].real ** 2 + fb[n].imag ** 2
            n1 += n * p
            n2 += n * n * p
            if n > 0:
                spsm += splus_coeff[n - 1] ** 2 * p
            if n + 1 < d:
                sp += splus_coeff[n] * (fa[n + 1].conjugate() * fa[n] + fb[n + 1].conjugate() * fb[n])
            if n + 2 < d:
                sp2 += (splus_coeff[n] * splus_coeff[n + 1]) * (
                    fa[n + 2].conjugate() * fa[n] + fb[n + 2].conjugate() * fb[n]
                )
        out[k, SIGMA3] = s3
        out[k, N_MEAN] = n1
        out[k, N2_MEAN] = n2
        out[k, SPLUS_RE] = sp.real
        out[k, SPLUS_IM] = sp.imag
        out[k, SPLUS2_RE] = sp2.real
        out[k, SPLUS2_IM] = sp2.imag
        out[k, SPSM] = spsm
    return out


if numba is not None:
    # the bundled TBB is often too old; avoid the warning it triggers
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    _jit = numba.njit(cache=True, parallel=True, fastmath=False)
    _block = numba.njit(cache=True, inline="always")(_block_py)
    inversion_sum_numba = _jit(_inversion_sum_py)
    closed_form_numba = _jit(_closed_form_py)
    series_moments_numba = _jit(_series_moments_py)
else:  # pragma: no cover
    inversion_sum_numba = closed_form_numba = series_moments_numba = None


def _prepare(*arrays):
    return tuple(np.ascontiguousarray(x) for x in arrays)


def inversion_sum(weights, ratio, gamma, times):
    args = _prepare(
        np.asarray(weights, float), np.asarray(ratio, float), np.asarray(gamma, float),
        np.atleast_1d(np.asarray(times, float)),
    )
    if USE_NUMBA:
        return inversion_sum_numba(*args)
    return inversion_sum_numpy(*args)


def closed_form(a0, b0, detune, gamma, coupling, times):
    args = _prepare(
        np.asarray(a0, complex), np.asarray(b0, complex), np.asarray(detune, float),
        np.asarray(gamma, float), np.asarray(coupling, float),
        np.atleast_1d(np.asarray(times, float)),
    )
    if USE_NUMBA:
        return closed_form_numba(*args)
    return closed_form_numpy(*args)


def series_moments(a0, b0, detune, gamma, coupling, rate_a, rate_b, splus_coeff, times):
    args = _prepare(
        np.asarray(a0, complex), np.asarray(b0, complex), np.asarray(detune, float),
        np.asarray(gamma, float), np.asarray(coupling, float),
        np.asarray(rate_a, float), np.asarray(rate_b, float),
        np.asarray(splus_coeff, float), np.atleast_1d(np.asarray(times, float)),
    )
    if USE_NUMBA:
        return series_moments_numba(*args)
    return series_moments_numpy(*args)
