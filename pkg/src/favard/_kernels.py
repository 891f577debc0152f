"""Hot numeric loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports and ``FAVARD_DISABLE_NUMBA`` is
unset (or ``0``). Both paths are always importable so the benchmark and the
parity tests can call them side by side.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the bundled TBB is too old for numba and only produces a warning
        numba.config.THREADING_LAYER = "workqueue"
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("FAVARD_DISABLE_NUMBA", "0").lower() in ("", "0", "false", "no")

# below this |delta| the closed-form kernels switch to their Taylor series
COLLISION = 1e-9
_CHUNK_ELEMS = 1 << 22


# ---------------------------------------------------------------- numpy path


def disc_stats_numpy(re, im, radius, thetas):
    """Per-angle (support, l1, l2_sq, max_count) of equal-radius discs projected on each direction."""
    re = np.ascontiguousarray(re, dtype=np.float64)
    im = np.ascontiguousarray(im, dtype=np.float64)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    n = re.size
    out_sup = np.empty(thetas.size)
    out_l1 = np.empty(thetas.size)
    out_l2 = np.empty(thetas.size)
    out_max = np.empty(thetas.size, dtype=np.int64)
    step = max(1, _CHUNK_ELEMS // max(1, 2 * n))
    ones = np.concatenate([np.ones(n, dtype=np.int64), -np.ones(n, dtype=np.int64)])
    for a0 in range(0, thetas.size, step):
        t = thetas[a0 : a0 + step]
        p = np.cos(t)[:, None] * re[None, :] + np.sin(t)[:, None] * im[None, :]
        p.sort(axis=1)
        ev = np.concatenate([p - radius, p + radius], axis=1)
        order = np.argsort(ev, axis=1, kind="stable")
        pos = np.take_along_axis(ev, order, axis=1)
        cnt = np.cumsum(ones[order], axis=1)[:, :-1]
        w = np.diff(pos, axis=1)
        live = (w > 0) & (cnt > 0)
        out_sup[a0 : a0 + step] = np.where(live, w, 0.0).sum(axis=1)
        out_l1[a0 : a0 + step] = np.where(live, cnt * w, 0.0).sum(axis=1)
        out_l2[a0 : a0 + step] = np.where(live, cnt * cnt * w, 0.0).sum(axis=1)
        out_max[a0 : a0 + step] = np.where(live, cnt, 0).max(axis=1)
    return out_sup, out_l1, out_l2, out_max


def mc_hits_numpy(re, im, radius, thetas, offsets):
    """Boolean array: does the line {p = offset} in direction theta meet any disc."""
    re = np.asarray(re, dtype=np.float64)
    im = np.asarray(im, dtype=np.float64)
    hits = np.empty(thetas.size, dtype=np.bool_)
    step = max(1, _CHUNK_ELEMS // max(1, re.size))
    for s0 in range(0, thetas.size, step):
        t = thetas[s0 : s0 + step]
        p = np.cos(t)[:, None] * re[None, :] + np.sin(t)[:, None] * im[None, :]
        hits[s0 : s0 + step] = (np.abs(p - offsets[s0 : s0 + step, None]) <= radius).any(axis=1)
    return hits


def _l2_kernel_numpy(d):
    small = np.abs(d) < COLLISION
    safe = np.where(small, 1.0, d)
    k = np.where(small, 1.0 - d * d / 6.0, np.sin(safe) / safe) + 1j * np.where(
        small, d / 2.0, 2.0 * np.sin(safe / 2.0) ** 2 / safe
    )
    return k


def _hat_kernel_numpy(d):
    small = np.abs(d) < COLLISION
    half = np.where(small, 1.0, d / 2.0)
    return np.where(small, 1.0 - d * d / 12.0, (np.sin(half) / half) ** 2)


def pair_sum_numpy(coef, freq, kind):
    """sum_{j,k} c_j conj(c_k) K(a_j - a_k) for kind 0 (unit interval) or 1 (triangle weight)."""
    coef = np.asarray(coef, dtype=np.complex128)
    freq = np.asarray(freq, dtype=np.float64)
    d = freq[:, None] - freq[None, :]
    kern = _l2_kernel_numpy(d) if kind == 0 else _hat_kernel_numpy(d)
    return float(np.real(np.sum((coef[:, None] * np.conj(coef)[None, :]) * kern)))


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _disc_stats_nb(re, im, radius, thetas):
        na = thetas.size
        n = re.size
        sup = np.empty(na)
        l1 = np.empty(na)
        l2 = np.empty(na)
        mx = np.empty(na, dtype=np.int64)
        for a in prange(na):
            c = np.cos(thetas[a])
            s = np.sin(thetas[a])
            p = np.empty(n)
            for i in range(n):
                p[i] = re[i] * c + im[i] * s
            p.sort()
            i = 0
            j = 0
            count = 0
            prev = p[0] - radius
            su = 0.0
            s1 = 0.0
            s2 = 0.0
            m = 0
            while j < n:
                if i < n and p[i] - radius < p[j] + radius:
                    x = p[i] - radius
                    step = 1
                    i += 1
                else:
                    x = p[j] + radius
                    step = -1
                    j += 1
                w = x - prev
                if w > 0.0 and count > 0:
                    su += w
                    s1 += count * w
                    s2 += count * count * w
                    if count > m:
                        m = count
                count += step
                prev = x
            sup[a] = su
            l1[a] = s1
            l2[a] = s2
            mx[a] = m
        return sup, l1, l2, mx

    @njit(cache=True, parallel=True)
    def _mc_hits_nb(re, im, radius, thetas, offsets):
        ns = thetas.size
        hits = np.zeros(ns, dtype=np.bool_)
        for k in prange(ns):
            c = np.cos(thetas[k])
            s = np.sin(thetas[k])
            t = offsets[k]
            for i in range(re.size):
                if abs(re[i] * c + im[i] * s - t) <= radius:
                    hits[k] = True
                    break
        return hits

    @njit(cache=True)
    def _pair_sum_nb(cre, cim, freq, kind):
        n = freq.size
        rows = np.zeros(n)
        for j in range(n):
            rows[j] = cre[j] * cre[j] + cim[j] * cim[j]
            acc = 0.0
            for k in range(j + 1, n):
                d = freq[j] - freq[k]
                # c_j conj(c_k)
                pr = cre[j] * cre[k] + cim[j] * cim[k]
                pi = cim[j] * cre[k] - cre[j] * cim[k]
                if kind == 0:
                    if abs(d) < COLLISION:
                        kr = 1.0 - d * d / 6.0
                        ki = d / 2.0
                    else:
                        kr = np.sin(d) / d
                        h = np.sin(d / 2.0)
                        ki = 2.0 * h * h / d
                    acc += 2.0 * (pr * kr - pi * ki)
                else:
                    if abs(d) < COLLISION:
                        kr = 1.0 - d * d / 12.0
                    else:
                        h = np.sin(d / 2.0) / (d / 2.0)
                        kr = h * h
                    acc += 2.0 * pr * kr
            rows[j] += acc
        return rows


def disc_stats_numba(re, im, radius, thetas):
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    return _disc_stats_nb(
        np.ascontiguousarray(re, dtype=np.float64), np.ascontiguousarray(im, dtype=np.float64), float(radius), thetas
    )


def mc_hits_numba(re, im, radius, thetas, offsets):
    return _mc_hits_nb(
        np.ascontiguousarray(re, dtype=np.float64),
        np.ascontiguousarray(im, dtype=np.float64),
        float(radius),
        np.ascontiguousarray(thetas, dtype=np.float64),
        np.ascontiguousarray(offsets, dtype=np.float64),
    )


def pair_sum_numba(coef, freq, kind):
    coef = np.asarray(coef, dtype=np.complex128)
    rows = _pair_sum_nb(
        np.ascontiguousarray(coef.real), np.ascontiguousarray(coef.imag), np.asarray(freq, dtype=np.float64), int(kind)
    )
    return float(np.sum(rows))


if USE_NUMBA:
    disc_stats = disc_stats_numba
    mc_hits = mc_hits_numba
    pair_sum = pair_sum_numba
else:
    disc_stats = disc_stats_numpy
    mc_hits = mc_hits_numpy
    pair_sum = pair_sum_numpy


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def set_threads(threads: int | None) -> None:
    """Cap numba's worker pool; a no-op on the numpy path."""
    if threads and USE_NUMBA:
        numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))
