"""Directional projections of disc sets and the Favard length built on them.

Convention: the scalar projection of a point z onto direction theta is
``Re(z * e^{-i theta})``, so the three level-0 gasket centers land exactly on
the direction triple (c1, c2, c3) used by :mod:`favard.expsum`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .config import DEFAULTS, CapacityError
from .geometry import DiscSet, build

COARSE_SCAN_ANGLES = 64
MC_BLOCK = 1 << 14


@dataclass(frozen=True)
class IntervalSet:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        if np.any(self.hi < self.lo):
            raise ValueError("interval with hi < lo")

    def __len__(self) -> int:
        return self.lo.size

    @property
    def intervals(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.lo, self.hi)]

    @classmethod
    def from_pairs(cls, pairs) -> "IntervalSet":
        arr = np.asarray(list(pairs), dtype=np.float64).reshape(-1, 2)
        return cls(arr[:, 0].copy(), arr[:, 1].copy())

    def normalized(self) -> "IntervalSet":
        """Sorted, pairwise-disjoint union; touching intervals are merged."""
        if self.lo.size == 0:
            return self
        order = np.argsort(self.lo, kind="stable")
        lo, hi = self.lo[order], self.hi[order]
        reach = np.maximum.accumulate(hi)
        starts = np.concatenate([[True], lo[1:] > reach[:-1]])
        idx = np.flatnonzero(starts)
        ends = np.concatenate([idx[1:] - 1, [lo.size - 1]])
        return IntervalSet(lo[idx], reach[ends])

    def measure(self) -> float:
        n = self.normalized()
        return float(np.sum(n.hi - n.lo))

    def contains_interval(self, a: float, b: float) -> bool:
        n = self.normalized()
        k = np.searchsorted(n.lo, a, side="right") - 1
        return bool(k >= 0 and n.hi[k] >= b)


@dataclass(frozen=True)
class MultiplicityProfile:
    """The step function counting overlapping intervals: counts[i] holds on (breakpoints[i], breakpoints[i+1])."""

    breakpoints: np.ndarray
    counts: np.ndarray

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def support_length(self) -> float:
        return float(np.sum(np.where(self.counts > 0, self.widths, 0.0)))

    @property
    def l1(self) -> float:
        return float(np.sum(self.counts * self.widths))

    @property
    def l2_sq(self) -> float:
        return float(np.sum(self.counts.astype(np.float64) ** 2 * self.widths))

    @property
    def max_count(self) -> int:
        w = self.widths
        live = self.counts[w > 0]
        return int(live.max()) if live.size else 0

    def argmax_point(self) -> float:
        """Midpoint of the first positive-width cell carrying max_count."""
        w = self.widths
        c = np.where(w > 0, self.counts, -1)
        i = int(np.argmax(c))
        return float(0.5 * (self.breakpoints[i] + self.breakpoints[i + 1]))


@dataclass
class FavardEstimate:
    value: float
    method: str
    count: int
    error_indicator: float
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["angle_count" if self.method == "quadrature" else "sample_count"] = d.pop("count")
        return d


def project_set(s: DiscSet, theta: float) -> IntervalSet:
    """One interval [p - r, p + r] per disc, in center order."""
    if len(s) == 0:
        raise ValueError("empty disc set")
    p = s.centers.real * math.cos(theta) + s.centers.imag * math.sin(theta)
    return IntervalSet(p - s.radius, p + s.radius)


def profile(iv: IntervalSet) -> MultiplicityProfile:
    """Event-point sweep over the interval endpoints."""
    n = len(iv)
    if n == 0:
        return MultiplicityProfile(np.zeros(1), np.zeros(0, dtype=np.int64))
    ev = np.concatenate([iv.lo, iv.hi])
    step = np.concatenate([np.ones(n, dtype=np.int64), -np.ones(n, dtype=np.int64)])
    order = np.argsort(ev, kind="stable")
    pos = ev[order]
    counts = np.cumsum(step[order])[:-1]
    # collapse coincident breakpoints; the cell to the left of a touch point wins
    keep = np.concatenate([pos[1:] > pos[:-1], [True]])
    bp_idx = np.flatnonzero(keep)
    bps = pos[bp_idx]
    cells = counts[bp_idx[:-1]] if bp_idx.size > 1 else np.zeros(0, dtype=np.int64)
    return MultiplicityProfile(bps, cells)


def direction_stats(s: DiscSet, thetas) -> dict[str, np.ndarray]:
    """Vectorized per-angle support, l1, l2_sq and max_count (hot path)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    if len(s) * thetas.size > DEFAULTS.work_budget * 4:
        raise CapacityError(f"{len(s)} discs x {thetas.size} angles exceeds work budget {DEFAULTS.work_budget * 4}")
    sup, l1, l2, mx = _kernels.disc_stats(s.centers.real, s.centers.imag, s.radius, thetas)
    return {"theta": thetas, "support": sup, "l1": l1, "l2_sq": l2, "max_count": mx}


def midpoint_angles(count: int) -> np.ndarray:
    return (np.arange(count) + 0.5) * (math.pi / count)


def _quadrature_value(s: DiscSet, angles: int) -> float:
    sup = direction_stats(s, midpoint_angles(angles))["support"]
    return float(np.sum(sup) / angles)


def favard_quadrature(s: DiscSet, angles: int) -> FavardEstimate:
    """Midpoint rule for pi^-1 * int_0^pi |supp f_theta| dtheta with a grid-halving error indicator."""
    if angles < 2:
        raise ValueError("angles must be >= 2")
    fine = _quadrature_value(s, angles)
    coarse = _quadrature_value(s, angles // 2)
    return FavardEstimate(fine, "quadrature", angles, abs(fine - coarse))


def mc_bound(s: DiscSet) -> float:
    """Half-width L of the offset window; every projected disc lies in [-L, L] for every direction."""
    t = np.arange(COARSE_SCAN_ANGLES) * (math.pi / COARSE_SCAN_ANGLES)
    p = np.abs(np.cos(t)[:, None] * s.centers.real[None, :] + np.sin(t)[:, None] * s.centers.imag[None, :])
    # the scan sees every direction to within pi/128, which loses at most a cos factor
    reach = float(p.max()) / math.cos(math.pi / (2 * COARSE_SCAN_ANGLES))
    return reach + 2.0 * s.radius


def buffon_mc(s: DiscSet, samples: int, seed: int) -> FavardEstimate:
    """Random-line hitting estimate of the Favard length.

    Lines are drawn with theta uniform on [0, pi) and offset uniform on
    [-L, L]; the hit fraction times 2L has expectation equal to the Favard
    length. Samples are generated in fixed-size blocks, each from its own
    child of ``SeedSequence(seed)``, so the estimate does not depend on how
    the work is split.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    L = mc_bound(s)
    nblocks = -(-samples // MC_BLOCK)
    children = np.random.SeedSequence(seed).spawn(nblocks)
    hits = 0
    for b, child in enumerate(children):
        size = min(MC_BLOCK, samples - b * MC_BLOCK)
        rng = np.random.default_rng(child)
        th = rng.uniform(0.0, math.pi, size)
        off = rng.uniform(-L, L, size)
        hits += int(np.count_nonzero(_kernels.mc_hits(s.centers.real, s.centers.imag, s.radius, th, off)))
    frac = hits / samples
    se = 2.0 * L * math.sqrt(frac * (1.0 - frac) / samples)
    return FavardEstimate(2.0 * L * frac, "monte-carlo", samples, se, seed=seed, extra={"offset_bound": L, "hits": hits})


def bad_direction_measure(family: str, n_max_level: int, K: int, angles: int) -> float:
    """Grid measure of {theta in [0, pi): max_{n <= N} max_count(f_{n,theta}) <= K}."""
    if K < 1:
        raise ValueError("K must be >= 1")
    th = midpoint_angles(angles)
    work = sum(len(build(family, n)) for n in range(n_max_level + 1)) * angles
    if work > DEFAULTS.work_budget:
        raise CapacityError(f"bad-direction scan needs {work} disc-angle evaluations; budget {DEFAULTS.work_budget}")
    worst = np.zeros(angles, dtype=np.int64)
    for n in range(n_max_level + 1):
        worst = np.maximum(worst, direction_stats(build(family, n), th)["max_count"])
    return math.pi * np.count_nonzero(worst <= K) / angles


def decay_table(max_level: int, angles: int, family: str = "gasket") -> list[dict]:
    rows = []
    for n in range(max_level + 1):
        est = favard_quadrature(build(family, n), angles)
        ratio = est.value * n / math.log(n) if n >= 2 else None
        rows.append({"n": n, "fav": est.value, "error": est.error_indicator, "fav_n_over_log_n": ratio})
    return rows
