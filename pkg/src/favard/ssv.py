"""The set of small values of P1 = prod_{k=0}^m phi_theta(3^k y) on [0, 1] and its zero-derived cover."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .config import DEFAULTS
from .expsum import ProductSpec, direction_triple, product_eval, riesz_eval
from .projection import IntervalSet
from .zeros import find_zeros_strip

LOG3 = math.log(3.0)
# log|P1| is clipped here so root brackets stay finite at exact zeros
_LOG_FLOOR = -1e4


@dataclass
class SSVScan:
    theta: float
    m: int
    ell: int
    A: float
    grid_step: float
    cells: IntervalSet
    threshold_log: float

    @property
    def measure(self) -> float:
        return self.cells.measure()


@dataclass
class SSVCover:
    theta: float
    m: int
    ell: int
    centers: np.ndarray
    half_widths: np.ndarray
    s: np.ndarray
    k: np.ndarray
    kappa: dict = field(default_factory=dict)
    zero_count: int = 0

    def __len__(self) -> int:
        return self.centers.size

    def dilated(self, factor: float) -> IntervalSet:
        return IntervalSet(self.centers - factor * self.half_widths, self.centers + factor * self.half_widths)


def _log_p1(theta: float, m: int, y):
    _, la = product_eval(ProductSpec(theta, 0, m), y)
    return np.maximum(la, _LOG_FLOOR)


def ssv_scan(theta: float, m: int, ell: int, A: float, grid_step: float) -> SSVScan:
    """Sub-level set {y in [0,1]: log|P1(y)| < -A*ell*m*log 3}.

    The grid marks sign changes and local dips of log|P1| - threshold; each
    is then resolved to an exact interval by root bracketing, so narrow
    small-value pockets between grid nodes are not lost.
    """
    if m > 4:
        raise ValueError(f"m={m} exceeds the desk-scale limit 4")
    need = 3.0 ** (-m - 2)
    if grid_step > need:
        raise ValueError(f"grid_step {grid_step} too coarse; need <= 3^-(m+2) = {need:.6g}")
    thr = -A * ell * m * LOG3 if math.isfinite(A) else -math.inf
    empty = IntervalSet(np.zeros(0), np.zeros(0))
    if thr == -math.inf:
        return SSVScan(theta, m, ell, A, grid_step, empty, thr)

    n = int(math.ceil(1.0 / grid_step))
    ys = np.linspace(0.0, 1.0, n + 1)
    g = _log_p1(theta, m, ys) - thr

    def gf(y):
        return float(_log_p1(theta, m, y)) - thr

    lo_list, hi_list = [], []
    neg = g < 0
    # runs of negative samples
    if neg.any():
        edges = np.diff(np.concatenate([[0], neg.astype(np.int8), [0]]))
        starts = np.flatnonzero(edges == 1)
        stops = np.flatnonzero(edges == -1) - 1
        for i, j in zip(starts, stops):
            a = 0.0 if i == 0 else brentq(gf, ys[i - 1], ys[i], xtol=1e-15)
            b = 1.0 if j == n else brentq(gf, ys[j], ys[j + 1], xtol=1e-15)
            lo_list.append(a)
            hi_list.append(b)
    # dips that stay positive at the nodes
    interior = np.arange(1, n)
    dip = interior[(g[1:-1] <= g[:-2]) & (g[1:-1] <= g[2:]) & (g[1:-1] > 0)]
    for i in dip:
        r = minimize_scalar(gf, bounds=(ys[i - 1], ys[i + 1]), method="bounded", options={"xatol": 1e-15})
        if r.fun < 0:
            lo_list.append(brentq(gf, ys[i - 1], r.x, xtol=1e-15))
            hi_list.append(brentq(gf, r.x, ys[i + 1], xtol=1e-15))
    cells = IntervalSet(np.array(lo_list), np.array(hi_list)).normalized() if lo_list else empty
    return SSVScan(theta, m, ell, A, grid_step, cells, thr)


def ssv_cover_predict(theta: float, m: int, ell: int, H: float = DEFAULTS.strip_height, width: str = "full") -> SSVCover:
    """Intervals centred at 3^-s * Re(lambda_k), s = kappa..m, half-width 3^(-s-ell) (or 3^(-s-ell/2))."""
    if width not in ("full", "half"):
        raise ValueError("width must be 'full' (3^(-s-ell)) or 'half' (3^(-s-ell/2))")
    zs = find_zeros_strip(theta, (0.0, 3.0**m), H).zeros
    centers, hws, ss, ks = [], [], [], []
    kappa = {}
    for idx, z in enumerate(zs):
        Y = z.lam.real
        if Y <= 0 or Y > 3.0**m:
            continue
        kap = 0
        while Y / 3.0**kap > 1.0:
            kap += 1
        kappa[idx] = kap
        for s in range(kap, m + 1):
            centers.append(Y / 3.0**s)
            hws.append(3.0 ** (-s - ell) if width == "full" else 3.0 ** (-s - ell / 2))
            ss.append(s)
            ks.append(idx)
    return SSVCover(
        theta, m, ell, np.array(centers), np.array(hws), np.array(ss, dtype=int), np.array(ks, dtype=int), kappa, len(zs)
    )


@dataclass
class SSVCheck:
    contained: bool
    violations: list
    r2_max_ratio: float


def riesz_ratio(cover: SSVCover, samples: int = 33) -> float:
    """max over cover intervals and y in them of R(y*dc)/R(center*dc), dc = c2 - c1 and c3 - c1."""
    if len(cover) == 0:
        return 1.0
    tr = direction_triple(cover.theta)
    ell = cover.ell if cover.ell % 2 == 0 else cover.ell + 1
    t = np.linspace(-1.0, 1.0, samples)
    worst = 1.0
    for dc in (tr.c2 - tr.c1, tr.c3 - tr.c1):
        y = cover.centers[:, None] + cover.half_widths[:, None] * t[None, :]
        num = riesz_eval(y * dc, cover.m, ell)
        den = riesz_eval(cover.centers * dc, cover.m, ell)
        worst = max(worst, float(np.max(num / den[:, None])))
    return worst


def ssv_check(scan: SSVScan, cover: SSVCover, dilation: float = 2.0) -> SSVCheck:
    if dilation < 1:
        raise ValueError("dilation must be >= 1")
    union = cover.dilated(dilation)
    violations = []
    for a, b in scan.cells.intervals:
        if len(union) == 0 or not union.contains_interval(a, b):
            violations.append((a, b))
    return SSVCheck(not violations, violations, riesz_ratio(cover))
