"""Complex zeros of phi_theta: counting, localization and continuation in theta.

All counting is done on the unnormalized sum ``F = 3 * phi_theta``; the zero
set is the same and the residual reported for a zero is ``|F(lambda)|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .config import DEFAULTS, ContourError, WDirectionError
from .expsum import SQRT3, direction_triple, phi_eval

W_DIRECTIONS = (math.pi / 6, math.pi / 2, 5 * math.pi / 6)
GG_IDENTITY = 3.0 * SQRT3 / 2.0

CONTOUR_TOL = 1e-9
MAX_EDGE_SAMPLES = 1 << 16
NEWTON_ITERS = 50


@dataclass(frozen=True)
class Box:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self):
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValueError(f"degenerate box {self}")

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x_lo + self.x_hi), 0.5 * (self.y_lo + self.y_hi))

    def contains(self, z: complex) -> bool:
        return self.x_lo <= z.real <= self.x_hi and self.y_lo <= z.imag <= self.y_hi

    def grown(self, frac: float) -> "Box":
        dx = frac * (self.x_hi - self.x_lo)
        dy = frac * (self.y_hi - self.y_lo)
        return Box(self.x_lo - dx, self.x_hi + dx, self.y_lo - dy, self.y_hi + dy)

    def corners(self) -> list[complex]:
        return [
            complex(self.x_lo, self.y_lo),
            complex(self.x_hi, self.y_lo),
            complex(self.x_hi, self.y_hi),
            complex(self.x_lo, self.y_hi),
        ]


@dataclass(frozen=True)
class DegenerateDirections:
    W: tuple = W_DIRECTIONS
    radius: float = DEFAULTS.w_exclusion

    def distance(self, theta: float) -> float:
        return min(abs((theta - w + math.pi / 2) % math.pi - math.pi / 2) for w in self.W)

    def check(self, theta: float) -> None:
        if self.distance(theta) < self.radius:
            raise WDirectionError(f"theta={theta:.6g} within {self.radius} of a degenerate direction")

    def avoiding_grid(self, count: int, lo: float = 0.0, hi: float = math.pi) -> np.ndarray:
        """``count`` midpoint angles in [lo, hi) that keep out of the exclusion zones."""
        grid = lo + (np.arange(4 * count) + 0.5) * (hi - lo) / (4 * count)
        ok = np.array([self.distance(t) >= self.radius for t in grid])
        good = grid[ok]
        return good[np.linspace(0, good.size - 1, count).round().astype(int)]


@dataclass
class ZeroRecord:
    lam: complex
    theta: float
    residual: float
    simple: bool

    @property
    def Y(self) -> float:
        return self.lam.real

    def to_dict(self) -> dict:
        return {"re": self.lam.real, "im": self.lam.imag, "residual": self.residual, "simple": self.simple}


@dataclass
class ZeroPath:
    thetas: np.ndarray
    lams: np.ndarray
    Y: np.ndarray
    dY: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    dg1: np.ndarray
    dg2: np.ndarray
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def rows(self) -> list[dict]:
        return [
            {
                "theta": float(t),
                "re": float(l.real),
                "im": float(l.imag),
                "g1": float(a),
                "g2": float(b),
                "g1_prime": float(c),
                "g2_prime": float(d),
            }
            for t, l, a, b, c, d in zip(self.thetas, self.lams, self.g1, self.g2, self.dg1, self.dg2)
        ]


def F(theta: float, z):
    return 3.0 * phi_eval(theta, z)


def F_and_derivs(theta: float, z):
    v, dz, dth = phi_eval(theta, z, derivatives=True)
    return 3.0 * v, 3.0 * dz, 3.0 * dth


# ------------------------------------------------------------ argument principle


class _OnContour(Exception):
    pass


def _edge_values(theta: float, a: complex, b: complex, n0: int = 32):
    """Samples of F along [a, b] refined until consecutive phase steps stay below pi/2."""
    t = np.linspace(0.0, 1.0, n0 + 1)
    v = F(theta, a + (b - a) * t)
    while True:
        if np.min(np.abs(v)) < CONTOUR_TOL:
            raise _OnContour
        steps = np.angle(v[1:] / v[:-1])
        bad = np.flatnonzero(np.abs(steps) >= math.pi / 2)
        if bad.size == 0:
            return v, steps
        if t.size + bad.size > MAX_EDGE_SAMPLES:
            raise ContourError("phase refinement did not converge within the sample budget")
        if np.min(t[bad + 1] - t[bad]) < 1e-13:
            raise _OnContour
        tm = 0.5 * (t[bad] + t[bad + 1])
        t = np.concatenate([t, tm])
        v = np.concatenate([v, F(theta, a + (b - a) * tm)])
        order = np.argsort(t, kind="stable")
        t, v = t[order], v[order]


def _winding(theta: float, box: Box) -> int | None:
    """Winding number of F around the box, or None when the contour passes too close to a zero."""
    cs = box.corners()
    total = 0.0
    for a, b in zip(cs, cs[1:] + cs[:1]):
        try:
            _, steps = _edge_values(theta, a, b)
        except _OnContour:
            return None
        total += float(np.sum(steps))
    w = round(total / (2 * math.pi))
    if abs(total - 2 * math.pi * w) > 1e-6:
        raise ContourError(f"non-integer winding {total / (2 * math.pi)}")
    return int(w)


def count_zeros_box(theta: float, box: Box, attempts: int = 8) -> int:
    """Number of zeros of phi_theta inside the box (argument principle)."""
    return _count_with_box(theta, box, attempts)[0]


def _count_with_box(theta: float, box: Box, attempts: int = 8) -> tuple[int, Box]:
    for k in range(attempts):
        b = box if k == 0 else box.grown(0.01 * k / (attempts - 1))
        w = _winding(theta, b)
        if w is not None:
            return w, b
    raise ContourError(f"zero on or near the boundary of {box} after {attempts} nudges")


# ------------------------------------------------------------ Newton + bisection


def newton(theta: float, z0: complex, tol: float = DEFAULTS.zero_tol, iters: int = NEWTON_ITERS):
    """Newton on F from z0; returns (z, converged)."""
    z = complex(z0)
    for _ in range(iters):
        f, df, _ = F_and_derivs(theta, z)
        if df == 0:
            return z, False
        dz = f / df
        z -= dz
        if abs(dz) < 1e-15 * max(1.0, abs(z)) or abs(f) < 1e-3 * tol:
            break
    # two polishing steps past the stopping point
    for _ in range(2):
        f, df, _ = F_and_derivs(theta, z)
        if df != 0:
            z -= f / df
    return z, bool(abs(F(theta, z)) <= tol)


def _record(theta: float, z: complex) -> ZeroRecord:
    f, df, _ = F_and_derivs(theta, z)
    return ZeroRecord(z, theta, float(abs(f)), bool(abs(df) / 3.0 > DEFAULTS.simple_threshold))


def _split(theta: float, box: Box):
    """Two halves along the longer side, moving the cut until it avoids zeros."""
    horizontal = (box.x_hi - box.x_lo) >= (box.y_hi - box.y_lo)
    for frac in (0.5, 0.47, 0.53, 0.41, 0.59, 0.35, 0.65):
        if horizontal:
            cut = box.x_lo + frac * (box.x_hi - box.x_lo)
            halves = (Box(box.x_lo, cut, box.y_lo, box.y_hi), Box(cut, box.x_hi, box.y_lo, box.y_hi))
        else:
            cut = box.y_lo + frac * (box.y_hi - box.y_lo)
            halves = (Box(box.x_lo, box.x_hi, box.y_lo, cut), Box(box.x_lo, box.x_hi, cut, box.y_hi))
        counts = [_winding(theta, h) for h in halves]
        if None not in counts:
            return list(zip(halves, counts))
    raise ContourError(f"could not split {box} away from zeros")


@dataclass
class StripResult:
    zeros: list[ZeroRecord]
    total: int
    unresolved: list[tuple[Box, int]]
    box: Box


def find_zeros_strip(theta: float, x_range: tuple[float, float], H: float = DEFAULTS.strip_height) -> StripResult:
    """All zeros in [x0, x1] x [-H, H], isolated by winding-count bisection and polished by Newton."""
    top = Box(float(x_range[0]), float(x_range[1]), -H, H)
    total, top = _count_with_box(theta, top)
    found: list[ZeroRecord] = []
    unresolved: list[tuple[Box, int]] = []
    stack = [(top, total)]
    while stack:
        box, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            z, ok = newton(theta, box.center)
            if ok and box.contains(z):
                found.append(_record(theta, z))
                continue
        if max(box.x_hi - box.x_lo, box.y_hi - box.y_lo) < 1e-7:
            unresolved.append((box, cnt))
            continue
        parts = _split(theta, box)
        if sum(c for _, c in parts) != cnt:
            raise ContourError(f"partition counts {[c for _, c in parts]} do not add up to {cnt}")
        stack.extend(parts)
    found.sort(key=lambda r: (r.lam.real, r.lam.imag))
    return StripResult(found, total, unresolved, top)


# ------------------------------------------------------------ continuation in theta


def zero_velocity(theta: float, lam: complex) -> complex:
    """d lambda / d theta from the implicit function theorem."""
    _, dz, dth = F_and_derivs(theta, lam)
    return -dth / dz


def g_values(theta: float, lam: complex):
    """(g1, g2, g1', g2') for the zero branch through lam at real theta."""
    tr = direction_triple(theta)
    c, s = tr.c, tr.s
    Y = lam.real
    dY = zero_velocity(theta, lam).real
    g1 = Y * (c[1] - c[0])
    g2 = Y * (c[2] - c[0])
    dg1 = dY * (c[1] - c[0]) - Y * (s[1] - s[0])
    dg2 = dY * (c[2] - c[0]) - Y * (s[2] - s[0])
    return g1, g2, dg1, dg2


def track_zero(
    theta0: float,
    theta1: float,
    lam0: complex,
    steps: int,
    jump_bound: float = 0.25,
    exclusion: DegenerateDirections | None = None,
) -> ZeroPath:
    """Euler predictor / Newton corrector continuation of one zero from theta0 to theta1."""
    excl = exclusion or DegenerateDirections()
    lam, ok = newton(theta0, lam0)
    if not ok:
        raise ContourError(f"lambda0={lam0} is not a zero at theta0={theta0}")
    grid = np.linspace(theta0, theta1, steps + 1) if steps > 0 else np.array([theta0])
    for t in grid:
        excl.check(float(t))
    lams = [lam]
    th = theta0
    for target in grid[1:]:
        target = float(target)
        while th != target:
            remaining = target - th
            h = remaining
            for _ in range(40):
                pred = lam + h * zero_velocity(th, lam)
                z, ok = newton(th + h, pred)
                if ok and abs(z - pred) <= jump_bound and abs(z - lam) <= 2 * jump_bound:
                    break
                h /= 2
            else:
                raise ContourError(f"continuation stalled at theta={th}")
            if abs(F_and_derivs(th + h, z)[1]) / 3.0 < DEFAULTS.collision_threshold:
                raise ContourError(f"zero collision near theta={th + h}, lambda={z}")
            th = target if h == remaining else th + h
            lam = z
        lams.append(lam)
    lams = np.array(lams)
    g = np.array([g_values(float(t), complex(l)) for t, l in zip(grid, lams)]).reshape(-1, 4)
    return ZeroPath(
        thetas=grid,
        lams=lams,
        Y=lams.real.copy(),
        dY=np.array([zero_velocity(float(t), complex(l)).real for t, l in zip(grid, lams)]),
        g1=g[:, 0],
        g2=g[:, 1],
        dg1=g[:, 2],
        dg2=g[:, 3],
        residuals=np.array([abs(F(float(t), complex(l))) for t, l in zip(grid, lams)]),
    )


def g_finite_difference(path: ZeroPath, h: float = 1e-5) -> tuple[float, float]:
    """Max |analytic - central difference| for g1' and g2' along the path (zeros re-solved at theta +/- h)."""
    e1 = e2 = 0.0
    for t, lam, d1, d2 in zip(path.thetas, path.lams, path.dg1, path.dg2):
        t = float(t)
        v = zero_velocity(t, complex(lam))
        zp, okp = newton(t + h, complex(lam) + h * v)
        zm, okm = newton(t - h, complex(lam) - h * v)
        if not (okp and okm):
            raise ContourError(f"re-solve failed near theta={t}")
        gp = g_values(t + h, zp)
        gm = g_values(t - h, zm)
        e1 = max(e1, abs((gp[0] - gm[0]) / (2 * h) - d1))
        e2 = max(e2, abs((gp[1] - gm[1]) / (2 * h) - d2))
    return e1, e2


def gg_identity(theta):
    """(c2 - c1)(s3 - s1) - (c3 - c1)(s2 - s1); the cleared-denominator form of the g-derivative identity."""
    theta = np.asarray(theta, dtype=np.float64)
    ang = theta[..., None] + np.array([-math.pi / 2, -7 * math.pi / 6, math.pi / 6])
    c, s = np.cos(ang), np.sin(ang)
    return (c[..., 1] - c[..., 0]) * (s[..., 2] - s[..., 0]) - (c[..., 2] - c[..., 0]) * (s[..., 1] - s[..., 0])


@dataclass
class GScan:
    min_max_derivative: float
    identity_residual: float
    identity_value: float
    zeros_scanned: int


def g_derivative_scan(thetas, x_range=(0.0, 9.0), H: float = DEFAULTS.strip_height, exclusion=None) -> GScan:
    excl = exclusion or DegenerateDirections()
    best = math.inf
    count = 0
    for t in thetas:
        excl.check(float(t))
        for z in find_zeros_strip(float(t), x_range, H).zeros:
            _, _, d1, d2 = g_values(float(t), z.lam)
            best = min(best, max(abs(d1), abs(d2)))
            count += 1
    ident = gg_identity(np.asarray(thetas))
    return GScan(best, float(np.max(np.abs(np.abs(ident) - GG_IDENTITY))), float(ident.flat[0]), count)


# ------------------------------------------------------------ branch points and discrepancy


@dataclass
class BranchScan:
    d_theta: float
    argmin_im_z: float
    min_joint_residual: float
    argmin_z: complex


def discrepancy(theta: float, z) -> np.ndarray:
    """d_theta(z); depends on z only through Im(sqrt(3) z)."""
    tr = direction_triple(theta)
    a, b = tr.a, tr.b
    u = SQRT3 * np.imag(np.asarray(z, dtype=np.complex128))
    # |exp(i Z b)| = exp(-b Im Z), |exp(-i Z a)| = exp(a Im Z)
    t1 = np.abs(np.exp(-b * u) * abs(a + b) / abs(a) - 1.0)
    t2 = np.abs(np.exp(a * u) * abs(a + b) / abs(b) - 1.0)
    return np.maximum(t1, t2)


def branch_discrepancy_scan(
    theta: float,
    m: int = 2,
    H: float = DEFAULTS.strip_height,
    nx: int = 400,
    ny: int = 121,
    exclusion: DegenerateDirections | None = None,
) -> BranchScan:
    """Discrepancy d_theta and min of max(|F|, |F'|) over [0, 3^m] x [-H/2, H/2]."""
    (exclusion or DegenerateDirections()).check(theta)
    ys = np.linspace(-H / 2, H / 2, ny)
    d = discrepancy(theta, 1j * ys)
    k = int(np.argmin(d))
    lo, hi = ys[max(k - 1, 0)], ys[min(k + 1, ny - 1)]
    best_y, best_d = ys[k], float(d[k])
    if hi > lo:
        r = minimize_scalar(lambda y: float(discrepancy(theta, 1j * y)), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        if r.fun < best_d:
            best_y, best_d = float(r.x), float(r.fun)

    xs = np.linspace(0.0, 3.0**m, nx)
    Z = xs[None, :] + 1j * ys[:, None]
    f, df, _ = F_and_derivs(theta, Z)
    joint = np.maximum(np.abs(f), np.abs(df))
    i, j = np.unravel_index(int(np.argmin(joint)), joint.shape)

    def obj(p):
        v, dv, _ = F_and_derivs(theta, complex(p[0], p[1]))
        return max(abs(v), abs(dv))

    r2 = minimize(obj, x0=[xs[j], ys[i]], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12})
    jr, jz = float(joint[i, j]), complex(xs[j], ys[i])
    if r2.fun < jr and 0 <= r2.x[0] <= 3.0**m and abs(r2.x[1]) <= H / 2:
        jr, jz = float(r2.fun), complex(r2.x[0], r2.x[1])
    return BranchScan(best_d, best_y, jr, jz)


# ------------------------------------------------------------ box and sector statements


def in_sector(theta: float) -> bool:
    """e^{i theta} within pi/6 of pi/2, 7pi/6 or -pi/6 (where |F(x + iH)| >= 1)."""
    return any(abs((theta - c + math.pi) % (2 * math.pi) - math.pi) <= math.pi / 6 + 1e-12 for c in (math.pi / 2, 7 * math.pi / 6, -math.pi / 6))


def sector_min_modulus(theta: float, H: float = DEFAULTS.strip_height, x_max: float = 81.0, nx: int = 8101) -> float:
    xs = np.linspace(0.0, x_max, nx)
    return float(np.min(np.abs(F(theta, xs + 1j * H))))


def box_counts(theta: float, x_max: int = 81, H: float = DEFAULTS.strip_height) -> np.ndarray:
    """Zero counts for the unit-width boxes [k, k+1] x [-H, H], k = 0..x_max-1."""
    return np.array([count_zeros_box(theta, Box(k, k + 1.0, -H, H)) for k in range(x_max)])


def measure_delta0(thetas, radius: float = 4.0, H: float = DEFAULTS.strip_height) -> float:
    """Zero-free radius around the origin: half the smallest |lambda| seen over the theta grid, capped at H/10."""
    nearest = math.inf
    for t in thetas:
        res = find_zeros_strip(float(t), (-radius, radius), H)
        for z in res.zeros:
            nearest = min(nearest, abs(z.lam))
    return min(nearest / 2.0, H / 10.0)
