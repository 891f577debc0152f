"""Numerical oracles for the supporting lemmas, and the suite runners that aggregate every check.

Each suite returns ``{"lemma", "instances", "worst_ratio", "pass", ...}``;
``worst_ratio`` is the largest observed value of (quantity / allowed bound),
so a suite passes when it stays at or below 1 unless stated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import DEFAULTS
from .expsum import ExpSum, direction_triple, exact_l2, riesz_domination_check, salem_chain
from .zeros import (
    F,
    GG_IDENTITY,
    Box,
    DegenerateDirections,
    box_counts,
    count_zeros_box,
    find_zeros_strip,
    gg_identity,
    in_sector,
    sector_min_modulus,
)

PHI_NORMALIZATION = "phi = (1/3) sum_j exp(-i c_j y); statements about the unnormalized sum use 3*phi"
SUITES = ("R1", "salem", "cet", "blaschke", "boxbound", "ssv", "stacking", "identities", "sector")

# ------------------------------------------------------------------ Carleson-type sum bound


def frequency_density(freqs) -> int:
    """Largest number of frequencies in one closed unit interval."""
    f = np.sort(np.asarray(freqs, dtype=np.float64))
    if f.size == 0:
        return 0
    return int(np.max(np.searchsorted(f, f + 1.0, side="right") - np.arange(f.size)))


@dataclass(frozen=True)
class CetInstance:
    expsum: ExpSum
    density: int
    k: int

    @classmethod
    def from_freqs(cls, freqs, phases=None) -> "CetInstance":
        e = ExpSum.unit(freqs, phases)
        return cls(e, frequency_density(e.freqs), len(e))


def cet_check(inst: CetInstance, cap: int = DEFAULTS.pairwise_cap) -> tuple[float, float]:
    """(int_0^1 |sum|^2, integral / (k * density))."""
    if inst.k == 0:
        return 0.0, 0.0
    integral = exact_l2(inst.expsum, cap)
    return integral, integral / (inst.k * inst.density)


def random_cet_instance(rng: np.random.Generator, k_max: int = 500) -> CetInstance:
    k = int(rng.integers(1, k_max + 1))
    kind = rng.integers(3)
    if kind == 0:
        freqs = rng.uniform(0.0, k * 10.0 ** rng.uniform(-1, 1), k)
    else:
        nc = int(rng.integers(1, 11))
        centers = rng.uniform(0.0, 50.0 * nc, nc)
        width = 10.0 ** rng.uniform(-3, 0)
        freqs = centers[rng.integers(nc, size=k)] + width * rng.standard_normal(k)
        if kind == 2:
            spread = rng.uniform(0.0, k, k)
            mask = rng.random(k) < 0.5
            freqs = np.where(mask, spread, freqs)
    # aligned phases are the worst case for clustered frequencies
    phases = np.zeros(k) if rng.random() < 0.5 else rng.uniform(0, 2 * math.pi, k)
    return CetInstance.from_freqs(freqs, phases)


# ------------------------------------------------------------------ Blaschke counting


@dataclass
class AnalyticSample:
    """Holomorphic f near the closed unit disc with |f(0)| >= 1; ``zeros`` lists exactly its zeros in |z| < 1/2."""

    name: str
    f: Callable
    zeros: tuple
    description: str = ""

    def __post_init__(self):
        if abs(self.f(np.complex128(0))) < 1.0 - 1e-12:
            raise ValueError(f"sample {self.name}: |f(0)| < 1")
        for lam in self.zeros:
            if abs(lam) >= 0.5:
                raise ValueError(f"sample {self.name}: listed zero {lam} outside the half disc")
            if abs(self.f(np.complex128(lam))) > 1e-10:
                raise ValueError(f"sample {self.name}: residual at {lam} exceeds 1e-10")


@dataclass
class BlaschkeResult:
    M_observed: int
    log2C: float
    eps: float
    containment: bool
    small_points: int = 0

    @property
    def ok(self) -> bool:
        return self.M_observed <= self.log2C and self.containment


def circle_winding(f: Callable, r: float, n0: int = 512, max_samples: int = 1 << 18) -> int:
    t = np.linspace(0.0, 2 * math.pi, n0 + 1)
    v = f(r * np.exp(1j * t))
    while True:
        if np.min(np.abs(v)) < 1e-12:
            raise ValueError(f"zero on the circle |z| = {r}")
        steps = np.angle(v[1:] / v[:-1])
        bad = np.flatnonzero(np.abs(steps) >= math.pi / 2)
        if bad.size == 0:
            return int(round(float(np.sum(steps)) / (2 * math.pi)))
        if t.size + bad.size > max_samples:
            raise ValueError("circle phase refinement did not converge")
        tm = 0.5 * (t[bad] + t[bad + 1])
        t = np.concatenate([t, tm])
        v = np.concatenate([v, f(r * np.exp(1j * tm))])
        order = np.argsort(t, kind="stable")
        t, v = t[order], v[order]


def blaschke_eps(delta: float, M: int) -> float:
    """(9/16) (3 delta)^(1/M); 0 when there are no zeros."""
    if M <= 0:
        return 0.0
    return 9.0 / 16.0 * (3.0 * delta) ** (1.0 / M)


def blaschke_check(sample: AnalyticSample, delta: float, grid: int = 512, slack: float = 1.05) -> BlaschkeResult:
    if not 0 < delta < 1 / 3:
        raise ValueError("delta must lie in (0, 1/3)")
    t = np.linspace(0.0, 2 * math.pi, 4096, endpoint=False)
    C = float(np.max(np.abs(sample.f(np.exp(1j * t)))))
    M = circle_winding(sample.f, 0.5)
    if M != len(sample.zeros):
        raise ValueError(f"sample {sample.name}: winding count {M} != listed zeros {len(sample.zeros)}")
    eps = blaschke_eps(delta, M)
    xs = np.linspace(-0.25, 0.25, grid)
    Z = xs[None, :] + 1j * xs[:, None]
    Z = Z[np.abs(Z) <= 0.25]
    small = Z[np.abs(sample.f(Z)) < delta]
    if small.size == 0:
        ok = True
    elif M == 0:
        ok = False
    else:
        lam = np.asarray(sample.zeros, dtype=np.complex128)
        dist = np.min(np.abs(small[:, None] - lam[None, :]), axis=1)
        ok = bool(np.all(dist <= slack * eps))
    return BlaschkeResult(M, math.log2(C), eps, ok, int(small.size))


def _poly_sample(name: str, scale: float, roots) -> AnalyticSample:
    roots = np.asarray(roots, dtype=np.complex128)

    def f(z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.full(z.shape, scale, dtype=np.complex128)
        for r in roots:
            out = out * (1.0 - z / r)
        return out

    inside = tuple(complex(r) for r in roots if abs(r) < 0.5)
    return AnalyticSample(name, f, inside, f"{scale} * prod(1 - z/r), r = {[complex(r) for r in roots]}")


def _phi_sample(name: str, theta: float, z0: complex, sigma: float) -> AnalyticSample:
    """3 phi_theta(z0 + sigma w), rescaled so |f(0)| >= 1; zeros located by the strip search."""
    g0 = abs(complex(F(theta, z0)))
    norm = min(1.0, g0)

    def f(w):
        return F(theta, z0 + sigma * np.asarray(w, dtype=np.complex128)) / norm

    strip = find_zeros_strip(theta, (z0.real - sigma, z0.real + sigma), abs(z0.imag) + sigma + 0.5)
    inside = tuple((z.lam - z0) / sigma for z in strip.zeros if abs((z.lam - z0) / sigma) < 0.5)
    return AnalyticSample(name, f, inside, f"3*phi_{theta}({z0} + {sigma} w) / {norm:.6g}")


def blaschke_corpus() -> list[AnalyticSample]:
    x0 = 4 * math.pi * math.sqrt(3) / 9
    lam03 = find_zeros_strip(0.3, (1.0, 4.0), 3.0).zeros[0].lam
    lam10 = find_zeros_strip(1.0, (1.0, 4.0), 3.0).zeros[0].lam
    ring = [0.45 * np.exp(2j * math.pi * k / 4 + 0.3j) for k in range(4)]
    return [
        _poly_sample("const2", 2.0, []),
        _poly_sample("one-root", 1.0, [0.3]),
        _poly_sample("two-roots", 1.5, [0.25 + 0.2j, -0.35]),
        _poly_sample("three-roots", 1.0, [0.4j, -0.4j, 0.4]),
        _poly_sample("near-origin", 2.0, [0.1, -0.1 + 0.1j]),
        _poly_sample("ring4", 1.0, ring),
        _poly_sample("edge-root", 1.0, [0.49]),
        _poly_sample("cluster", 3.0, [0.2, 0.2 + 0.05j]),
        _poly_sample("outer-roots", 1.0, [0.3, 0.9j, -0.7]),
        _phi_sample("phi0-window", 0.0, complex(x0 + 0.3), 1.0),
        _phi_sample("phi0-centered", 0.0, complex(x0 + 0.05), 1.0),
        _phi_sample("phi0-zero-free", 0.0, complex(1.0), 1.0),
        _phi_sample("phi0.3-window", 0.3, lam03 + 0.2, 1.0),
        _phi_sample("phi1.0-window", 1.0, lam10 - 0.25j, 1.0),
        _phi_sample("phi1.0-wide", 1.0, lam10 + 0.1, 2.0),
    ]


# ------------------------------------------------------------------ suites


def _suite(lemma: str, instances: int, worst: float, ok: bool, **extra) -> dict:
    return {"lemma": lemma, "instances": int(instances), "worst_ratio": float(worst), "pass": bool(ok), **extra}


def suite_identities(seed: int = 0, count: int = 1000) -> dict:
    th = np.random.default_rng(seed).uniform(0.0, 2 * math.pi, count)
    worst = 0.0
    for t in th:
        tr = direction_triple(float(t))
        worst = max(
            worst,
            abs(tr.c.sum()),
            abs(tr.s.sum()),
            abs(math.sqrt(3) * tr.b - (tr.c2 - tr.c1)),
            abs(tr.a + tr.b + math.cos(t)),
        )
    gg = float(np.max(np.abs(np.abs(gg_identity(th)) - GG_IDENTITY)))
    return _suite(
        "identities",
        count,
        max(worst / 1e-14, gg / 1e-12),
        worst <= 1e-14 and gg <= 1e-12,
        max_linear_residual=worst,
        gg_residual=gg,
        gg_value=float(gg_identity(0.0)),
    )


def suite_r1(seed: int = 0, count: int = 10_000) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    ok = True
    for _ in range(count):
        th = rng.uniform(0.0, math.pi)
        y = rng.uniform(0.0, 9.0)
        m = int(rng.integers(0, 4))
        ell = 2 * int(rng.integers(1, 5))
        lhs, rhs, good = riesz_domination_check(th, y, m, ell)
        worst = max(worst, float(lhs / rhs))
        ok &= bool(good)
    return _suite("R1", count, worst, ok)


def suite_salem(seed: int = 0, count: int = 100) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        th = rng.uniform(0.0, math.pi)
        m = int(rng.integers(0, 3))
        n = m + int(rng.integers(1, 7))
        two_l2, weighted, target = salem_chain(th, m, n)
        worst = max(worst, target / two_l2, target / weighted)
    return _suite("salem", count, worst, worst <= 1.0 + 1e-12)


def suite_cet(seed: int = 0, count: int = 10_000, ratio_cap: float = DEFAULTS.ratio_cap) -> dict:
    children = np.random.SeedSequence(seed).spawn(count)
    worst = 0.0
    for child in children:
        _, r = cet_check(random_cet_instance(np.random.default_rng(child)))
        worst = max(worst, r)
    return _suite("cet", count, worst, worst <= ratio_cap, ratio_cap=ratio_cap)


def suite_blaschke(seed: int = 0, deltas=(0.01, 0.05, 0.1, 0.2, 0.3)) -> dict:
    corpus = blaschke_corpus()
    worst = 0.0
    failed = []
    for s in corpus:
        for d in deltas:
            r = blaschke_check(s, d)
            if r.M_observed:
                worst = max(worst, r.M_observed / r.log2C if r.log2C > 0 else math.inf)
            if not r.ok:
                failed.append([s.name, d])
    return _suite("blaschke", len(corpus) * len(deltas), worst, not failed, failed=failed, samples=len(corpus))


def suite_boxbound(seed: int = 0, count: int = 64, m_cap: int = DEFAULTS.m_cap) -> dict:
    worst = 0
    for t in DegenerateDirections().avoiding_grid(count):
        worst = max(worst, int(box_counts(float(t)).max()))
    return _suite("boxbound", count, worst / m_cap, worst <= m_cap, max_count=worst, m_cap=m_cap)


def ssv_thetas(count: int = 16) -> np.ndarray:
    """Generic directions off W plus the three directions where every zero is real."""
    special = np.array([0.0, math.pi / 3, 2 * math.pi / 3])
    return np.concatenate([DegenerateDirections().avoiding_grid(count - special.size), special])


def suite_ssv(seed: int = 0, count: int = 16, ratio_cap: float = 10.0) -> dict:
    from .ssv import ssv_check, ssv_cover_predict, ssv_scan

    worst = 1.0
    violations = 0
    nonempty = 0
    cases = 0
    for t in ssv_thetas(count):
        for m in (1, 2, 3):
            for ell in (4, 6, 8):
                scan = ssv_scan(float(t), m, ell, 2.0, 3.0 ** (-m - 2))
                chk = ssv_check(scan, ssv_cover_predict(float(t), m, ell), 2.0)
                violations += len(chk.violations)
                nonempty += len(scan.cells) > 0
                if ell > 2 * m:
                    worst = max(worst, chk.r2_max_ratio)
                cases += 1
    return _suite(
        "ssv", cases, worst / ratio_cap, violations == 0 and worst <= ratio_cap, violations=violations, nonempty_scans=nonempty
    )


def suite_stacking(seed: int = 0) -> dict:
    from .stacking import stacking_verify

    cases = [(math.pi / 2, 1, 3), (math.pi / 2, 2, 2), (0.37, 1, 8), (0.37, 2, 4), (1.1, 4, 2), (2.5, 2, 4)]
    worst = 0.0
    for th, n, X in cases:
        for row in stacking_verify(th, n, X).rows:
            worst = max(worst, row["exact_support"] / row["bound_b_j"])
    return _suite("stacking", len(cases), worst, worst <= 1.0 + 1e-12)


def suite_sector(seed: int = 0, count: int = 64, H: float = DEFAULTS.strip_height) -> dict:
    grid = np.linspace(0.0, 2 * math.pi, 4 * count, endpoint=False)
    th = grid[[in_sector(float(t)) for t in grid]][:count]
    lowest = min(sector_min_modulus(float(t), H) for t in th)
    return _suite("sector", th.size, 1.0 / lowest, lowest >= 1.0, min_modulus=lowest, H=H)


_RUNNERS = {
    "R1": suite_r1,
    "salem": suite_salem,
    "cet": suite_cet,
    "blaschke": suite_blaschke,
    "boxbound": suite_boxbound,
    "ssv": suite_ssv,
    "stacking": suite_stacking,
    "identities": suite_identities,
    "sector": suite_sector,
}


def run_suite(name: str, seed: int = 0) -> dict:
    if name == "all":
        reports = [run_suite(s, seed) for s in SUITES]
        return {"lemma": "all", "suites": reports, "pass": all(r["pass"] for r in reports), "normalization": PHI_NORMALIZATION}
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    out = _RUNNERS[name](seed=seed)
    out["normalization"] = PHI_NORMALIZATION
    return out


def partition_additivity(theta: float, box: Box, cut: float) -> tuple[int, int, int]:
    """(count(box), count(left part), count(right part)) for a vertical cut at fraction ``cut``."""
    x = box.x_lo + cut * (box.x_hi - box.x_lo)
    return (
        count_zeros_box(theta, box),
        count_zeros_box(theta, Box(box.x_lo, x, box.y_lo, box.y_hi)),
        count_zeros_box(theta, Box(x, box.x_hi, box.y_lo, box.y_hi)),
    )
