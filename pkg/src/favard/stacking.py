"""Iterated projection bound from a K-fold overlap at one scale, checked against exact gasket projections.

Lengths are normalized so the whole gasket projects to length at most 1:
generation ``s`` (3^s pieces of relative size 3^-s) is realized by the disc
set at level ``s - 1``, and every projected length is divided by 6, the
diameter of the disc B(0, 3) that contains all levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import GASKET, build
from .projection import direction_stats, profile, project_set

ROOT_DIAMETER = 6.0
MAX_DEPTH = 8


@dataclass
class BoundSequence:
    n: int
    K: int
    X: int
    C: float
    terms: np.ndarray  # b_1 .. b_X
    limit: float  # C / K
    tail_caps: np.ndarray  # C/K + exp(-K 3^-n j)

    @property
    def q(self) -> float:
        return 1.0 - self.K * 3.0**-self.n


def stacking_bound_seq(n: int, K: int, X: int, C: float) -> BoundSequence:
    """b_j = C * sum_{k=1}^j 3^(-kn) (3^n - K)^(k-1) + 3^(-jn) (3^n - K)^j.

    Evaluated through the equivalent closed form C/K + q^j (1 - C/K),
    q = 1 - K 3^-n, with q^j taken in the log domain.
    """
    if n < 1 or X < 1:
        raise ValueError("need n >= 1 and X >= 1")
    if not 1 <= K <= 3**n:
        raise ValueError(f"K must lie in [1, 3^n] = [1, {3**n}]")
    q = 1.0 - K * 3.0**-n
    j = np.arange(1, X + 1, dtype=np.float64)
    qj = np.zeros(X) if q == 0.0 else np.exp(j * math.log(q))
    lim = C / K
    terms = lim + qj * (1.0 - lim)
    caps = lim + np.exp(-K * 3.0**-n * j)
    return BoundSequence(n, K, X, float(C), terms, lim, caps)


def exact_terms(n: int, K: int, X: int, C) -> list[Fraction]:
    """The defining sum evaluated in rational arithmetic, for cross-checking the closed form."""
    C = Fraction(C)
    base = Fraction(1, 3**n)
    g = 3**n - K
    out = []
    for jj in range(1, X + 1):
        s = sum(base**k * g ** (k - 1) for k in range(1, jj + 1))
        out.append(C * s + base**jj * g**jj)
    return out


def recursion_residual(seq: BoundSequence) -> float:
    """max |b_{j+1} - (C 3^-n + q b_j)| over the sequence (b_0 = 1)."""
    prev = np.concatenate([[1.0], seq.terms[:-1]])
    return float(np.max(np.abs(seq.terms - (seq.C * 3.0**-seq.n + seq.q * prev))))


def projected_length(generation: int, theta: float) -> float:
    """Normalized |proj T_generation| in direction theta."""
    if generation == 0:
        return 1.0
    s = build(GASKET, generation - 1)
    return float(direction_stats(s, [theta])["support"][0]) / ROOT_DIAMETER


@dataclass
class StackingReport:
    theta: float
    n: int
    X: int
    K: int
    C_fitted: float
    C_support_fit: float
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r["exact_support"] <= r["bound_b_j"] * (1 + 1e-12) for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "n": self.n,
            "X": self.X,
            "K": self.K,
            "C_fitted": self.C_fitted,
            "C_support_fit": self.C_support_fit,
            "pass": self.ok,
            "rows": self.rows,
        }


def stacking_verify(theta: float, n: int, X: int) -> StackingReport:
    """Measure the overlap K at generation n, fit C, and compare b_j with exact supports at generations j*n.

    C is the normalized union length of the K pieces stacked over the
    deepest point of the generation-n profile, times 3^n; it lies in [1, 2]
    and makes every b_j a valid upper bound by self-similarity. The
    support-matching fit |proj T_n| 3^n - (3^n - K), clipped at 1, is
    reported alongside for comparison.
    """
    if n < 1 or X < 1:
        raise ValueError("need n >= 1 and X >= 1")
    if X * n > MAX_DEPTH:
        raise ValueError(f"X*n = {X * n} exceeds the computable depth {MAX_DEPTH}")
    s = build(GASKET, n - 1)
    iv = project_set(s, theta)
    prof = profile(iv)
    K = prof.max_count
    x = prof.argmax_point()
    stack = (iv.lo <= x) & (x <= iv.hi)
    union = float(iv.hi[stack].max() - iv.lo[stack].min())
    C = union / ROOT_DIAMETER * 3**n
    first = prof.support_length / ROOT_DIAMETER
    C_fit = max(1.0, first * 3**n - (3**n - K))
    seq = stacking_bound_seq(n, K, X, C)
    rows = []
    for jj in range(1, X + 1):
        rows.append(
            {
                "j": jj,
                "exact_support": projected_length(jj * n, theta),
                "bound_b_j": float(seq.terms[jj - 1]),
                "K": K,
                "C_fitted": C,
            }
        )
    return StackingReport(float(theta), n, X, K, C, C_fit, rows)
