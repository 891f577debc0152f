"""Exponential sums attached to the gasket: phi_theta, its scale products, and their L2 machinery.

``phi_theta(y) = (1/3) * sum_j exp(-i c_j y)`` always carries the 1/3; statements
about the unnormalized sum are made against ``3 * phi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .config import DEFAULTS, CapacityError

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class DirectionTriple:
    theta: float
    c: np.ndarray  # (c1, c2, c3)
    s: np.ndarray  # (s1, s2, s3)
    a: float
    b: float

    @property
    def c1(self) -> float:
        return float(self.c[0])

    @property
    def c2(self) -> float:
        return float(self.c[1])

    @property
    def c3(self) -> float:
        return float(self.c[2])


_SHIFTS = np.array([-math.pi / 2, -7 * math.pi / 6, math.pi / 6])


def direction_triple(theta: float) -> DirectionTriple:
    ang = theta + _SHIFTS
    return DirectionTriple(
        float(theta),
        np.cos(ang),
        np.sin(ang),
        math.sin(theta - math.pi / 6),
        math.sin(theta - 5 * math.pi / 6),
    )


def phi_eval(theta: float, z, derivatives: bool = False):
    """phi_theta(z); with ``derivatives`` also d/dz and d/dtheta (dc_j/dtheta = -s_j)."""
    tr = direction_triple(theta)
    z = np.asarray(z, dtype=np.complex128)
    e = np.exp(-1j * tr.c[:, None] * z.reshape(1, -1))
    val = (e.sum(axis=0) / 3.0).reshape(z.shape)
    if not derivatives:
        return val[()] if val.ndim == 0 else val
    dz = ((-1j * tr.c[:, None] * e).sum(axis=0) / 3.0).reshape(z.shape)
    dth = ((1j * tr.s[:, None] * z.reshape(1, -1) * e).sum(axis=0) / 3.0).reshape(z.shape)
    if val.ndim == 0:
        return val[()], dz[()], dth[()]
    return val, dz, dth


@dataclass(frozen=True)
class ProductSpec:
    """Scale range of prod_{k=k_lo}^{k_hi} phi_theta(3^k y); negative k gives the nu-hat factors."""

    theta: float
    k_lo: int
    k_hi: int

    def __post_init__(self):
        if self.k_lo > self.k_hi:
            raise ValueError(f"empty scale range [{self.k_lo}, {self.k_hi}]")

    @property
    def length(self) -> int:
        return self.k_hi - self.k_lo + 1

    def scales(self) -> np.ndarray:
        return np.array([3.0**k for k in range(self.k_lo, self.k_hi + 1)])


def product_eval(spec: ProductSpec, z):
    """(value, log_abs) of the scale product; log_abs is -inf at exact zeros."""
    z = np.asarray(z, dtype=np.complex128)
    value = np.ones(z.shape, dtype=np.complex128)
    log_abs = np.zeros(z.shape)
    with np.errstate(divide="ignore"):
        for sc in spec.scales():
            f = phi_eval(spec.theta, sc * z)
            value = value * f
            log_abs = log_abs + np.log(np.abs(f))
    if value.ndim == 0:
        return complex(value), float(log_abs)
    return value, log_abs


@dataclass(frozen=True)
class ExpSum:
    """sum_j coeffs[j] * exp(i * freqs[j] * y)."""

    coeffs: np.ndarray
    freqs: np.ndarray

    def __len__(self) -> int:
        return self.freqs.size

    def __call__(self, y):
        y = np.asarray(y, dtype=np.float64)
        out = np.exp(1j * np.multiply.outer(y, self.freqs)) @ self.coeffs
        return out

    @classmethod
    def unit(cls, freqs, phases=None) -> "ExpSum":
        freqs = np.asarray(freqs, dtype=np.float64)
        ph = np.zeros_like(freqs) if phases is None else np.asarray(phases, dtype=np.float64)
        return cls(np.exp(1j * ph), freqs)


def expand(spec: ProductSpec, cap: int = DEFAULTS.expansion_cap) -> ExpSum:
    """Spectrum of the scale product: 3^len frequencies sum_k 3^k * (-c_{j_k}), equal weights."""
    terms = 3**spec.length
    if terms > cap:
        raise CapacityError(f"expansion has {terms} terms; cap is {cap}")
    c = direction_triple(spec.theta).c
    freqs = np.zeros(1)
    for sc in spec.scales():
        freqs = (freqs[:, None] - sc * c[None, :]).ravel()
    freqs.sort()
    return ExpSum(np.full(terms, 3.0**-spec.length, dtype=np.complex128), freqs)


def _check_pairwise(e: ExpSum, cap: int) -> None:
    if len(e) > cap:
        raise CapacityError(f"{len(e)} terms exceed the pairwise cap {cap}")


def exact_l2(e: ExpSum, cap: int = DEFAULTS.pairwise_cap) -> float:
    """int_0^1 |e(y)|^2 dy in closed form."""
    _check_pairwise(e, cap)
    return _kernels.pair_sum(e.coeffs, e.freqs, 0)


def salem_weighted_l2(e: ExpSum, cap: int = DEFAULTS.pairwise_cap) -> float:
    """int_{-1}^{1} (1 - |y|) |e(y)|^2 dy = sum c_j conj(c_k) hhat(a_j - a_k), hhat(x) = 2(1 - cos x)/x^2."""
    _check_pairwise(e, cap)
    return _kernels.pair_sum(e.coeffs, e.freqs, 1)


def riesz_eval(x, m: int, ell: int):
    """prod_{k=m+1}^{m+ell/2} (7 + 2 cos(3^k x)) / 9."""
    if ell < 2 or ell % 2:
        raise ValueError("ell must be an even integer >= 2")
    x = np.asarray(x, dtype=np.float64)
    out = np.ones(x.shape)
    for k in range(m + 1, m + ell // 2 + 1):
        out = out * (7.0 + 2.0 * np.cos(3.0**k * x)) / 9.0
    return out[()] if out.ndim == 0 else out


def riesz_domination_check(theta: float, y, m: int, ell: int):
    """|P2flat(y)|^2 against min of the Riesz product at y(c2 - c1) and y(c3 - c1)."""
    tr = direction_triple(theta)
    val, _ = product_eval(ProductSpec(theta, m + 1, m + ell // 2), y)
    lhs = np.abs(val) ** 2
    rhs = np.minimum(riesz_eval(np.asarray(y) * (tr.c2 - tr.c1), m, ell), riesz_eval(np.asarray(y) * (tr.c3 - tr.c1), m, ell))
    ok = lhs <= rhs * (1.0 + 1e-9)
    return lhs, rhs, ok


def salem_chain(theta: float, m: int, n: int) -> tuple[float, float, float]:
    """(2 * int_0^1 |P2|^2, Salem-weighted integral, 3^(m-n)) for P2 over scales [m+1, n]."""
    e = expand(ProductSpec(theta, m + 1, n))
    return 2.0 * exact_l2(e), salem_weighted_l2(e), 3.0 ** (m - n)
