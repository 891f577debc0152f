"""Finite generations of the disc-model Sierpinski gasket and the 4-corner Cantor set."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .config import DEFAULTS, CapacityError

GASKET = "gasket"
CORNER_CANTOR = "corner-cantor"
FAMILIES = (GASKET, CORNER_CANTOR)

_S3 = math.sqrt(3.0) / 2.0
# e^{i pi (1/2 + 2j/3)} for j = -1, 0, 1, written out so i and the 30-degree
# rotations carry no trig rounding
GASKET_PHASES = np.array([complex(_S3, -0.5), complex(0.0, 1.0), complex(-_S3, -0.5)])
CANTOR_OFFSETS = np.array([0.0, 0.75j, 0.75, 0.75 + 0.75j])


@dataclass(frozen=True, eq=False)
class DiscSet:
    family: str
    level: int
    radius: float
    centers: np.ndarray  # complex128, deterministic lexicographic order

    def __len__(self) -> int:
        return self.centers.size

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "level": self.level,
            "radius": self.radius,
            "centers": [[float(z.real), float(z.imag)] for z in self.centers],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "DiscSet":
        c = np.array([complex(re, im) for re, im in d["centers"]], dtype=np.complex128)
        return cls(d["family"], int(d["level"]), float(d["radius"]), c)

    @classmethod
    def from_json(cls, text: str) -> "DiscSet":
        return cls.from_dict(json.loads(text))

    def rotated(self, phi: float) -> "DiscSet":
        return DiscSet(self.family, self.level, self.radius, self.centers * complex(math.cos(phi), math.sin(phi)))

    def min_pairwise_distance(self) -> float:
        if self.centers.size < 2:
            return math.inf
        pts = np.column_stack([self.centers.real, self.centers.imag])
        d, _ = cKDTree(pts).query(pts, k=2)
        return float(d[:, 1].min())


def _check_level(n: int, n_max: int, base: int) -> None:
    if n < 0:
        raise ValueError(f"level must be >= 0, got {n}")
    if n > n_max:
        raise CapacityError(f"level {n} exceeds n_max={n_max} ({base}^{n} discs)")


def build_gasket(n: int, n_max: int = DEFAULTS.n_max) -> DiscSet:
    """3^(n+1) centers sum_k 3^-k e^{i pi (1/2 + 2 a_k / 3)}, radius 3^-n."""
    _check_level(n, n_max, 3)
    z = GASKET_PHASES.copy()
    for k in range(1, n + 1):
        z = (z[:, None] + GASKET_PHASES[None, :] / 3**k).ravel()
    return DiscSet(GASKET, n, 1.0 / 3**n, z)


def build_corner_cantor(n: int, n_max: int = DEFAULTS.n_max) -> DiscSet:
    """Discs circumscribing the 4^n squares of side 4^-n of the 1/4 corner Cantor set."""
    _check_level(n, n_max, 4)
    corners = np.zeros(1, dtype=np.complex128)
    for k in range(1, n + 1):
        corners = (corners[:, None] + CANTOR_OFFSETS[None, :] / 4 ** (k - 1)).ravel()
    side = 1.0 / 4**n
    half = side / 2.0
    return DiscSet(CORNER_CANTOR, n, side * math.sqrt(2.0) / 2.0, corners + complex(half, half))


def build(family: str, n: int, n_max: int = DEFAULTS.n_max) -> DiscSet:
    if family == GASKET:
        return build_gasket(n, n_max)
    if family == CORNER_CANTOR:
        return build_corner_cantor(n, n_max)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def subdivide(s: DiscSet, n_max: int = DEFAULTS.n_max) -> DiscSet:
    """Apply the family's similarity maps once."""
    if s.level + 1 > n_max:
        raise CapacityError(f"level {s.level + 1} exceeds n_max={n_max}")
    if s.family == GASKET:
        z = (GASKET_PHASES[:, None] + s.centers[None, :] / 3).ravel()
        return DiscSet(GASKET, s.level + 1, s.radius / 3, z)
    if s.family == CORNER_CANTOR:
        z = (CANTOR_OFFSETS[:, None] + s.centers[None, :] / 4).ravel()
        return DiscSet(CORNER_CANTOR, s.level + 1, s.radius / 4, z)
    raise ValueError(f"unknown family {s.family!r}")


def same_centers(a: DiscSet, b: DiscSet, tol: float = 1e-12) -> bool:
    """Multiset equality of center lists, coordinate-wise within tol."""
    if a.centers.size != b.centers.size:
        return False
    pa = np.column_stack([a.centers.real, a.centers.imag])
    pb = np.column_stack([b.centers.real, b.centers.imag])
    d, idx = cKDTree(pb).query(pa, k=1)
    return bool(np.all(d <= tol) and np.unique(idx).size == idx.size)
