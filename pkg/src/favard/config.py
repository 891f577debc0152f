"""Run-wide defaults and the error types shared across modules."""

from __future__ import annotations

from dataclasses import dataclass


class CapacityError(ValueError):
    """A requested construction or expansion exceeds its work budget."""


class WDirectionError(ValueError):
    """A direction lies too close to one of the degenerate angles pi/6, pi/2, 5pi/6."""


class ContourError(RuntimeError):
    """Argument-principle counting failed (zero on the contour or no convergence)."""


@dataclass(frozen=True)
class Defaults:
    n_max: int = 10
    expansion_cap: int = 3**7
    pairwise_cap: int = 3**6
    zero_tol: float = 1e-10
    simple_threshold: float = 1e-6
    w_exclusion: float = 0.05
    m_cap: int = 8
    c4_cap: float = 10.0
    ratio_cap: float = 20.0
    strip_height: float = 3.0
    # disc-count x angle-count products above this are refused
    work_budget: int = 3**9 * 8192
    collision_threshold: float = 1e-6


DEFAULTS = Defaults()

SCHEMA_VERSION = 1
