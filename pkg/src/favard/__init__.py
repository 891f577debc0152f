"""Projections and Favard length of the Sierpinski gasket, and checks of the exponential sums that govern them."""

from .config import DEFAULTS, SCHEMA_VERSION, CapacityError, ContourError, WDirectionError
from .geometry import CORNER_CANTOR, GASKET, DiscSet, build, build_corner_cantor, build_gasket, subdivide
from .projection import buffon_mc, direction_stats, favard_quadrature, profile, project_set

__version__ = "0.1.0"

__all__ = [
    "DEFAULTS",
    "SCHEMA_VERSION",
    "CapacityError",
    "ContourError",
    "WDirectionError",
    "CORNER_CANTOR",
    "GASKET",
    "DiscSet",
    "build",
    "build_corner_cantor",
    "build_gasket",
    "subdivide",
    "buffon_mc",
    "direction_stats",
    "favard_quadrature",
    "profile",
    "project_set",
]
