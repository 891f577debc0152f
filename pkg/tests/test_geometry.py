import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from favard.config import CapacityError
from favard.geometry import (
    CORNER_CANTOR,
    GASKET,
    DiscSet,
    build,
    build_corner_cantor,
    build_gasket,
    same_centers,
    subdivide,
)


@pytest.mark.parametrize("n", range(6))
def test_gasket_counts_and_radius(n):
    s = build_gasket(n)
    assert len(s) == 3 ** (n + 1)
    assert s.radius == 3.0**-n


@pytest.mark.parametrize("n", range(5))
def test_cantor_counts(n):
    s = build_corner_cantor(n)
    assert len(s) == 4**n


def test_level0_centers_are_unit_phases():
    c = build_gasket(0).centers
    assert np.allclose(np.abs(c), 1.0, atol=1e-15)
    assert np.isclose(c.sum(), 0.0, atol=1e-15)
    assert np.any(np.isclose(c, 1j))


@pytest.mark.parametrize("family", [GASKET, CORNER_CANTOR])
@pytest.mark.parametrize("n", range(5))
def test_subdivide_matches_next_level(family, n):
    assert same_centers(subdivide(build(family, n)), build(family, n + 1), tol=1e-12)
    assert subdivide(build(family, n)).radius == pytest.approx(build(family, n + 1).radius, rel=1e-15)


@pytest.mark.parametrize("n", range(5))
def test_gasket_levels_are_nested(n):
    # every child disc lies inside some parent disc
    parent = build_gasket(n)
    child = subdivide(parent)
    d = np.abs(child.centers[:, None] - parent.centers[None, :]).min(axis=1)
    assert np.all(d + child.radius <= parent.radius + 1e-12)


def test_capacity_guard():
    with pytest.raises(CapacityError):
        build_gasket(11)
    with pytest.raises(ValueError):
        build_gasket(-1)


def test_json_roundtrip():
    s = build_gasket(2)
    t = DiscSet.from_json(s.to_json())
    assert t.family == s.family and t.level == s.level and t.radius == s.radius
    assert np.array_equal(t.centers, s.centers)


@given(st.floats(0, 2 * math.pi))
def test_rotation_by_third_turn_is_symmetry(phi):
    s = build_gasket(2)
    assert same_centers(s.rotated(2 * math.pi / 3), s, tol=1e-12)
    r = s.rotated(phi)
    assert np.allclose(np.abs(r.centers), np.abs(s.centers), atol=1e-14)


def test_min_pairwise_distance():
    assert build_gasket(0).min_pairwise_distance() == pytest.approx(math.sqrt(3), rel=1e-14)
    assert build_corner_cantor(1).min_pairwise_distance() == pytest.approx(0.75, rel=1e-14)
