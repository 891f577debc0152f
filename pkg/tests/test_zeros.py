import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from favard.config import WDirectionError
from favard.zeros import (
    F,
    GG_IDENTITY,
    Box,
    DegenerateDirections,
    box_counts,
    branch_discrepancy_scan,
    count_zeros_box,
    discrepancy,
    find_zeros_strip,
    g_finite_difference,
    gg_identity,
    in_sector,
    newton,
    sector_min_modulus,
    track_zero,
)

X0 = 4 * math.pi * math.sqrt(3) / 9


def test_theta0_closed_form_zeros():
    r = find_zeros_strip(0.0, (0.0, 9.0), 3.0)
    assert r.total == 2 and not r.unresolved
    got = sorted(z.lam.real for z in r.zeros)
    assert got == pytest.approx([X0, 2 * X0], abs=1e-8)
    assert all(abs(z.lam.imag) < 1e-8 and z.simple for z in r.zeros)


def test_box_count_oracles():
    assert count_zeros_box(0.0, Box(2.0, 3.0, -1.0, 1.0)) == 1
    assert count_zeros_box(0.0, Box(0.5, 1.5, -1.0, 1.0)) == 0
    assert count_zeros_box(0.0, Box(3.0, 4.0, -1.0, 1.0)) == 0


@given(st.floats(0.2, 2.9), st.floats(0, 20), st.floats(0.5, 6), st.floats(0.3, 3), st.floats(0.2, 0.8))
def test_partition_additivity(theta, x0, w, h, cut):
    box = Box(x0, x0 + w, -h, h)
    xm = x0 + cut * w
    whole = count_zeros_box(theta, box)
    assert whole >= 0
    assert whole == count_zeros_box(theta, Box(x0, xm, -h, h)) + count_zeros_box(theta, Box(xm, x0 + w, -h, h))


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.0, 2.9])
def test_strip_zeros_are_zeros(theta):
    r = find_zeros_strip(theta, (0.0, 27.0), 3.0)
    assert not r.unresolved and len(r.zeros) == r.total
    for z in r.zeros:
        assert abs(F(theta, z.lam)) < 1e-9


def test_box_counts_bounded():
    assert box_counts(1.0).max() <= 8


def test_tracking_matches_strip_and_fd():
    path = track_zero(0.0, 0.1, complex(X0), 10)
    end = path.lams[-1]
    found = find_zeros_strip(0.1, (1.0, 4.0), 3.0).zeros
    assert min(abs(z.lam - end) for z in found) < 1e-9
    e1, e2 = g_finite_difference(path)
    assert max(e1, e2) < 1e-5
    assert path.residuals.max() < 1e-10


def test_tracking_refuses_degenerate_direction():
    lam = find_zeros_strip(0.4, (1.0, 4.0), 3.0).zeros[0].lam
    with pytest.raises(WDirectionError):
        track_zero(0.4, math.pi / 6, lam, 4)


@given(st.floats(-10, 10))
def test_gg_identity(theta):
    assert abs(gg_identity(theta)) == pytest.approx(GG_IDENTITY, abs=1e-12)


def test_discrepancy_theta0():
    assert float(discrepancy(0.0, 0.0)) == pytest.approx(1.0, abs=1e-12)
    assert branch_discrepancy_scan(0.0).d_theta == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("theta", DegenerateDirections().avoiding_grid(6))
def test_no_branch_points(theta):
    b = branch_discrepancy_scan(float(theta))
    assert b.d_theta > 0 and b.min_joint_residual > 0


def test_degenerate_check():
    with pytest.raises(WDirectionError):
        DegenerateDirections().check(math.pi / 2 + 0.01)
    DegenerateDirections().check(0.0)


def test_sector_lower_bound():
    assert in_sector(math.pi / 2) and not in_sector(math.pi / 4)
    assert sector_min_modulus(math.pi / 2) >= 1.0


def test_newton_converges():
    z, ok = newton(0.0, complex(X0 + 0.1, 0.05))
    assert ok and abs(z - X0) < 1e-10
