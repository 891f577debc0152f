import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from favard.geometry import build
from favard.projection import (
    IntervalSet,
    bad_direction_measure,
    buffon_mc,
    decay_table,
    direction_stats,
    favard_quadrature,
    mc_bound,
    profile,
    project_set,
)

G0_FAV_4096 = 3.6539866907699956


def test_g0_vertical_oracle():
    pr = profile(project_set(build("gasket", 0), math.pi / 2))
    assert pr.support_length == pytest.approx(3.5, abs=1e-12)
    assert pr.l1 == pytest.approx(6.0, abs=1e-12)
    assert pr.max_count == 3


def test_single_disc_profile():
    pr = profile(IntervalSet.from_pairs([(0.0, 2.0)]))
    assert pr.support_length == 2.0 and pr.l1 == 2.0 and pr.l2_sq == 2.0 and pr.max_count == 1


def test_touching_intervals_do_not_overlap():
    pr = profile(IntervalSet.from_pairs([(0.0, 1.0), (1.0, 2.0)]))
    assert pr.max_count == 1
    assert pr.support_length == 2.0


intervals = st.lists(
    st.tuples(st.floats(-10, 10, allow_nan=False), st.floats(0, 5, allow_nan=False)), min_size=1, max_size=40
)


@given(intervals)
def test_profile_invariants(pairs):
    iv = IntervalSet.from_pairs([(a, a + w) for a, w in pairs])
    pr = profile(iv)
    lengths = float(np.sum(iv.hi - iv.lo))
    assert pr.l1 == pytest.approx(lengths, rel=1e-9, abs=1e-9)
    assert pr.support_length == pytest.approx(iv.measure(), rel=1e-9, abs=1e-9)
    assert pr.support_length <= pr.l1 + 1e-9
    assert pr.l1 <= pr.max_count * pr.support_length + 1e-9
    # Cauchy-Schwarz: l1^2 <= support * l2
    assert pr.l1**2 <= pr.support_length * pr.l2_sq * (1 + 1e-9) + 1e-9
    assert np.all(pr.counts >= 0)


@given(intervals)
def test_normalized_is_disjoint_cover(pairs):
    iv = IntervalSet.from_pairs([(a, a + w) for a, w in pairs])
    n = iv.normalized()
    assert np.all(n.lo[1:] > n.hi[:-1])
    for a, b in iv.intervals:
        assert n.contains_interval(a, b)


@given(st.floats(0, math.pi), st.integers(0, 3))
def test_vectorized_stats_match_sweep(theta, level):
    s = build("gasket", level)
    pr = profile(project_set(s, theta))
    st_ = direction_stats(s, [theta])
    assert st_["support"][0] == pytest.approx(pr.support_length, rel=1e-12, abs=1e-12)
    assert st_["l1"][0] == pytest.approx(pr.l1, rel=1e-12, abs=1e-12)
    assert st_["l2_sq"][0] == pytest.approx(pr.l2_sq, rel=1e-12, abs=1e-12)
    assert st_["max_count"][0] == pr.max_count


@given(st.floats(0, math.pi), st.integers(0, 4))
def test_l1_is_total_disc_diameter(theta, level):
    s = build("gasket", level)
    assert direction_stats(s, [theta])["l1"][0] == pytest.approx(len(s) * 2 * s.radius, rel=1e-12)


def test_g0_quadrature_regression():
    est = favard_quadrature(build("gasket", 0), 4096)
    assert est.value == pytest.approx(G0_FAV_4096, rel=1e-12)
    assert est.error_indicator < 1e-5


def test_favard_decreasing_small_levels():
    vals = [favard_quadrature(build("gasket", n), 1024).value for n in range(6)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_mc_deterministic_and_consistent():
    s = build("gasket", 1)
    a = buffon_mc(s, 40000, seed=7)
    b = buffon_mc(s, 40000, seed=7)
    assert a.value == b.value
    q = favard_quadrature(s, 2048).value
    assert abs(a.value - q) <= 4 * a.error_indicator


def test_mc_bound_contains_all_projections():
    s = build("gasket", 2)
    L = mc_bound(s)
    th = np.linspace(0, math.pi, 997)
    p = np.abs(np.cos(th)[:, None] * s.centers.real + np.sin(th)[:, None] * s.centers.imag) + s.radius
    assert p.max() <= L


def test_bad_directions_known_values():
    # three unit discs at mutual distance sqrt(3) overlap in every direction
    assert bad_direction_measure("gasket", 0, 1, 256) == 0.0
    assert bad_direction_measure("gasket", 0, 2, 256) == 0.0
    assert bad_direction_measure("gasket", 0, 3, 256) == pytest.approx(math.pi)
    m1 = [bad_direction_measure("gasket", N, 3, 256) for N in range(4)]
    assert all(a >= b for a, b in zip(m1, m1[1:]))


def test_decay_table_columns():
    rows = decay_table(3, 256)
    assert [r["n"] for r in rows] == [0, 1, 2, 3]
    assert rows[0]["fav_n_over_log_n"] is None and rows[1]["fav_n_over_log_n"] is None
    assert rows[2]["fav_n_over_log_n"] == pytest.approx(rows[2]["fav"] * 2 / math.log(2))
