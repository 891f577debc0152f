import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from favard.ssv import riesz_ratio, ssv_check, ssv_cover_predict, ssv_scan
from favard.zeros import DegenerateDirections

CENTER = 4 * math.pi * math.sqrt(3) / 27


def test_preconditions():
    with pytest.raises(ValueError, match="3\\^-\\(m\\+2\\)"):
        ssv_scan(0.3, 2, 4, 2.0, 0.1)
    with pytest.raises(ValueError):
        ssv_scan(0.3, 5, 4, 2.0, 3.0**-7)
    with pytest.raises(ValueError):
        ssv_cover_predict(0.3, 1, 4, width="quarter")


def test_theta0_single_cluster():
    scan = ssv_scan(0.0, 1, 4, 2.0, 3.0**-3)
    assert len(scan.cells) == 1
    lo, hi = scan.cells.intervals[0]
    assert lo < CENTER < hi
    assert 0.5 * (lo + hi) == pytest.approx(CENTER, abs=1e-6)
    cover = ssv_cover_predict(0.0, 1, 4)
    assert cover.centers == pytest.approx([CENTER], abs=1e-9)
    assert ssv_check(scan, cover, 2.0).contained


def test_infinite_A_is_empty():
    assert ssv_scan(0.0, 1, 4, math.inf, 3.0**-3).measure == 0.0


@given(st.sampled_from(list(DegenerateDirections().avoiding_grid(16))), st.integers(1, 2), st.sampled_from([4, 6]))
def test_cells_in_unit_interval_and_covered(theta, m, ell):
    scan = ssv_scan(float(theta), m, ell, 2.0, 3.0 ** (-m - 2))
    cover = ssv_cover_predict(float(theta), m, ell)
    if len(scan.cells):
        assert scan.cells.lo.min() >= 0.0 and scan.cells.hi.max() <= 1.0
    assert ssv_check(scan, cover, 2.0).contained
    assert scan.measure <= 2 * 2 * cover.half_widths.sum() + 1e-12
    assert np.all((cover.centers > 0) & (cover.centers <= 1))


@pytest.mark.parametrize("theta", [0.0, math.pi / 3, 2 * math.pi / 3])
@pytest.mark.parametrize("m", [1, 2])
def test_real_zero_directions(theta, m):
    scan = ssv_scan(theta, m, 4, 2.0, 3.0 ** (-m - 2))
    cover = ssv_cover_predict(theta, m, 4)
    assert ssv_check(scan, cover, 2.0).contained


def test_cover_widths():
    full = ssv_cover_predict(0.7, 2, 4)
    half = ssv_cover_predict(0.7, 2, 4, width="half")
    assert np.allclose(full.half_widths, 3.0 ** (-full.s - 4))
    assert np.allclose(half.half_widths, 3.0 ** (-half.s - 2))


@pytest.mark.parametrize("theta", [0.4, 1.2, 2.6])
def test_riesz_comparability(theta):
    assert riesz_ratio(ssv_cover_predict(theta, 2, 6)) <= 10.0
