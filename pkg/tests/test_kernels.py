import os
import subprocess
import sys

import numpy as np
import pytest

from favard import _kernels
from favard.geometry import build

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("family,level", [("gasket", 0), ("gasket", 3), ("corner-cantor", 3)])
def test_disc_stats_parity(family, level):
    s = build(family, level)
    th = np.linspace(0, np.pi, 257)
    a = _kernels.disc_stats_numpy(s.centers.real, s.centers.imag, s.radius, th)
    b = _kernels.disc_stats_numba(s.centers.real, s.centers.imag, s.radius, th)
    for x, y in zip(a[:3], b[:3]):
        np.testing.assert_allclose(x, y, rtol=1e-12, atol=1e-12)
    np.testing.assert_array_equal(a[3], b[3])


def test_mc_hits_parity():
    s = build("gasket", 2)
    rng = np.random.default_rng(3)
    th = rng.uniform(0, np.pi, 5000)
    off = rng.uniform(-3, 3, 5000)
    np.testing.assert_array_equal(
        _kernels.mc_hits_numpy(s.centers.real, s.centers.imag, s.radius, th, off),
        _kernels.mc_hits_numba(s.centers.real, s.centers.imag, s.radius, th, off),
    )


@pytest.mark.parametrize("kind", [0, 1])
def test_pair_sum_parity(kind):
    rng = np.random.default_rng(kind)
    coef = np.exp(1j * rng.uniform(0, 6, 200))
    freq = np.concatenate([rng.uniform(0, 30, 190), np.full(10, 4.0)])
    a = _kernels.pair_sum_numpy(coef, freq, kind)
    b = _kernels.pair_sum_numba(coef, freq, kind)
    assert a == pytest.approx(b, rel=1e-11)


def test_env_flag_selects_numpy():
    env = dict(os.environ, FAVARD_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from favard import _kernels; print(_kernels.backend())"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"
