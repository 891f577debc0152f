"""Time the numba kernels against their numpy counterparts.

    python3 benchmarks/bench_kernels.py [--level 6] [--angles 2048] [--repeat 3]
"""

import argparse
import time

import numpy as np

from favard import _kernels
from favard.expsum import ProductSpec, expand
from favard.geometry import build
from favard.projection import midpoint_angles


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--level", type=int, default=6)
    ap.add_argument("--angles", type=int, default=2048)
    ap.add_argument("--samples", type=int, default=1 << 16)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    s = build("gasket", args.level)
    re_, im_ = s.centers.real, s.centers.imag
    th = midpoint_angles(args.angles)
    rng = np.random.default_rng(0)
    mth = rng.uniform(0, np.pi, args.samples)
    off = rng.uniform(-3, 3, args.samples)
    e = expand(ProductSpec(0.7, 0, 5))

    cases = [
        (f"disc_stats  {len(s)} discs x {args.angles} angles", _kernels.disc_stats_numpy, _kernels.disc_stats_numba, (re_, im_, s.radius, th)),
        (f"mc_hits     {len(s)} discs x {args.samples} lines", _kernels.mc_hits_numpy, _kernels.mc_hits_numba, (re_, im_, s.radius, mth, off)),
        (f"pair_sum    {len(e)} terms", _kernels.pair_sum_numpy, _kernels.pair_sum_numba, (e.coeffs, e.freqs, 0)),
    ]
    print(f"{'kernel':48s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, f_np, f_nb, a in cases:
        f_nb(*a)  # compile outside the timing
        t_np, r_np = best_of(lambda: f_np(*a), args.repeat)
        t_nb, r_nb = best_of(lambda: f_nb(*a), args.repeat)
        if isinstance(r_np, tuple):
            agree = all(np.allclose(x, y, rtol=1e-10, atol=1e-12) for x, y in zip(r_np, r_nb))
        else:
            agree = np.allclose(r_np, r_nb, rtol=1e-10)
        print(f"{name:48s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}{'' if agree else '  MISMATCH'}")


if __name__ == "__main__":
    main()
