"""Time the numba kernels against their pure-numpy counterparts.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
Both paths are called directly, so the SPECTRAL_BM_DISABLE_NUMBA flag does
not matter here.  Each row also reports the largest difference between the
two outputs.
"""
from __future__ import annotations

import argparse
import time

import numpy as np
from scipy.interpolate import CubicSpline

from spectral_bm import _kernels as K
from spectral_bm.core import Potential, make_kgrid
from spectral_bm.fixtures import WELL_A


def best_of(fn, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _max_diff(a, b):
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    return max(float(np.max(np.abs(np.asarray(x) - np.asarray(y)))) for x, y in zip(a, b))


def cases():
    V = Potential.from_function(WELL_A.potential)
    ks = make_kgrid(40.0, 1024).points.astype(complex)
    yield "jost_m (1024 k, 2001 x)", (ks, V.values, V.midpoints(), V.grid.dx), K._jost_m_loop, K._jost_m_numpy

    grid = make_kgrid(40.0, 2048)
    t = grid.points
    sp = CubicSpline(t, np.exp(-t) * np.cos(t))
    coef = np.ascontiguousarray(sp.c)
    starts = np.ascontiguousarray(t[:-1])
    widths = np.ascontiguousarray(np.diff(t))
    pts = np.linspace(0.0, 40.0, 512) + 0.5j
    args = (starts, widths, coef, pts, K._GL_X, K._GL_W, K.NEAR_FACTOR)
    yield "cauchy_sum (512 k, 2047 pieces)", args, K._cauchy_loop, K._cauchy_numpy

    s = np.linspace(0.0, 9.0, 451)
    yield "filon (451 s, 2047 pieces)", (t, np.exp(-t), s), K._filon_loop, K._filon_numpy


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    jit = {K._jost_m_loop: K._jost_m_numba, K._cauchy_loop: K._cauchy_numba, K._filon_loop: K._filon_numba}
    print(f"numba available: {K.HAVE_NUMBA}")
    print(f"{'kernel':34s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s} {'max diff':>10s}")
    for name, a, loop, ref in cases():
        fast = jit[loop]
        fast(*a)  # compile outside the timing
        t_fast, out_fast = best_of(lambda: fast(*a), args.repeat)
        t_ref, out_ref = best_of(lambda: ref(*a), args.repeat)
        print(f"{name:34s} {t_fast:10.4f} {t_ref:10.4f} {t_ref / t_fast:8.1f} {_max_diff(out_fast, out_ref):10.2e}")


if __name__ == "__main__":
    main()
