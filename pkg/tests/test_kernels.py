import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.interpolate import CubicSpline

from spectral_bm import _kernels as K
from spectral_bm.core import Potential, make_kgrid
from spectral_bm.fixtures import WELL_A

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


def _jost_args():
    V = Potential.from_function(WELL_A.potential, x_max=6.0, dx=0.01)
    ks = np.array([0.3, 2.0, 7.5, 1.0 + 0.5j])
    return ks, V.values, V.midpoints(), V.grid.dx


def _cauchy_args():
    t = make_kgrid(10.0, 256).points
    sp = CubicSpline(t, np.exp(-t) * np.cos(t))
    pts = np.array([0.05, 1.0 + 0.01j, 3.0 + 0.5j, 2j, 9.9 + 1e-3j])
    return (np.ascontiguousarray(t[:-1]), np.ascontiguousarray(np.diff(t)), np.ascontiguousarray(sp.c),
            pts, K._GL_X, K._GL_W, K.NEAR_FACTOR)


def _filon_args():
    t = make_kgrid(10.0, 256).points
    return t, np.exp(-t), np.linspace(0.0, 5.0, 41)


@needs_numba
@pytest.mark.parametrize("jit,ref,args", [
    (K._jost_m_numba, K._jost_m_numpy, _jost_args),
    (K._cauchy_numba, K._cauchy_numpy, _cauchy_args),
    (K._filon_numba, K._filon_numpy, _filon_args),
], ids=["jost_m", "cauchy_sum", "filon"])
def test_numba_matches_numpy(jit, ref, args):
    a = args()
    got, want = jit(*a), ref(*a)
    got = got if isinstance(got, tuple) else (got,)
    want = want if isinstance(want, tuple) else (want,)
    for g, w in zip(got, want):
        assert np.max(np.abs(np.asarray(g) - np.asarray(w))) < 1e-12 * max(1.0, np.max(np.abs(w)))


def test_filon_exact_for_linear_data():
    k = np.linspace(0.0, 3.0, 31)
    s = np.array([0.0, 0.7, 2.0])
    c, sn = K.filon(k, np.ones_like(k), s)
    want_c = np.where(s > 0, np.sin(3.0 * s) / np.where(s > 0, s, 1.0), 3.0)
    want_s = np.where(s > 0, (1 - np.cos(3.0 * s)) / np.where(s > 0, s, 1.0), 0.0)
    assert np.allclose(c, want_c, atol=1e-13)
    assert np.allclose(sn, want_s, atol=1e-13)


def test_cauchy_sum_constant_piece():
    # int_0^1 ds / (s - w) = log((1 - w) / (-w)) for w off [0, 1]
    w = 0.5 + 2j
    coef = np.array([[0.0], [0.0], [0.0], [1.0]])
    got = K.cauchy_sum(np.array([0.0]), np.array([1.0]), coef, np.array([w]))[0]
    assert got == pytest.approx(np.log((1 - w) / (-w)), abs=1e-12)


def test_env_flag_selects_numpy():
    env = dict(os.environ, SPECTRAL_BM_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from spectral_bm import _kernels as K; print(K.USE_NUMBA)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
