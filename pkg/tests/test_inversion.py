import math

import numpy as np
import pytest

from spectral_bm.core import DIRICHLET, ROBIN, HalfPlaneFunction, make_kgrid
from spectral_bm.errors import InvalidData
from spectral_bm.fixtures import WELL_A, WELL_B
from spectral_bm.borg_marchenko import boundary_data_f
from spectral_bm.inversion import (
    GLData,
    fm_discrete_data,
    fourier_half_line,
    gl_kernel,
    kernel_from_function,
    marchenko_invert,
    reflection_coefficient,
    reflection_from_origin,
)
from spectral_bm.pipeline import METHODS, potential_from_pair

V_TOL = 5e-2
TAU_A = (4 + math.sqrt(34)) / 5
C_A = 3 / math.sqrt(5 * math.sqrt(34))


def _tau_b():
    r = np.roots([2.0, 0.0, -5.0, -9.0])
    return float(max(r[np.abs(r.imag) < 1e-12].real))


@pytest.fixture(scope="module")
def grid():
    return make_kgrid()


def _hp(f):
    return HalfPlaneFunction(f, "numeric", None)


def _sup_error(V, model):
    x = V.grid.points
    return float(np.max(np.abs(V.values - model.potential(x))))


def test_fourier_half_line_cos():
    k = make_kgrid(40.0, 4096).points
    s = np.linspace(0.0, 4.0, 21)
    got = fourier_half_line(k, 1.0 / (1.0 + k * k), s, "cos")
    # piecewise-linear body: second order in the k step (about 1e-2 here)
    assert np.max(np.abs(got - 0.5 * math.pi * np.exp(-s))) < 2e-5


def test_fourier_half_line_sin():
    k = make_kgrid(40.0, 4096).points
    s = np.linspace(0.1, 4.0, 20)
    got = fourier_half_line(k, k / (1.0 + k * k), s, "sin", (1, 3))
    assert np.max(np.abs(got - 0.5 * math.pi * np.exp(-s))) < 1e-5


def test_gl_kernel_at_origin(grid):
    k = grid.points.astype(complex)
    data = GLData(grid, np.abs(WELL_A.F_alpha(k)), WELL_A.eig_alpha, WELL_A.g_alpha, ROBIN)
    G = gl_kernel(data).gl_matrix(2)
    assert G[0, 0] == pytest.approx(-8.0 / 5.0, abs=1e-4)


def test_gl_data_validation(grid):
    with pytest.raises(InvalidData):
        GLData(grid, np.ones(len(grid)), WELL_A.eig_alpha, [], ROBIN)


def test_marchenko_from_closed_kernel():
    # M(y) = 36 exp(-2y) for the Robin well
    ker = kernel_from_function("Marchenko", lambda s: 36.0 * np.exp(-2.0 * s), span=10.0)
    V = marchenko_invert(ker)
    assert _sup_error(V, WELL_A) < V_TOL


def test_reflection_well_a(grid):
    k = grid.points.astype(complex)
    _, L = reflection_coefficient(WELL_A.F_alpha, WELL_A.F_beta, WELL_A.alpha, WELL_A.beta, grid)
    want = -18.0 / (25 * k * k - 40j * k + 18)
    assert np.max(np.abs(L.values - want)) < 1e-12


def test_reflection_well_b(grid):
    k = grid.points.astype(complex)
    _, L = reflection_coefficient(WELL_B.F_alpha, WELL_B.F_beta, WELL_B.alpha, WELL_B.beta, grid)
    want = 3 * (k - 3j) / (2 * k**3 + 5 * k + 9j)
    assert np.max(np.abs(L.values - want)) < 1e-12


@pytest.mark.parametrize("model", [WELL_A, WELL_B], ids=["well_a", "well_b"])
def test_reflection_from_origin_matches(model):
    refl = reflection_coefficient(model.F_alpha, model.F_beta, model.alpha, model.beta)
    for k in (0.4, 3.0):
        j = boundary_data_f(model.F_alpha, model.F_beta, model.alpha, model.beta, k)
        assert reflection_from_origin(j.f0, j.fprime0, k) == pytest.approx(complex(refl(k)), abs=1e-12)


def test_fm_discrete_data_well_a():
    taus, c = fm_discrete_data(reflection_coefficient(WELL_A.F_alpha, WELL_A.F_beta, WELL_A.alpha, WELL_A.beta))
    assert np.allclose(taus.kappas, [TAU_A], atol=1e-9)
    assert np.allclose(c, [C_A], atol=1e-7)


def test_fm_discrete_data_well_b():
    taus, c = fm_discrete_data(reflection_coefficient(WELL_B.F_alpha, WELL_B.F_beta, WELL_B.alpha, WELL_B.beta))
    tau = _tau_b()
    assert np.allclose(taus.kappas, [tau], atol=1e-9)
    assert c[0] == pytest.approx(math.sqrt(3 * (tau - 3) / (5 - 6 * tau * tau)), abs=1e-7)
    assert c[0] == pytest.approx(0.337076, abs=1e-6)


@pytest.mark.parametrize("method", METHODS)
@pytest.mark.parametrize("model", [WELL_A, WELL_B], ids=["well_a", "well_b"])
def test_potential_all_methods(grid, model, method):
    V = potential_from_pair(_hp(model.F_alpha), _hp(model.F_beta), model.alpha, model.beta,
                            model.eig_alpha, grid, method)
    assert _sup_error(V, model) < V_TOL
