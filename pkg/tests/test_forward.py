import math

import numpy as np
import pytest

from oracles import fd_bound_states
from spectral_bm.core import DIRICHLET, ROBIN, BoundaryFunction, BoundaryParam, EigenSet, Potential, make_kgrid
from spectral_bm.errors import InterlacingViolation
from spectral_bm.fixtures import WELL_A, WELL_B
from spectral_bm.forward import (
    bound_states,
    forward_summary,
    interlacing_check,
    jost_function,
    jost_solution,
    levinson_report,
    norming_constants,
    phase_shift,
    scattering_matrix,
    spectral_measure,
)

K_TEST = np.array([0.0, 0.3, 1.0, 2.5, 7.0, 20.0]) + 0j


@pytest.fixture(scope="module")
def va():
    return Potential.from_function(WELL_A.potential)


@pytest.fixture(scope="module")
def vb():
    return Potential.from_function(WELL_B.potential)


def test_free_jost_solution():
    V = Potential.zero()
    for k in (0.5, 3.0 + 0.2j):
        f, fp = jost_solution(V, k)
        x = V.grid.points
        assert np.max(np.abs(f - np.exp(1j * k * x))) < 1e-10
        assert np.max(np.abs(fp - 1j * k * np.exp(1j * k * x))) < 1e-10


@pytest.mark.parametrize("model", [WELL_A, WELL_B], ids=["well_a", "well_b"])
def test_jost_solution_closed_form(model):
    V = Potential.from_function(model.potential)
    x = V.grid.points[::50]
    for k in (0.5, 2.0, 6.0):
        f, _ = jost_solution(V, k)
        assert np.max(np.abs(f[::50] - model.jost_solution(k, x))) < 1e-6


def test_free_dirichlet_jost_function():
    assert np.allclose(jost_function(Potential.zero(), BoundaryParam.dirichlet(), K_TEST), 1.0, atol=1e-12)


def test_jost_function_well_a(va):
    Fa = jost_function(va, WELL_A.alpha, K_TEST)
    Fb = jost_function(va, WELL_A.beta, K_TEST)
    assert np.max(np.abs(Fa - (K_TEST - 2j))) < 1e-6
    assert np.max(np.abs(Fb - (K_TEST - 1j) * (K_TEST - 4j) / (K_TEST + 2j))) < 1e-6


def test_jost_function_well_b(vb):
    Fa = jost_function(vb, WELL_B.alpha, K_TEST)
    assert np.max(np.abs(Fa - (K_TEST - 2j) / (K_TEST + 1j))) < 1e-6


def test_bound_states(va):
    assert len(bound_states(Potential.zero(), BoundaryParam.dirichlet())) == 0
    assert np.allclose(bound_states(va, WELL_A.alpha).kappas, [2.0], atol=1e-8)
    assert np.allclose(bound_states(va, WELL_A.beta).kappas, [1.0, 4.0], atol=1e-8)


def test_bound_states_against_finite_differences(va):
    # the finite-difference oracle is second order; 1e-3 is ample at h = 5e-3
    for bc in (WELL_A.alpha, WELL_A.beta):
        ours = bound_states(va, bc).kappas
        ref = np.sort(fd_bound_states(WELL_A.potential, bc.cot_value, length=20.0, n=8000))
        assert np.allclose(ours, ref, atol=1e-3)


def test_norming_constants(va, vb):
    g, m = norming_constants(va, WELL_A.alpha, EigenSet([2.0]))
    assert g[0] == pytest.approx(math.sqrt(2 / 5), abs=1e-6)
    assert m[0] == pytest.approx(math.sqrt(40), abs=1e-5)
    g, m = norming_constants(vb, WELL_B.alpha, EigenSet([2.0]))
    assert g[0] == pytest.approx(math.sqrt(3), abs=1e-6)
    assert m[0] == pytest.approx(4 * math.sqrt(3), abs=1e-5)
    g, m = norming_constants(Potential.zero(), BoundaryParam.dirichlet(), EigenSet([]))
    assert len(g) == 0 and len(m) == 0


def _bf(grid, func, parity):
    return BoundaryFunction(grid, func(grid.points.astype(complex)), parity)


def test_phase_shift_closed_forms():
    g = make_kgrid()
    assert np.allclose(phase_shift(_bf(g, lambda k: np.ones_like(k), "conjugate")), 0.0)
    phi = phase_shift(_bf(g, lambda k: k - 2j, "anti-conjugate"))
    assert phi[0] == pytest.approx(math.pi / 2, abs=1e-4)
    phi = phase_shift(_bf(g, lambda k: (k - 2j) / (k + 1j), "conjugate"))
    assert phi[0] == pytest.approx(math.pi, abs=1e-4)


def test_scattering_matrix():
    g = make_kgrid()
    k = g.points
    S = scattering_matrix(_bf(g, lambda q: np.ones_like(q), "conjugate"))
    assert np.allclose(S.values, 1.0)
    S = scattering_matrix(_bf(g, lambda q: q - 2j, "anti-conjugate"))
    assert np.max(np.abs(S.values - (k + 2j) / (k - 2j))) < 1e-12
    S = scattering_matrix(_bf(g, lambda q: (q - 2j) / (q + 1j), "conjugate"))
    want = (k + 1j) * (k + 2j) / ((k - 1j) * (k - 2j))
    assert np.max(np.abs(S.values - want)) < 1e-12


def test_spectral_measure():
    g = make_kgrid()
    lam_free = spectral_measure(_bf(g, lambda q: np.ones_like(q), "conjugate"), EigenSet([]), [])
    assert np.allclose(lam_free.ac_density, np.sqrt(lam_free.lam) / np.pi)
    mu = spectral_measure(_bf(g, lambda q: q - 2j, "anti-conjugate"), EigenSet([2.0]), [math.sqrt(2 / 5)])
    assert np.allclose(mu.ac_density, np.sqrt(mu.lam) / (np.pi * (mu.lam + 4)))
    assert mu.point_masses[0] == pytest.approx((-4.0, 0.4))
    mu = spectral_measure(_bf(g, lambda q: (q - 2j) / (q + 1j), "conjugate"), EigenSet([2.0]), [math.sqrt(3)])
    assert np.allclose(mu.ac_density, np.sqrt(mu.lam) * (mu.lam + 1) / (np.pi * (mu.lam + 4)))
    assert mu.point_masses[0] == pytest.approx((-4.0, 3.0))


def test_levinson(vb):
    g = make_kgrid()
    free = forward_summary(Potential.zero(), BoundaryParam.dirichlet(), g)
    assert levinson_report(free.phase, free.eigs, free.d_flag, DIRICHLET) == pytest.approx((0, 0, 0), abs=1e-8)
    s = forward_summary(vb, WELL_B.alpha, g)
    phi0, rhs, res = levinson_report(s.phase, s.eigs, s.d_flag, DIRICHLET)
    assert phi0 == pytest.approx(math.pi, abs=1e-2) and rhs == pytest.approx(math.pi)
    # Robin branch: reported only; the unwrapped phase of k - 2i starts at pi/2
    a = forward_summary(Potential.from_function(WELL_A.potential), WELL_A.alpha, g)
    phi0, rhs, res = levinson_report(a.phase, a.eigs, a.d_flag, ROBIN)
    assert phi0 == pytest.approx(math.pi / 2, abs=1e-3)
    assert math.isfinite(res)


def test_interlacing():
    assert interlacing_check(EigenSet([2.0]), EigenSet([1.0, 4.0])) == "PlusOne"
    assert interlacing_check(EigenSet([]), EigenSet([])) == "Equal"
    with pytest.raises(InterlacingViolation):
        interlacing_check(EigenSet([1.0, 3.0]), EigenSet([2.0, 2.5]))


def test_forward_summary_well_a(va):
    s = forward_summary(va, WELL_A.alpha)
    k = s.F.grid.points
    assert np.max(np.abs(s.F.values - (k - 2j)) / np.abs(k - 2j)) < 1e-6
    assert s.d_flag == 0
