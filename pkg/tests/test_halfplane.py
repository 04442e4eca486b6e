import numpy as np
import pytest

from spectral_bm.core import DIRICHLET, ROBIN, EigenSet, make_kgrid
from spectral_bm.errors import InvalidData, InvalidModulus, OutOfDomain
from spectral_bm.halfplane import (
    CauchyTransform,
    log_schwarz_reconstruct,
    outer_from_modulus,
    schwarz_reconstruct,
    winding_number,
)

PTS = np.array([0.5j, 1j, 0.3 + 2j, -1.5 + 0.7j, 5 + 0.1j, 3j])


@pytest.fixture(scope="module")
def grid():
    return make_kgrid()


def test_schwarz_zero(grid):
    assert schwarz_reconstruct(grid, np.zeros(len(grid)), 1j) == pytest.approx(0.0, abs=1e-14)


def test_schwarz_rational(grid):
    t = grid.points
    g = schwarz_reconstruct(grid, 1.0 / (1.0 + t * t))
    assert g(1j)[0] == pytest.approx(0.5, abs=1e-8)
    want = 1j / (PTS + 1j)
    assert np.max(np.abs(g(PTS) - want)) < 1e-8


def test_schwarz_rejects_lower_half_plane(grid):
    g = schwarz_reconstruct(grid, np.zeros(len(grid)))
    with pytest.raises(OutOfDomain):
        g(1 - 1j)


def test_cauchy_rejects_nan(grid):
    u = np.zeros(len(grid))
    u[5] = np.nan
    with pytest.raises(InvalidData):
        CauchyTransform(grid, u, "even")


def test_line_integral_and_leading_coefficient(grid):
    t = grid.points
    ct = CauchyTransform(grid, 1.0 / (1.0 + t * t), "even", singular_weight=0.0)
    assert ct.line_integral() == pytest.approx(np.pi, abs=1e-9)
    assert ct.leading_coefficient() == pytest.approx(1j, abs=1e-9)


def test_outer_robin(grid):
    t = grid.points.astype(complex)
    F = outer_from_modulus(grid, np.abs(t - 2j), EigenSet([2.0]), ROBIN)
    assert np.max(np.abs(F(PTS) - (PTS - 2j))) < 1e-7
    assert np.max(np.abs(F(t) - (t - 2j))) < 1e-7


def test_outer_dirichlet(grid):
    t = grid.points.astype(complex)
    F = outer_from_modulus(grid, np.abs((t - 2j) / (t + 1j)), EigenSet([2.0]), DIRICHLET)
    assert np.max(np.abs(F(PTS) - (PTS - 2j) / (PTS + 1j))) < 1e-7


def test_outer_free_dirichlet(grid):
    F = outer_from_modulus(grid, np.ones(len(grid)), EigenSet([]), DIRICHLET)
    assert np.max(np.abs(F(PTS) - 1.0)) < 1e-12


def test_outer_rejects_nonpositive(grid):
    mod = np.ones(len(grid))
    mod[3] = 0.0
    with pytest.raises(InvalidModulus):
        outer_from_modulus(grid, mod, EigenSet([]), DIRICHLET)


def test_outer_rejects_non_robin_modulus(grid):
    with pytest.raises(InvalidModulus):
        outer_from_modulus(grid, np.ones(len(grid)), EigenSet([]), ROBIN)


def _z0(k):
    return (k + 2j) / (k + 1j)


def test_log_schwarz_plain(grid):
    t = grid.points.astype(complex)
    Z = log_schwarz_reconstruct(grid, np.angle(_z0(t)), "plain")
    assert np.max(np.abs(Z(PTS) - _z0(PTS))) < 1e-7


def test_log_schwarz_ik(grid):
    t = grid.points.astype(complex)
    Z = log_schwarz_reconstruct(grid, np.angle(_z0(t)), "ik")
    assert np.max(np.abs(Z(PTS) - 1j * PTS * _z0(PTS))) < 1e-6


def test_log_schwarz_unknown_variant(grid):
    with pytest.raises(ValueError):
        log_schwarz_reconstruct(grid, np.zeros(len(grid)), "other")


def test_winding_number():
    assert winding_number(lambda k: k - 2j, (-1, 1, 1, 3)) == 1
    assert winding_number(lambda k: (k - 1j) * (k - 4j), (-1, 1, 0.5, 5)) == 2
    assert winding_number(lambda k: k + 1j, (-1, 1, 0.5, 5)) == 0
