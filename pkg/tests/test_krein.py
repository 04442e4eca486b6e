import math

import numpy as np
import pytest

from spectral_bm.core import DIRICHLET, ROBIN, EigenSet, make_kgrid
from spectral_bm.errors import InvalidXi, ReductionFailure
from spectral_bm.fixtures import WELL_A, WELL_B
from spectral_bm.krein import (
    KreinShift,
    eigen_from_jumps,
    recover_from_xi,
    reduce_xi,
    xi_at_zero_report,
    xi_from_jost,
    z_from_xi,
)

PTS = np.array([0.5j, 0.3 + 2j, -1.5 + 0.7j, 5 + 0.1j])


@pytest.fixture(scope="module")
def grid():
    return make_kgrid()


def xi_well_a(k):
    k = np.asarray(k, dtype=complex)
    return (np.angle(k - 2j) + np.angle(k + 2j) - np.angle(k - 1j) - np.angle(k - 4j)) / math.pi


def xi_well_b(k):
    k = np.asarray(k, dtype=complex)
    return 0.5 + (np.angle(k - 1j) + np.angle(k + 1j) + np.angle(k - 3j)
                  - np.angle(k) - np.angle(k - 2j) - np.angle(k + 2j)) / math.pi


def shift_a(grid):
    return KreinShift(grid, xi_well_a(grid.points), ((1.0, 0), (2.0, 1), (4.0, 0)), 1, 0.0)


def shift_b(grid):
    return KreinShift(grid, xi_well_b(grid.points), ((1.0, 1), (2.0, 0), (3.0, 1)), 0, 0.5)


@pytest.mark.parametrize("model,closed,jumps", [
    (WELL_A, xi_well_a, ((1.0, 0), (2.0, 1), (4.0, 0))),
    (WELL_B, xi_well_b, ((1.0, 1), (2.0, 0), (3.0, 1))),
], ids=["well_a", "well_b"])
def test_xi_from_jost(grid, model, closed, jumps):
    for eigs in ((model.eig_alpha, model.eig_beta), (None, None)):
        xi = xi_from_jost(model.F_alpha, model.F_beta, model.alpha, model.beta, grid, *eigs)
        assert np.max(np.abs(xi.real_axis - closed(grid.points))) < 1e-12
        assert np.allclose([k for k, _ in xi.jumps], [k for k, _ in jumps], atol=1e-9)
        assert [v for _, v in xi.jumps] == [v for _, v in jumps]


def test_xi_range(grid):
    for xi in (shift_a(grid), shift_b(grid)):
        assert np.all((xi.real_axis > 0) & (xi.real_axis < 1))


def test_xi_at_zero(grid):
    obs, pred, _ = xi_at_zero_report(shift_a(grid), 0, 0)
    assert obs == pytest.approx(1.0, abs=1e-4) and pred == 1.0


def test_eigen_from_jumps(grid):
    kind, na, nb, ea, eb = eigen_from_jumps(shift_a(grid))
    assert (kind, na, nb) == (ROBIN, 1, 2)
    assert list(ea) == [2.0] and list(eb) == [1.0, 4.0]
    kind, na, nb, ea, eb = eigen_from_jumps(shift_b(grid))
    assert (kind, na, nb) == (DIRICHLET, 1, 2)
    assert list(ea) == [2.0] and list(eb) == [1.0, 3.0]


def test_invalid_profiles(grid):
    vals = np.full(len(grid), 0.25)
    with pytest.raises(InvalidXi):
        KreinShift(grid, vals, (), 0, 0.3)
    with pytest.raises(InvalidXi):
        KreinShift(grid, vals, ((1.0, 1), (2.0, 1)), 0, 0.0)
    with pytest.raises(InvalidXi):
        eigen_from_jumps(KreinShift(grid, vals, ((1.0, 0),), 1, 0.5))


def test_reduce_and_rebuild_z(grid):
    xi = shift_a(grid)
    ea, eb = EigenSet([2.0]), EigenSet([1.0, 4.0])
    xi0 = reduce_xi(xi, ea, eb)
    # decays like 1/k
    assert abs(xi0[-1]) * grid.k_max < 1.0
    Z = z_from_xi(xi0, grid, ea, eb, ROBIN).Z
    want = WELL_A.F_alpha(PTS) / WELL_A.F_beta(PTS)
    assert np.max(np.abs(Z(PTS) - want) / np.abs(want)) < 1e-6


def test_reduce_rejects_wrong_eigenvalues(grid):
    with pytest.raises(ReductionFailure):
        reduce_xi(shift_a(grid), EigenSet([2.0]), EigenSet([1.0]))


@pytest.mark.parametrize("model,shift", [(WELL_A, shift_a), (WELL_B, shift_b)], ids=["well_a", "well_b"])
def test_recover_from_xi(grid, model, shift):
    R = recover_from_xi(shift(grid))
    assert R.alpha.is_dirichlet == model.alpha.is_dirichlet
    if not model.alpha.is_dirichlet:
        assert R.alpha.cot_value == pytest.approx(model.alpha.cot_value, abs=1e-5)
    assert R.beta.cot_value == pytest.approx(model.beta.cot_value, abs=1e-5)
    for got, want in ((R.F_alpha, model.F_alpha), (R.F_beta, model.F_beta)):
        w = want(PTS)
        assert np.max(np.abs(got(PTS) - w) / np.abs(w)) < 1e-4


def test_recover_free_dirichlet(grid):
    k = grid.points
    xi = KreinShift(grid, 0.5 + np.arctan(1.0 / k) / math.pi, (), None, 0.5)
    assert xi.imag_at_zero == 1
    R = recover_from_xi(xi)
    assert R.alpha.is_dirichlet
    assert R.beta.cot_value == pytest.approx(-1.0, abs=1e-5)
    assert np.max(np.abs(R.F_alpha(PTS) - 1.0)) < 1e-6
    assert np.max(np.abs(R.F_beta(PTS) - (PTS + 1j))) < 1e-5
