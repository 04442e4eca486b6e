import math

import numpy as np
import pytest
from scipy.integrate import quad

from spectral_bm.core import (
    ANTI_CONJUGATE,
    CONJUGATE,
    BoundaryFunction,
    BoundaryParam,
    EigenSet,
    Potential,
    SpectralDataSet,
    XGrid,
    blaschke,
    extend_by_symmetry,
    faddeev_moment,
    make_kgrid,
)
from spectral_bm.errors import InvalidArgument, InvalidData, InvalidDataset
from spectral_bm.fixtures import WELL_A


def test_make_kgrid_default():
    g = make_kgrid(40.0, 4096)
    assert len(g) == 4096
    assert g.points[-1] == 40.0
    assert np.all(np.diff(g.points) > 0)


def test_make_kgrid_small():
    g = make_kgrid(1.0, 16)
    assert len(g) == 16
    assert g.points[0] > 0 and g.points[-1] == 1.0


def test_make_kgrid_rejects_zero_kmax():
    with pytest.raises(InvalidArgument):
        make_kgrid(0.0, 100)


def test_xgrid_must_start_at_zero_and_be_uniform():
    with pytest.raises(InvalidArgument):
        XGrid(np.array([0.1, 0.2, 0.3]))
    with pytest.raises(InvalidArgument):
        XGrid(np.array([0.0, 0.1, 0.3]))


def test_extend_by_symmetry_constant():
    g = make_kgrid(10.0, 256)
    f = BoundaryFunction(g, np.ones(len(g), dtype=complex), CONJUGATE)
    assert extend_by_symmetry(f, -3.0) == pytest.approx(1.0)


def test_extend_by_symmetry_anti_conjugate():
    g = make_kgrid(10.0, 1024)
    k = g.points
    f = BoundaryFunction(g, k - 2j, ANTI_CONJUGATE)
    assert extend_by_symmetry(f, -1.0) == pytest.approx(-1 - 2j, abs=1e-6)
    f2 = BoundaryFunction(g, k + 1j * k * k, ANTI_CONJUGATE)
    assert extend_by_symmetry(f2, -2.0) == pytest.approx(-2 + 4j, abs=1e-5)


def test_blaschke_values():
    assert blaschke(0.7 + 0.3j, EigenSet([])) == pytest.approx(1.0)
    assert blaschke(2.0, EigenSet([2.0])) == pytest.approx(-1j)
    t = np.linspace(-50, 50, 1001)
    assert np.max(np.abs(np.abs(blaschke(t, EigenSet([1.0, 4.0]))) - 1.0)) < 1e-14


def test_faddeev_moment():
    assert faddeev_moment(Potential.zero()) == 0.0
    V = Potential.from_function(WELL_A.potential)
    ref, _ = quad(lambda x: (1 + x) * abs(WELL_A.potential(x)), 0.0, 10.0, limit=200)
    got = faddeev_moment(V)
    assert got > 0
    assert got == pytest.approx(ref, rel=1e-6)


def test_potential_rejects_nan():
    g = XGrid.uniform(1.0, 0.1)
    vals = np.zeros(len(g))
    vals[3] = np.nan
    with pytest.raises(InvalidData):
        Potential(g, vals)


def test_boundary_param():
    assert BoundaryParam.dirichlet().angle == pytest.approx(math.pi)
    assert BoundaryParam.robin(0.0).angle == pytest.approx(math.pi / 2)
    with pytest.raises(InvalidArgument):
        BoundaryParam.robin(float("inf"))


def test_eigenset_validation():
    with pytest.raises(InvalidArgument):
        EigenSet([2.0, 1.0])
    with pytest.raises(InvalidArgument):
        EigenSet([-1.0])


def test_dataset_tag_validation():
    g = make_kgrid(10.0, 64)
    mod = BoundaryFunction(g, np.ones(len(g), dtype=complex), CONJUGATE)
    with pytest.raises(InvalidDataset):
        SpectralDataSet("D9", mod, EigenSet([]), EigenSet([]), None, None)
