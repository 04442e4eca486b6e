import json

import numpy as np
import pytest

from spectral_bm import io
from spectral_bm.cli import main
from spectral_bm.core import CONJUGATE, BoundaryFunction, EigenSet, Potential, SpectralDataSet, XGrid, make_kgrid
from spectral_bm.errors import InvalidData
from spectral_bm.fixtures import WELL_A
from spectral_bm.krein import KreinShift


def test_json_round_trip_exact(tmp_path):
    grid = make_kgrid(40.0, 64)
    k = grid.points.astype(complex)
    mod = BoundaryFunction(grid, np.abs(WELL_A.F_alpha(k)).astype(complex), CONJUGATE)
    D = SpectralDataSet("D3", mod, EigenSet([2.0]), EigenSet([4.0]), 5.0, None)
    io.write_json(tmp_path / "d.json", io.dataset_to_dict(D))
    back = io.dataset_from_dict(io.read_json(tmp_path / "d.json"))
    assert back.tag == "D3" and back.h_beta_alpha == 5.0
    assert np.array_equal(back.modulus.values, D.modulus.values)
    assert np.array_equal(back.modulus.k, D.modulus.k)
    assert list(back.eig_beta) == [4.0]


def test_xi_round_trip(tmp_path):
    grid = make_kgrid(10.0, 32)
    xi = KreinShift(grid, np.full(len(grid), 1.0 / 3.0), ((1.0, 1), (2.0, 0), (3.0, 1)), 0, 0.5)
    io.write_json(tmp_path / "xi.json", io.xi_to_dict(xi))
    back = io.xi_from_dict(io.read_json(tmp_path / "xi.json"))
    assert np.array_equal(back.real_axis, xi.real_axis)
    assert back.jumps == xi.jumps and back.imag_at_zero == 0 and back.dirichlet


def test_potential_csv_round_trip(tmp_path):
    V = Potential.from_function(WELL_A.potential, x_max=2.0, dx=0.01)
    io.write_potential(tmp_path / "v.csv", V)
    back = io.read_potential(tmp_path / "v.csv")
    assert np.array_equal(back.values, V.values)
    assert np.array_equal(back.grid.points, V.grid.points)


def test_bad_json_and_csv(tmp_path):
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(InvalidData):
        io.read_json(tmp_path / "bad.json")
    (tmp_path / "bad.csv").write_text("a,b\n0,1\n")
    with pytest.raises(InvalidData):
        io.read_potential_samples(tmp_path / "bad.csv")


@pytest.fixture(scope="module")
def well_a_csv(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    io.write_potential(d / "well_a.csv", Potential.from_function(WELL_A.potential))
    return d


def test_cli_forward_recover_krein(well_a_csv):
    d = well_a_csv
    out = d / "fwd"
    rc = main(["forward", str(d / "well_a.csv"), "--cot-alpha", str(WELL_A.alpha.cot_value),
               "--cot-beta", str(WELL_A.beta.cot_value), "--emit-dataset", "D3", "--emit-xi",
               "--out", str(out)])
    assert rc == 0
    assert main(["recover", str(out / "dataset_D3.json"), "--out", str(d / "rec")]) == 0
    params = io.read_json(d / "rec" / "params.json")
    assert params["h"] == pytest.approx(5.0, abs=1e-4)
    assert np.allclose(params["eig_beta"], [1.0, 4.0], atol=1e-5)
    assert main(["krein", str(out / "xi.json"), "--out", str(d / "kr")]) == 0
    x, v = io.read_potential_samples(d / "kr" / "potential.csv")
    assert np.max(np.abs(v - WELL_A.potential(x))) < 5e-2


def test_cli_exit_codes(tmp_path, well_a_csv):
    assert main(["recover", str(tmp_path / "missing.json"), "--out", str(tmp_path / "o")]) == 2
    (tmp_path / "d9.json").write_text(json.dumps({"tag": "D9"}))
    assert main(["recover", str(tmp_path / "d9.json"), "--out", str(tmp_path / "o")]) == 2
    bad_xi = {"k": [0.5, 1.0, 1.5, 2.0], "xi": [0.1] * 4, "jumps": [[1.0, 1], [2.0, 1]], "xi_at_infinity": 0.0}
    (tmp_path / "xi.json").write_text(json.dumps(bad_xi))
    assert main(["krein", str(tmp_path / "xi.json"), "--out", str(tmp_path / "o")]) == 4
    assert main(["nonsense"]) == 2


@pytest.mark.slow
def test_cli_validate_and_tampered_tolerance(tmp_path):
    assert main(["validate", "--example", "6.1", "--report", str(tmp_path / "r.txt")]) == 0
    assert (tmp_path / "r.txt").read_text().strip()
    assert main(["validate", "--example", "6.1", "--tol-override", "0"]) == 1
