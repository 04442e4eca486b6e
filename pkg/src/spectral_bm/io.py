"""JSON and CSV formats for every exchanged object; writes are atomic."""
from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .core import (
    BoundaryFunction,
    BoundaryParam,
    EigenSet,
    KGrid,
    Potential,
    SpectralDataSet,
    XGrid,
)
from .errors import InvalidData, InvalidDataset
from .forward import ForwardSummary, SpectralMeasure
from .inversion import FMData, GLData, MarchenkoData
from .krein import KreinShift


def _floats(a):
    return [float(v) for v in np.asarray(a, dtype=float).ravel()]


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=1) + "\n")


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidData(f"{path}: not valid JSON ({exc})") from exc


def _need(d, key, where):
    if not isinstance(d, dict) or key not in d:
        raise InvalidData(f"{where}: missing field {key!r}")
    return d[key]


# --- boundary functions -----------------------------------------------------

def boundary_to_dict(f: BoundaryFunction) -> dict:
    return {"k": _floats(f.k), "re": _floats(f.values.real), "im": _floats(f.values.imag), "parity": f.parity}


def boundary_from_dict(d: dict) -> BoundaryFunction:
    k = np.asarray(_need(d, "k", "boundary function"), dtype=float)
    re = np.asarray(_need(d, "re", "boundary function"), dtype=float)
    im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
    if not (k.shape == re.shape == im.shape):
        raise InvalidData("boundary function arrays differ in length")
    return BoundaryFunction(KGrid(k), re + 1j * im, d.get("parity", "conjugate"))


def eigs_from_list(v) -> EigenSet:
    try:
        return EigenSet([float(x) for x in (v or [])])
    except (TypeError, ValueError) as exc:
        raise InvalidData(f"bad eigenvalue list {v!r}") from exc


def param_to_dict(p: BoundaryParam | None):
    if p is None:
        return None
    return {"kind": p.kind, "cot": None if p.is_dirichlet else float(p.cot_value)}


def param_from_value(v) -> BoundaryParam | None:
    if v is None:
        return None
    if isinstance(v, dict):
        if v.get("kind") == "Dirichlet":
            return BoundaryParam.dirichlet()
        return BoundaryParam.robin(float(_need(v, "cot", "boundary parameter")))
    if isinstance(v, str) and v.lower() == "dirichlet":
        return BoundaryParam.dirichlet()
    return BoundaryParam.robin(float(v))


# --- forward outputs ---------------------------------------------------------

def forward_to_dict(s: ForwardSummary) -> dict:
    return {
        "bc": param_to_dict(s.bc),
        "F": boundary_to_dict(s.F),
        "eigs": _floats(s.eigs.kappas),
        "g": _floats(s.g),
        "m": _floats(s.m),
        "d_flag": int(s.d_flag),
        "phase": _floats(s.phase),
    }


def forward_from_dict(d: dict) -> ForwardSummary:
    return ForwardSummary(
        boundary_from_dict(_need(d, "F", "forward summary")),
        eigs_from_list(d.get("eigs")),
        np.asarray(d.get("g", []), dtype=float),
        np.asarray(d.get("m", []), dtype=float),
        int(d.get("d_flag", 0)),
        np.asarray(d.get("phase", []), dtype=float),
        param_from_value(d.get("bc")),
    )


def measure_to_dict(m: SpectralMeasure) -> dict:
    return {"lambda": _floats(m.lam), "density": _floats(m.ac_density),
            "masses": [[float(a), float(b)] for a, b in m.point_masses]}


def measure_from_dict(d: dict) -> SpectralMeasure:
    return SpectralMeasure(np.asarray(d["lambda"], dtype=float), np.asarray(d["density"], dtype=float),
                           [(float(a), float(b)) for a, b in d.get("masses", [])])


# --- data sets ----------------------------------------------------------------

def dataset_to_dict(D: SpectralDataSet) -> dict:
    out = {
        "tag": D.tag,
        "h": D.h_beta_alpha,
        "beta": None if D.beta is None else float(D.beta.cot_value),
        "modulus": boundary_to_dict(D.modulus),
        "eig_alpha": _floats(D.eig_alpha.kappas),
    }
    out["eig_beta_partial" if D.partial else "eig_beta"] = _floats(D.eig_beta.kappas)
    return out


def dataset_from_dict(d: dict) -> SpectralDataSet:
    tag = _need(d, "tag", "data set")
    if tag in ("D3", "D4"):
        eb = d.get("eig_beta_partial", d.get("eig_beta"))
    else:
        eb = d.get("eig_beta")
    if eb is None:
        raise InvalidDataset(f"{tag}: missing beta eigenvalues")
    modd = _need(d, "modulus", "data set")
    mod = boundary_from_dict(modd)
    h = d.get("h")
    return SpectralDataSet(
        tag,
        mod,
        eigs_from_list(_need(d, "eig_alpha", "data set")),
        eigs_from_list(eb),
        None if h is None else float(h),
        param_from_value(d.get("beta")),
    )


# --- Krein shift ----------------------------------------------------------------

def xi_to_dict(xi: KreinShift) -> dict:
    return {
        "k": _floats(xi.grid.points),
        "xi": _floats(xi.real_axis),
        "jumps": [[float(k), int(v)] for k, v in xi.jumps],
        "xi_at_infinity": float(xi.xi_at_infinity),
        "xi_imag_at_0": int(xi.imag_at_zero),
    }


def xi_from_dict(d: dict) -> KreinShift:
    k = np.asarray(_need(d, "k", "xi"), dtype=float)
    return KreinShift(
        KGrid(k),
        np.asarray(_need(d, "xi", "xi"), dtype=float),
        tuple((float(a), int(b)) for a, b in d.get("jumps", [])),
        d.get("xi_imag_at_0"),
        float(_need(d, "xi_at_infinity", "xi")),
    )


# --- inversion data ----------------------------------------------------------------

def gl_to_dict(g: GLData) -> dict:
    return {"type": "GL", "kind": g.kind, "k": _floats(g.grid.points), "modulus": _floats(g.modulus),
            "eigs": _floats(g.eigs.kappas), "g": _floats(g.g)}


def marchenko_to_dict(m: MarchenkoData) -> dict:
    return {"type": "Marchenko", "kind": m.kind, "S": boundary_to_dict(m.S), "eigs": _floats(m.eigs.kappas),
            "m": _floats(m.m)}


def fm_to_dict(f: FMData) -> dict:
    return {"type": "FM", "L": boundary_to_dict(f.L), "taus": _floats(f.taus.kappas), "c": _floats(f.c)}


def inversion_data_from_dict(d: dict):
    kind = d.get("type")
    if kind == "GL":
        return GLData(KGrid(np.asarray(d["k"], dtype=float)), np.asarray(d["modulus"], dtype=float),
                      eigs_from_list(d.get("eigs")), np.asarray(d.get("g", []), dtype=float),
                      d.get("kind", "Robin"))
    if kind == "Marchenko":
        return MarchenkoData(boundary_from_dict(d["S"]), eigs_from_list(d.get("eigs")),
                             np.asarray(d.get("m", []), dtype=float), d.get("kind", "Robin"))
    if kind == "FM":
        return FMData(boundary_from_dict(d["L"]), eigs_from_list(d.get("taus")),
                      np.asarray(d.get("c", []), dtype=float))
    raise InvalidData(f"unknown inversion data type {kind!r}")


# --- potentials ---------------------------------------------------------------------

def potential_to_csv(V: Potential) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "V"])
    for x, v in zip(V.grid.points, V.values):
        w.writerow([repr(float(x)), repr(float(v))])
    return buf.getvalue()


def write_potential(path, V: Potential) -> None:
    atomic_write_text(path, potential_to_csv(V))


def read_potential_samples(path):
    """(x, V) arrays from a CSV with header 'x,V'."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except UnicodeDecodeError as exc:
        raise InvalidData(f"{path}: not a text file") from exc
    if not rows or [c.strip() for c in rows[0][:2]] != ["x", "V"]:
        raise InvalidData(f"{path}: expected header 'x,V'")
    try:
        data = np.array([[float(r[0]), float(r[1])] for r in rows[1:] if r], dtype=float)
    except (ValueError, IndexError) as exc:
        raise InvalidData(f"{path}: malformed row ({exc})") from exc
    if data.ndim != 2 or len(data) < 4:
        raise InvalidData(f"{path}: need at least four samples")
    x, v = data[:, 0], data[:, 1]
    if np.any(np.diff(x) <= 0) or x[0] != 0.0 or not np.all(np.isfinite(v)):
        raise InvalidData(f"{path}: x must start at 0 and increase; V must be finite")
    return x, v


def read_potential(path, x_max: float | None = None, n: int | None = None) -> Potential:
    """Potential from CSV, resampled onto a uniform grid when x_max/n are given."""
    x, v = read_potential_samples(path)
    if x_max is None and n is None:
        return Potential(XGrid(x), v)
    from scipy.interpolate import CubicSpline

    x_max = x_max if x_max is not None else float(x[-1])
    n = n if n is not None else len(x)
    grid = XGrid.uniform(x_max, x_max / (n - 1))
    spline = CubicSpline(x, v)
    pts = grid.points
    vals = np.where(pts <= x[-1], spline(np.minimum(pts, x[-1])), 0.0)
    return Potential(grid, vals)
