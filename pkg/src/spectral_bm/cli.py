"""Command-line front end.

Exit codes: 0 ok, 1 validation failure, 2 input error, 3 forward numeric
failure, 4 recovery failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .borg_marchenko import recover
from .core import BoundaryParam, make_kgrid
from .errors import InvalidArgument, InvalidData, InvalidDataset, InvalidXi, SpectralError
from .forward import forward_summary, jost_half_plane, scattering_matrix, spectral_measure
from .inversion import DEFAULT_DX, DEFAULT_X_MAX
from .krein import recover_from_xi
from .pipeline import METHODS, dataset_from_forward, inversion_inputs, invert, potential_from_pair, xi_from_forward

EXIT_OK, EXIT_VALIDATION, EXIT_INPUT, EXIT_FORWARD, EXIT_RECOVERY = 0, 1, 2, 3, 4
INPUT_ERRORS = (InvalidData, InvalidArgument, InvalidDataset, OSError, json.JSONDecodeError, KeyError,
                TypeError, ValueError)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def apply_thread_cap() -> None:
    """Honor SPECTRAL_BM_THREADS for numba and the BLAS pools."""
    cap = os.environ.get("SPECTRAL_BM_THREADS")
    if not cap:
        return
    try:
        n = max(1, int(cap))
    except ValueError:
        raise CliError(EXIT_INPUT, f"SPECTRAL_BM_THREADS must be an integer, got {cap!r}")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, str(n))
    try:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
    except ImportError:
        pass


def _load(fn, path):
    try:
        return fn(path)
    except InvalidXi:
        raise
    except INPUT_ERRORS as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc}")


def _outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fmt_list(v) -> str:
    return "[" + ", ".join(f"{float(a):.10g}" for a in v) + "]"


def _fmt_param(p: BoundaryParam) -> str:
    return "Dirichlet" if p.is_dirichlet else f"Robin, cot = {p.cot_value:.10g}"


def _bc_from_args(args) -> BoundaryParam:
    if args.dirichlet:
        return BoundaryParam.dirichlet()
    return BoundaryParam.robin(args.cot_alpha)


def cmd_forward(args) -> int:
    V = _load(lambda p: io.read_potential(p, args.xmax, args.nx), args.potential)
    alpha = _bc_from_args(args)
    grid = make_kgrid(args.kmax, args.nk)
    out = _outdir(args.out)
    try:
        fa = forward_summary(V, alpha, grid)
        S = scattering_matrix(fa.F)
        mu = spectral_measure(fa.F, fa.eigs, fa.g)
        fb = None
        if args.emit_dataset or args.emit_xi or args.emit_inversion:
            if args.cot_beta is None:
                raise CliError(EXIT_INPUT, "--cot-beta is required to emit a data set, xi or inversion data")
            beta = BoundaryParam.robin(args.cot_beta)
            if not alpha.is_dirichlet and not args.cot_beta > alpha.cot_value:
                raise CliError(EXIT_INPUT, "beta must lie below alpha (cot beta > cot alpha)")
            fb = forward_summary(V, beta, grid)
    except SpectralError as exc:
        raise CliError(EXIT_FORWARD, f"forward computation failed: {exc}")
    io.write_json(out / "forward.json", io.forward_to_dict(fa))
    io.write_json(out / "spectral_measure.json", io.measure_to_dict(mu))
    io.write_json(out / "scattering.json", io.boundary_to_dict(S))
    if fb is not None:
        io.write_json(out / "forward_beta.json", io.forward_to_dict(fb))
        try:
            if args.emit_dataset:
                D = dataset_from_forward(args.emit_dataset, fa, fb, alpha, beta)
                io.write_json(out / f"dataset_{args.emit_dataset}.json", io.dataset_to_dict(D))
            if args.emit_xi:
                io.write_json(out / "xi.json", io.xi_to_dict(xi_from_forward(fa, fb, alpha, beta)))
            if args.emit_inversion:
                data = inversion_inputs(jost_half_plane(V, alpha), jost_half_plane(V, beta), alpha, beta,
                                        fa.eigs, grid, args.emit_inversion)
                write = {"gl": io.gl_to_dict, "marchenko": io.marchenko_to_dict, "fm": io.fm_to_dict}
                io.write_json(out / f"inversion_{args.emit_inversion}.json", write[args.emit_inversion](data))
        except (InvalidArgument, InvalidDataset) as exc:
            raise CliError(EXIT_INPUT, str(exc))
        except SpectralError as exc:
            raise CliError(EXIT_FORWARD, f"data set construction failed: {exc}")
    print(f"alpha: {_fmt_param(alpha)}; eigenvalues {_fmt_list(fa.eigs.kappas)}; g {_fmt_list(fa.g)}")
    return EXIT_OK


def _write_recovery(out: Path, R, grid, args) -> None:
    h = None if R.alpha.is_dirichlet else R.beta.cot_value - R.alpha.cot_value
    params = {
        "alpha": io.param_to_dict(R.alpha),
        "beta": io.param_to_dict(R.beta),
        "h": h,
        "eig_alpha": [float(v) for v in R.eig_alpha.kappas],
        "eig_beta": [float(v) for v in R.eig_beta.kappas],
    }
    V = potential_from_pair(R.F_alpha, R.F_beta, R.alpha, R.beta, R.eig_alpha, grid, args.method,
                            args.inv_xmax, args.inv_dx)
    with np.errstate(invalid="ignore", divide="ignore"):
        fa = R.F_alpha.on_grid(grid)
        fb = R.F_beta.on_grid(grid)
    io.write_json(out / "params.json", params)
    io.write_json(out / "F_alpha.json", io.boundary_to_dict(fa))
    io.write_json(out / "F_beta.json", io.boundary_to_dict(fb))
    io.write_potential(out / "potential.csv", V)
    print(f"alpha: {_fmt_param(R.alpha)}; beta: {_fmt_param(R.beta)}; eig_beta {_fmt_list(R.eig_beta.kappas)}")


def _recovery_error(exc: SpectralError) -> CliError:
    stage = exc.stage or type(exc).__name__
    return CliError(EXIT_RECOVERY, f"recovery failed at stage '{stage}' ({exc.kind}): {exc}")


def cmd_recover(args) -> int:
    D = _load(lambda p: io.dataset_from_dict(io.read_json(p)), args.dataset)
    out = _outdir(args.out)
    try:
        with np.errstate(invalid="ignore", divide="ignore"):
            R = recover(D)
            _write_recovery(out, R, D.modulus.grid, args)
    except SpectralError as exc:
        raise _recovery_error(exc)
    return EXIT_OK


def cmd_krein(args) -> int:
    try:
        xi = _load(lambda p: io.xi_from_dict(io.read_json(p)), args.xi)
        out = _outdir(args.out)
        with np.errstate(invalid="ignore", divide="ignore"):
            R = recover_from_xi(xi)
            _write_recovery(out, R, xi.grid, args)
    except SpectralError as exc:
        raise _recovery_error(exc)
    return EXIT_OK


def cmd_invert(args) -> int:
    data = _load(lambda p: io.inversion_data_from_dict(io.read_json(p)), args.data)
    out = _outdir(args.out)
    try:
        V = invert(data, args.inv_xmax, args.inv_dx)
    except SpectralError as exc:
        raise _recovery_error(exc)
    io.write_potential(out / "potential.csv", V)
    return EXIT_OK


def cmd_validate(args) -> int:
    from . import validate

    with np.errstate(invalid="ignore", divide="ignore"):
        results = validate.run(args.example, tol_scale=args.tol_scale, tol_override=args.tol_override,
                               grid=make_kgrid(args.kmax, args.nk))
    report = validate.format_report(results)
    print(report)
    if args.report:
        io.atomic_write_text(args.report, report + "\n")
    failed = sum(not r.ok for _, rows, _ in results for r in rows)
    print(f"{failed} failed row(s)")
    return EXIT_OK if failed == 0 else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kmax", type=float, default=40.0, help="largest real k sample")
    common.add_argument("--nk", type=int, default=4096, help="number of k samples")
    common.add_argument("--xmax", type=float, default=10.0, help="potential support cutoff for forward runs")
    common.add_argument("--nx", type=int, default=2001, help="potential grid size for forward runs")
    common.add_argument("--inv-xmax", type=float, default=DEFAULT_X_MAX, help="reconstruction interval")
    common.add_argument("--inv-dx", type=float, default=DEFAULT_DX, help="reconstruction step")

    p = argparse.ArgumentParser(prog="spectral-bm", description="Half-line Schrodinger spectral tools.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("forward", parents=[common], help="Jost data of a potential")
    f.add_argument("potential", help="CSV with header x,V")
    bc = f.add_mutually_exclusive_group(required=True)
    bc.add_argument("--cot-alpha", type=float)
    bc.add_argument("--dirichlet", action="store_true")
    f.add_argument("--cot-beta", type=float, help="second boundary condition for --emit-dataset/--emit-xi")
    f.add_argument("--emit-dataset", metavar="TAG", help="also write data set TAG (D1..D8)")
    f.add_argument("--emit-xi", action="store_true", help="also write the Krein shift function")
    f.add_argument("--emit-inversion", choices=METHODS, help="also write GL, Marchenko or FM input data")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_forward)

    for name, arg, fn, hlp in (("recover", "dataset", cmd_recover, "recover from a data set D1..D8"),
                               ("krein", "xi", cmd_krein, "recover from a Krein shift function")):
        r = sub.add_parser(name, parents=[common], help=hlp)
        r.add_argument(arg)
        r.add_argument("--out", required=True)
        r.add_argument("--method", choices=METHODS, default="gl")
        r.set_defaults(func=fn)

    i = sub.add_parser("invert", parents=[common], help="potential from GL, Marchenko or FM data")
    i.add_argument("data")
    i.add_argument("--out", required=True)
    i.set_defaults(func=cmd_invert)

    v = sub.add_parser("validate", parents=[common], help="check every stage against the reference models")
    v.add_argument("--example", choices=("6.1", "6.2", "all", "well_a", "well_b"), default="all",
                   help="6.1 = Robin well A, 6.2 = Dirichlet well B")
    v.add_argument("--report", help="write the table to this file")
    v.add_argument("--tol-scale", type=float, default=1.0, help="multiply every row tolerance")
    v.add_argument("--tol-override", type=float, default=None, help="replace every row tolerance")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        apply_thread_cap()
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except InvalidXi as exc:
        print(f"error: {_recovery_error(exc)}", file=sys.stderr)
        return EXIT_RECOVERY


if __name__ == "__main__":
    sys.exit(main())
