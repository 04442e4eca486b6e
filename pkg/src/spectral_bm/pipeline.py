"""Glue between the stages: data sets from forward runs, potentials from a
recovered Jost pair through any of the three inversion methods."""
from __future__ import annotations

import numpy as np

from .borg_marchenko import norming_from_jost
from .core import (
    ANTI_CONJUGATE,
    CONJUGATE,
    DATASET_TABLE,
    DIRICHLET,
    ROBIN,
    BoundaryFunction,
    BoundaryParam,
    EigenSet,
    KGrid,
    Potential,
    SpectralDataSet,
)
from .errors import InvalidArgument
from .forward import ForwardSummary, forward_summary
from .inversion import (
    DEFAULT_DX,
    DEFAULT_X_MAX,
    FMData,
    GLData,
    MarchenkoData,
    fm_discrete_data,
    fm_invert,
    gl_invert,
    gl_kernel,
    marchenko_invert,
    marchenko_kernel,
    reflection_coefficient,
)
from .krein import KreinShift, xi_from_jost

METHODS = ("gl", "marchenko", "fm")


def dataset_from_forward(tag: str, fa: ForwardSummary, fb: ForwardSummary, alpha: BoundaryParam,
                         beta: BoundaryParam) -> SpectralDataSet:
    """Build data set ``tag`` from forward runs for alpha and beta (beta < alpha)."""
    if tag not in DATASET_TABLE:
        raise InvalidArgument(f"unknown tag {tag!r}")
    _, mod_alpha, _, has_h, has_beta = DATASET_TABLE[tag]
    F = fa.F if mod_alpha else fb.F
    mod = BoundaryFunction(F.grid, np.abs(F.values).astype(complex), F.parity)
    eb = fb.eigs
    if tag in ("D3", "D4"):
        eb = EigenSet(fb.eigs.kappas[1:])
    h = None
    if has_h:
        h = beta.cot_value - alpha.cot_value
    return SpectralDataSet(tag, mod, fa.eigs, eb, h, beta if has_beta else None)


def xi_from_forward(fa: ForwardSummary, fb: ForwardSummary, alpha: BoundaryParam, beta: BoundaryParam) -> KreinShift:
    grid = fa.F.grid
    # sampled boundary values: only real k is ever requested once the eigenvalues are known
    Fa = lambda k: fa.F(np.real(k))
    Fb = lambda k: fb.F(np.real(k))
    return xi_from_jost(Fa, Fb, alpha, beta, grid, fa.eigs, fb.eigs)


def inversion_inputs(Fa, Fb, alpha: BoundaryParam, beta: BoundaryParam, eig_alpha: EigenSet, grid: KGrid,
                     method: str):
    """GLData, MarchenkoData or FMData from a Jost pair."""
    kind = DIRICHLET if alpha.is_dirichlet else ROBIN
    h = None if alpha.is_dirichlet else beta.cot_value - alpha.cot_value
    k = grid.points.astype(complex)
    if method == "fm":
        refl, L = reflection_coefficient(Fa, Fb, alpha, beta, grid)
        taus, c = fm_discrete_data(refl)
        return FMData(L, taus, c)
    g, m = norming_from_jost(Fa, Fb, h, eig_alpha, kind)
    Fk = np.asarray(Fa(k))
    if method == "gl":
        return GLData(grid, np.abs(Fk), eig_alpha, g, kind)
    if method == "marchenko":
        S = np.conj(Fk) / Fk
        S = S / np.abs(S)
        return MarchenkoData(BoundaryFunction(grid, S, CONJUGATE), eig_alpha, m, kind)
    raise InvalidArgument(f"unknown method {method!r}")


def invert(data, x_max: float = DEFAULT_X_MAX, dx: float = DEFAULT_DX) -> Potential:
    if isinstance(data, GLData):
        return gl_invert(gl_kernel(data, x_max=x_max, dx=dx))
    if isinstance(data, MarchenkoData):
        return marchenko_invert(marchenko_kernel(data, x_max=x_max, dx=dx))
    if isinstance(data, FMData):
        return fm_invert(data, x_max=x_max, dx=dx)
    raise InvalidArgument(f"cannot invert {type(data).__name__}")


def potential_from_pair(Fa, Fb, alpha, beta, eig_alpha, grid, method: str = "gl",
                        x_max: float = DEFAULT_X_MAX, dx: float = DEFAULT_DX) -> Potential:
    return invert(inversion_inputs(Fa, Fb, alpha, beta, eig_alpha, grid, method), x_max, dx)
