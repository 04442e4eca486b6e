"""Inverse spectral theory for the half-line Schrodinger operator with a
continuous spectrum: forward Jost data, Borg-Marchenko type recovery from
eight kinds of partial data, Krein shift function recovery and three
potential reconstruction methods."""
from .borg_marchenko import Recovery, recover
from .core import (
    BoundaryFunction,
    BoundaryParam,
    EigenSet,
    HalfPlaneFunction,
    KGrid,
    Potential,
    SpectralDataSet,
    XGrid,
    make_kgrid,
)
from .errors import SpectralError
from .forward import ForwardSummary, SpectralMeasure, forward_summary
from .krein import KreinShift, recover_from_xi
from .pipeline import dataset_from_forward, potential_from_pair, xi_from_forward

__version__ = "0.1.0"

__all__ = [
    "BoundaryFunction", "BoundaryParam", "EigenSet", "ForwardSummary", "HalfPlaneFunction", "KGrid",
    "KreinShift", "Potential", "Recovery", "SpectralDataSet", "SpectralError", "SpectralMeasure", "XGrid",
    "dataset_from_forward", "forward_summary", "make_kgrid", "potential_from_pair", "recover",
    "recover_from_xi", "xi_from_forward",
]
