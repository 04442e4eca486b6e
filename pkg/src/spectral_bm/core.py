"""Shared domain types: grids, potentials, boundary parameters and data sets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from .errors import (
    InvalidArgument,
    InvalidData,
    InvalidDataset,
    OutOfRange,
    SingularPoint,
)

ANTI_CONJUGATE = "anti-conjugate"
CONJUGATE = "conjugate"
ROBIN = "Robin"
DIRICHLET = "Dirichlet"


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KGrid:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise InvalidArgument("KGrid needs a nonempty 1-D array")
        if pts[0] <= 0 or np.any(np.diff(pts) <= 0):
            raise InvalidArgument("KGrid points must be positive and strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def k_max(self) -> float:
        return float(self.points[-1])

    def __len__(self):
        return self.points.size


def make_kgrid(k_max: float = 40.0, n: int = 4096, near_zero_refinement: float = 0.02) -> KGrid:
    """Positive wavenumber grid, geometric near k = 0 and uniform elsewhere.

    The smallest point is ``k_max * 1e-6``; roughly ``n * near_zero_refinement``
    points (at least 4) are spent on the geometric part.
    """
    if not (k_max > 0) or not math.isfinite(k_max):
        raise InvalidArgument(f"k_max must be positive, got {k_max}")
    if n < 16:
        raise InvalidArgument(f"need at least 16 grid points, got {n}")
    n_geo = max(4, int(round(n * near_zero_refinement)))
    n_uni = n - n_geo
    h = k_max / n_uni
    k_min = k_max * 1e-6
    ratio = (h / k_min) ** (1.0 / n_geo)
    geo = k_min * ratio ** np.arange(n_geo)
    uni = h * np.arange(1, n_uni + 1)
    uni[-1] = k_max
    return KGrid(np.concatenate([geo, uni]))


@dataclass(frozen=True, eq=False)
class XGrid:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise InvalidArgument("XGrid needs at least two points")
        if pts[0] != 0.0:
            raise InvalidArgument("XGrid must start at x = 0")
        d = np.diff(pts)
        if np.any(d <= 0) or np.max(np.abs(d - d[0])) > 1e-12 * max(1.0, pts[-1]):
            raise InvalidArgument("XGrid must be uniform and increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, x_max: float = 10.0, dx: float = 0.005) -> "XGrid":
        n = int(round(x_max / dx))
        return cls(np.linspace(0.0, n * dx, n + 1))

    @property
    def x_max(self) -> float:
        return float(self.points[-1])

    @property
    def dx(self) -> float:
        return float(self.points[1] - self.points[0])

    def __len__(self):
        return self.points.size


# ---------------------------------------------------------------------------
# potential
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Potential:
    grid: XGrid
    values: np.ndarray
    interpolation: str = "cubic"
    tail_model: str = "zero beyond x_max"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.points.shape:
            raise InvalidData("potential samples do not match the grid")
        if not np.all(np.isfinite(vals)):
            raise InvalidData("potential samples contain NaN or Inf")
        if self.interpolation not in ("cubic", "piecewise-linear"):
            raise InvalidArgument(f"unknown interpolation {self.interpolation!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, func: Callable, x_max: float = 10.0, dx: float = 0.005, **kw) -> "Potential":
        grid = XGrid.uniform(x_max, dx)
        return cls(grid, np.asarray(func(grid.points), dtype=float), **kw)

    @classmethod
    def zero(cls, x_max: float = 10.0, dx: float = 0.005) -> "Potential":
        grid = XGrid.uniform(x_max, dx)
        return cls(grid, np.zeros(len(grid)))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        xs = self.grid.points
        if self.interpolation == "cubic":
            out = CubicSpline(xs, self.values)(np.clip(x, 0.0, xs[-1]))
        else:
            out = np.interp(x, xs, self.values)
        return np.where((x < 0) | (x > xs[-1]), 0.0, out)

    def midpoints(self) -> np.ndarray:
        xs = self.grid.points
        return np.asarray(self(0.5 * (xs[:-1] + xs[1:])), dtype=float)


def faddeev_moment(V: Potential) -> float:
    """Composite-Simpson estimate of the first moment int (1+x)|V(x)| dx on [0, x_max]."""
    if not np.all(np.isfinite(V.values)):
        raise InvalidData("potential samples contain NaN or Inf")
    x = V.grid.points
    return float(simpson((1.0 + x) * np.abs(V.values), x=x))


# ---------------------------------------------------------------------------
# boundary condition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryParam:
    kind: str
    cot_value: Optional[float] = None

    def __post_init__(self):
        if self.kind == ROBIN:
            if self.cot_value is None or not math.isfinite(self.cot_value):
                raise InvalidArgument("Robin boundary needs a finite cot value")
            object.__setattr__(self, "cot_value", float(self.cot_value))
        elif self.kind == DIRICHLET:
            if self.cot_value is not None:
                raise InvalidArgument("Dirichlet boundary carries no cot value")
        else:
            raise InvalidArgument(f"unknown boundary kind {self.kind!r}")

    @classmethod
    def robin(cls, cot_value: float) -> "BoundaryParam":
        return cls(ROBIN, cot_value)

    @classmethod
    def dirichlet(cls) -> "BoundaryParam":
        return cls(DIRICHLET)

    @property
    def is_dirichlet(self) -> bool:
        return self.kind == DIRICHLET

    @property
    def angle(self) -> float:
        """The boundary angle in (0, pi]; cot is monotone on (0, pi)."""
        if self.is_dirichlet:
            return math.pi
        return math.pi / 2 - math.atan(self.cot_value)

    @property
    def parity(self) -> str:
        return CONJUGATE if self.is_dirichlet else ANTI_CONJUGATE


# ---------------------------------------------------------------------------
# functions of k
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """Complex samples on the positive k grid plus the rule for k < 0."""

    grid: KGrid
    values: np.ndarray
    parity: str = CONJUGATE

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.points.shape:
            raise InvalidData("values do not match the k grid")
        if self.parity not in (ANTI_CONJUGATE, CONJUGATE):
            raise InvalidArgument(f"unknown parity {self.parity!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_spline", None)

    def _interp(self, k):
        if self._spline is None:
            # the first knot is put at k=0 through the parity rule so interpolation
            # across the origin stays consistent
            k0 = self.grid.points
            object.__setattr__(
                self,
                "_spline",
                (CubicSpline(k0, self.values.real), CubicSpline(k0, self.values.imag)),
            )
        sr, si = self._spline
        return sr(k) + 1j * si(k)

    def __call__(self, k):
        return extend_by_symmetry(self, k)

    @property
    def k(self) -> np.ndarray:
        return self.grid.points

    def abs(self) -> np.ndarray:
        return np.abs(self.values)


def extend_by_symmetry(f: BoundaryFunction, k):
    """Evaluate f on the real line: interpolation for k >= 0, parity rule for k < 0."""
    k_arr = np.asarray(k, dtype=float)
    if np.any(np.abs(k_arr) > f.grid.k_max * (1 + 1e-12)):
        raise OutOfRange(f"|k| beyond grid k_max = {f.grid.k_max}")
    kk = np.abs(k_arr)
    on_grid = np.searchsorted(f.grid.points, kk)
    vals = f._interp(kk)
    # exact sample reuse where k coincides with a node
    idx = np.clip(on_grid, 0, len(f.grid) - 1)
    exact = f.grid.points[idx] == kk
    vals = np.where(exact, f.values[idx], vals)
    neg = k_arr < 0
    if f.parity == ANTI_CONJUGATE:
        vals = np.where(neg, -np.conj(vals), vals)
    else:
        vals = np.where(neg, np.conj(vals), vals)
    if np.ndim(k) == 0:
        return complex(vals)
    return vals


@dataclass(frozen=True, eq=False)
class EigenSet:
    kappas: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        ks = np.asarray(self.kappas, dtype=float).ravel()
        if ks.size and (np.any(ks <= 0) or np.any(np.diff(ks) <= 0) or not np.all(np.isfinite(ks))):
            raise InvalidArgument(f"eigen set must be positive and strictly increasing: {ks}")
        ks.setflags(write=False)
        object.__setattr__(self, "kappas", ks)

    def __len__(self):
        return self.kappas.size

    def __iter__(self):
        return iter(self.kappas.tolist())

    def __eq__(self, other):
        return isinstance(other, EigenSet) and np.array_equal(self.kappas, other.kappas)

    def __repr__(self):
        return f"EigenSet({self.kappas.tolist()})"


def blaschke(k, zeros: EigenSet, orientation: str = "zeros-at-iκ"):
    """prod_j (k - i kappa_j)/(k + i kappa_j), or its reciprocal for ``poles-at-iκ``."""
    k = np.asarray(k, dtype=complex)
    out = np.ones_like(k)
    inverse = orientation.startswith("poles")
    for kap in zeros.kappas:
        num = k - 1j * kap
        den = k + 1j * kap
        if inverse:
            num, den = den, num
        if np.any(den == 0):
            raise SingularPoint(f"Blaschke factor evaluated at its pole {kap}i")
        out = out * (num / den)
    if out.ndim == 0:
        return complex(out)
    return out


class HalfPlaneFunction:
    """Vectorized evaluator on the closed upper half plane.

    Real arguments are read as limits from C+.  ``parity`` (if given) is the
    symmetry on the real line; ``representation`` is ``"rational"`` for
    closed forms and ``"numeric"`` for Schwarz-integral-backed evaluators.
    """

    def __init__(self, evaluator: Callable, representation: str = "numeric", parity: Optional[str] = None,
                 name: str = ""):
        self._eval = evaluator
        self.representation = representation
        self.parity = parity
        self.name = name
        self._cache: dict = {}

    def __call__(self, k):
        karr = np.asarray(k, dtype=complex)
        if np.any(karr.imag < 0):
            from .errors import OutOfDomain

            raise OutOfDomain("evaluation point in the open lower half plane")
        out = np.asarray(self._eval(np.atleast_1d(karr).ravel()), dtype=complex).reshape(karr.shape)
        if out.ndim == 0:
            return complex(out)
        return out

    def derivative(self, k: complex, step: Optional[float] = None) -> complex:
        """Central difference along the imaginary direction (stays inside C+)."""
        k = complex(k)
        if step is None:
            step = 1e-5 * max(abs(k), 1.0)
        up = self(k + 1j * step)
        dn = self(k - 1j * step) if k.imag - step >= 0 else None
        if dn is None:
            mid = self(k)
            return (up - mid) / (1j * step)
        return (up - dn) / (2j * step)

    def on_grid(self, grid: KGrid) -> BoundaryFunction:
        key = id(grid)
        hit = self._cache.get(key)
        if hit is None or hit.grid is not grid:
            hit = BoundaryFunction(grid, self(grid.points.astype(complex)), self.parity or CONJUGATE)
            self._cache[key] = hit
        return hit

    def __repr__(self):
        return f"HalfPlaneFunction({self.name or self.representation})"


def rational(func: Callable, parity: Optional[str] = None, name: str = "") -> HalfPlaneFunction:
    return HalfPlaneFunction(func, "rational", parity, name)


# ---------------------------------------------------------------------------
# the eight data sets
# ---------------------------------------------------------------------------

# tag -> (alpha Dirichlet?, modulus belongs to alpha?, N_beta = N_alpha + 1?, has h, has beta)
DATASET_TABLE = {
    "D1": (False, True, False, True, False),
    "D2": (True, True, False, False, True),
    "D3": (False, True, True, True, False),
    "D4": (True, True, True, False, True),
    "D5": (False, False, False, True, False),
    "D6": (True, False, False, False, False),
    "D7": (False, False, True, True, True),
    "D8": (True, False, True, False, True),
}


@dataclass(frozen=True, eq=False)
class SpectralDataSet:
    """One of the data sets D1..D8.

    ``modulus`` holds |F| samples: |F_alpha| for D1-D4 and |F_beta| for
    D5-D8.  For D3/D4 ``eig_beta`` is the partial set missing one element.
    """

    tag: str
    modulus: BoundaryFunction
    eig_alpha: EigenSet
    eig_beta: EigenSet
    h_beta_alpha: Optional[float] = None
    beta: Optional[BoundaryParam] = None

    def __post_init__(self):
        if self.tag not in DATASET_TABLE:
            raise InvalidDataset(f"unknown tag {self.tag!r}")
        _, _, plus_one, has_h, has_beta = DATASET_TABLE[self.tag]
        if has_h != (self.h_beta_alpha is not None):
            raise InvalidDataset(f"{self.tag}: h_beta_alpha must be {'present' if has_h else 'absent'}")
        if has_beta != (self.beta is not None):
            raise InvalidDataset(f"{self.tag}: beta must be {'present' if has_beta else 'absent'}")
        if self.beta is not None and self.beta.is_dirichlet:
            raise InvalidDataset("beta must be a Robin boundary (0 < beta < alpha)")
        if has_h and not (self.h_beta_alpha > 0):
            raise InvalidDataset("h_beta_alpha must be positive for 0 < beta < alpha < pi")
        vals = np.asarray(self.modulus.values)
        if np.any(np.abs(vals.imag) > 0) or np.any(vals.real < 0):
            raise InvalidDataset("modulus samples must be real and nonnegative")
        na, nb = len(self.eig_alpha), len(self.eig_beta)
        if self.tag in ("D3", "D4"):
            if nb != na:
                raise InvalidDataset(f"{self.tag}: partial beta set must have N_alpha = {na} elements")
        elif plus_one and nb != na + 1:
            raise InvalidDataset(f"{self.tag}: needs N_beta = N_alpha + 1")
        elif not plus_one and nb != na:
            raise InvalidDataset(f"{self.tag}: needs N_beta = N_alpha")

    @property
    def alpha_dirichlet(self) -> bool:
        return DATASET_TABLE[self.tag][0]

    @property
    def modulus_of_alpha(self) -> bool:
        return DATASET_TABLE[self.tag][1]

    @property
    def plus_one(self) -> bool:
        return DATASET_TABLE[self.tag][2]

    @property
    def partial(self) -> bool:
        return self.tag in ("D3", "D4")
