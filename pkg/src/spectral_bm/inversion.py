"""Potential reconstruction by the Gel'fand-Levitan, Marchenko and
Faddeev-Marchenko integral equations.

All three share one ingredient: cosine/sine transforms of slowly decaying
spectral data.  These use an exact Filon rule on the k-grid and an analytic
power-law tail beyond k_max (sine/cosine integral recursion).  The integral
equations are solved by Nystrom discretization with trapezoid weights on a
uniform x-grid, one dense solve per x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq
from scipy.special import sici

from . import _kernels
from .core import (
    CONJUGATE,
    DIRICHLET,
    ROBIN,
    BoundaryFunction,
    BoundaryParam,
    EigenSet,
    HalfPlaneFunction,
    KGrid,
    Potential,
    XGrid,
)
from .errors import ConsistencyFailure, InvalidData, RootFailure, SolverFailure

DEFAULT_X_MAX = 4.5
DEFAULT_DX = 0.02
TAIL_FRACTION = 0.1


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GLData:
    grid: KGrid
    modulus: np.ndarray
    eigs: EigenSet
    g: np.ndarray
    kind: str = ROBIN

    def __post_init__(self):
        object.__setattr__(self, "modulus", np.asarray(self.modulus, dtype=float))
        object.__setattr__(self, "g", np.asarray(self.g, dtype=float))
        if self.modulus.shape != self.grid.points.shape:
            raise InvalidData("modulus does not match the grid")
        if len(self.g) != len(self.eigs) or np.any(self.g <= 0):
            raise InvalidData("need one positive norming constant per eigenvalue")


@dataclass(frozen=True, eq=False)
class MarchenkoData:
    S: BoundaryFunction
    eigs: EigenSet
    m: np.ndarray
    kind: str = ROBIN

    def __post_init__(self):
        object.__setattr__(self, "m", np.asarray(self.m, dtype=float))
        if np.max(np.abs(np.abs(self.S.values) - 1.0)) > 1e-8:
            raise InvalidData("scattering matrix is not unimodular")
        if len(self.m) != len(self.eigs) or np.any(self.m <= 0):
            raise InvalidData("need one positive norming constant per eigenvalue")


@dataclass(frozen=True, eq=False)
class FMData:
    L: BoundaryFunction
    taus: EigenSet
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))
        if np.max(np.abs(self.L.values)) > 1.0 + 1e-8:
            raise InvalidData("|L| exceeds 1 on the real axis")
        if len(self.c) != len(self.taus) or np.any(self.c <= 0):
            raise InvalidData("need one positive norming constant per pole")


@dataclass(frozen=True, eq=False)
class Kernel2D:
    """Kernel samples on a uniform lattice of step ``h``.

    ``which`` is ``"GL"`` (``values[m]`` = even transform at s = m h, the
    two-variable kernel assembled on demand), ``"Marchenko"`` (M at
    s = m h, m >= 0) or ``"FM"`` (Omega at s = -m h, m >= 0).
    """

    which: str
    kind: str
    h: float
    values: np.ndarray
    eigs: EigenSet = field(default_factory=lambda: EigenSet([]))
    weights: np.ndarray = field(default_factory=lambda: np.zeros(0))
    x_max: float = DEFAULT_X_MAX

    def gl_matrix(self, n: int) -> np.ndarray:
        """G(y_i, z_j) for i, j = 0..n on the lattice."""
        if self.which != "GL":
            raise TypeError("not a Gel'fand-Levitan kernel")
        idx = np.arange(n + 1)
        diff = np.abs(idx[:, None] - idx[None, :])
        summ = idx[:, None] + idx[None, :]
        sign = -1.0 if self.kind == DIRICHLET else 1.0
        G = 0.5 * (self.values[diff] + sign * self.values[summ])
        y = idx * self.h
        for kap, w in zip(self.eigs.kappas, self.weights):
            if self.kind == DIRICHLET:
                b = np.sinh(kap * y) / kap
            else:
                b = np.cosh(kap * y)
            G += w * np.outer(b, b)
        return G


# ---------------------------------------------------------------------------
# Fourier transforms of decaying data on [0, inf)
# ---------------------------------------------------------------------------

def _tail_fit(k, w, powers):
    K = k[-1]
    sel = k >= (1.0 - TAIL_FRACTION) * K
    A = np.stack([k[sel] ** (-float(p)) for p in powers], axis=1)
    coef, *_ = np.linalg.lstsq(A, w[sel], rcond=None)
    return coef


def _tail_cos_sin(n_max: int, K: float, s: np.ndarray):
    """C_n = int_K^inf k^-n cos(ks) dk, S_n likewise, for n = 1..n_max (s >= 0)."""
    s = np.asarray(s, dtype=float)
    C = np.zeros((n_max + 1, s.size))
    S = np.zeros((n_max + 1, s.size))
    pos = s > 0
    si, ci = sici(K * s[pos])
    C[1, pos] = -ci
    S[1, pos] = 0.5 * math.pi - si
    # s = 0: cosine integrals of k^-n are K^(1-n)/(n-1); sine integrals take the
    # limit s -> 0+, which is pi/2 for n = 1 and 0 otherwise; C_1 is never used there
    S[1, ~pos] = 0.5 * math.pi
    for n in range(2, n_max + 1):
        C[n, pos] = (K ** (1 - n) * np.cos(K * s[pos]) - s[pos] * S[n - 1, pos]) / (n - 1)
        S[n, pos] = (K ** (1 - n) * np.sin(K * s[pos]) + s[pos] * C[n - 1, pos]) / (n - 1)
        C[n, ~pos] = K ** (1 - n) / (n - 1)
    return C, S


def fourier_half_line(k, w, s, kind: str = "cos", tail_powers=(2, 4)):
    """int_0^inf w(k) cos(ks) dk (or sin) at the given s; sine values at s = 0 are limits from s > 0.

    The data are piecewise linear on [0, k_max] (value at 0 extrapolated)
    and follow sum a_n k^-n beyond k_max.
    """
    k = np.asarray(k, dtype=float)
    w = np.asarray(w, dtype=float)
    s = np.asarray(s, dtype=float)
    w0 = w[0] - (w[1] - w[0]) * k[0] / (k[1] - k[0])
    knodes = np.concatenate([[0.0], k])
    wn = np.concatenate([[w0], w])
    sa = np.abs(s)
    c_body, s_body = _kernels.filon(knodes, wn, sa)
    coef = _tail_fit(k, w, tail_powers)
    C, S = _tail_cos_sin(max(tail_powers), k[-1], sa)
    if kind == "cos":
        out = c_body + sum(a * C[p] for p, a in zip(tail_powers, coef))
        return out
    out = s_body + sum(a * S[p] for p, a in zip(tail_powers, coef))
    return np.where(s < 0, -out, out)


def _line_transform(k, values, s):
    """(1/2pi) int_R X(k) e^{iks} dk for X(-k) = conj X(k), X given on k > 0."""
    re = fourier_half_line(k, values.real, s, "cos", (2, 4))
    im = fourier_half_line(k, values.imag, s, "sin", (1, 3))
    return (re - im) / math.pi


# ---------------------------------------------------------------------------
# Gel'fand-Levitan
# ---------------------------------------------------------------------------

def gl_kernel(data: GLData, bc_kind: Optional[str] = None, x_max: float = DEFAULT_X_MAX,
              dx: float = DEFAULT_DX) -> Kernel2D:
    kind = bc_kind or data.kind
    k = data.grid.points
    mod2 = data.modulus ** 2
    if kind == DIRICHLET:
        w = 1.0 / mod2 - 1.0
        weights = data.g ** 2
    else:
        w = k * k / mod2 - 1.0
        weights = data.g ** 2
    if abs(w[-1]) > 0.05 * max(1.0, np.max(np.abs(w))):
        raise InvalidData("Gel'fand-Levitan weight does not decay at k_max")
    n = int(round(x_max / dx))
    s = dx * np.arange(2 * n + 1)
    vals = (2.0 / math.pi) * fourier_half_line(k, w, s, "cos", (2, 4))
    return Kernel2D("GL", kind, dx, vals, data.eigs, weights, n * dx)


def _diff4(f, h):
    """Fourth-order finite-difference derivative on a uniform grid."""
    f = np.asarray(f, dtype=float)
    n = len(f)
    d = np.empty(n)
    if n < 5:
        return np.gradient(f, h)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return d


def _solve(M, rhs):
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolverFailure("singular Nystrom matrix") from exc
    if not np.all(np.isfinite(sol)):
        raise SolverFailure("Nystrom solve produced non-finite values")
    return sol


def _as_potential(diag, h, sign):
    npts = len(diag)
    grid = XGrid(h * np.arange(npts))
    return Potential(grid, sign * 2.0 * _diff4(diag, h))


def gl_invert(kernel: Kernel2D) -> Potential:
    """V = 2 d/dx A(x,x) with A + G + int_0^x G(y,z) A(x,z) dz = 0."""
    h = kernel.h
    n_max = int(round(kernel.x_max / h))
    Gfull = kernel.gl_matrix(n_max)
    diag = np.empty(n_max + 1)
    diag[0] = -Gfull[0, 0]
    for n in range(1, n_max + 1):
        G = Gfull[: n + 1, : n + 1]
        wts = np.full(n + 1, h)
        wts[0] = wts[-1] = 0.5 * h
        A = _solve(np.eye(n + 1) + G * wts[None, :], -G[:, n])
        diag[n] = A[n]
    return _as_potential(diag, h, 1.0)


# ---------------------------------------------------------------------------
# Marchenko
# ---------------------------------------------------------------------------

def _marchenko_span(eigs: EigenSet) -> float:
    if len(eigs) == 0:
        return 20.0
    return min(40.0, max(10.0, 10.0 / float(np.min(eigs.kappas))))


def marchenko_kernel(data: MarchenkoData, bc_kind: Optional[str] = None, x_max: float = DEFAULT_X_MAX,
                     dx: float = DEFAULT_DX, span: Optional[float] = None) -> Kernel2D:
    """M(y) on y = m*dx, 0 <= y <= 2 x_max + 2 span."""
    kind = bc_kind or data.kind
    k = data.S.k
    X = data.S.values - 1.0
    if kind == DIRICHLET:
        X = -X
    if abs(X[-1]) > 0.5:
        raise InvalidData("S - 1 does not decay at k_max")
    span = span if span is not None else _marchenko_span(data.eigs)
    n = int(round((2 * x_max + 2 * span) / dx))
    s = dx * np.arange(n + 1)
    vals = _line_transform(k, X, s)
    for kap, mm in zip(data.eigs.kappas, data.m):
        vals = vals + mm * mm * np.exp(-kap * s)
    return Kernel2D("Marchenko", kind, dx, vals, data.eigs, data.m ** 2, x_max)


def kernel_from_function(which: str, func: Callable, x_max: float = DEFAULT_X_MAX, dx: float = DEFAULT_DX,
                         span: float = 20.0, kind: str = ROBIN) -> Kernel2D:
    """Sample a closed-form Marchenko (s >= 0) or FM (s <= 0) kernel."""
    if which == "Marchenko":
        n = int(round((2 * x_max + 2 * span) / dx))
        s = dx * np.arange(n + 1)
    elif which == "FM":
        n = int(round(2 * x_max / dx))
        s = -dx * np.arange(n + 1)
    else:
        raise ValueError(which)
    return Kernel2D(which, kind, dx, np.asarray(func(s), dtype=float), x_max=x_max)


def marchenko_invert(kernel: Kernel2D, span: Optional[float] = None, tol: float = 1e-3) -> Potential:
    """V = -2 d/dx K(x,x) with K(x,y) + M(x+y) + int_x^inf M(y+z) K(x,z) dz = 0."""
    h = kernel.h
    M = kernel.values
    nx = int(round(kernel.x_max / h))
    nz = (len(M) - 1 - 2 * nx) // 2
    if span is not None:
        nz = min(nz, int(round(span / h)))
    if nz < 4:
        raise SolverFailure("Marchenko kernel too short for the requested range")
    idx = np.arange(nz + 1)
    hank = idx[:, None] + idx[None, :]
    wts = np.full(nz + 1, h)
    wts[0] = wts[-1] = 0.5 * h
    diag = np.empty(nx + 1)
    for i in range(nx + 1):
        off = 2 * i
        mat = np.eye(nz + 1) + M[off + hank] * wts[None, :]
        u = _solve(mat, -M[off + idx])
        peak = max(np.max(np.abs(u)), 1e-300)
        if abs(u[-1]) > tol * peak and abs(u[-1]) > 1e-6:
            raise SolverFailure(f"Marchenko truncation residual {abs(u[-1]) / peak:.2g} at x = {i * h}")
        diag[i] = u[0]
    return _as_potential(diag, h, -1.0)


# ---------------------------------------------------------------------------
# Faddeev-Marchenko (left reflection coefficient)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Reflection:
    """L = num/den on the closed upper half plane, with the pieces kept for pole finding."""

    num: Callable
    den: Callable

    def __call__(self, k):
        k = np.asarray(k, dtype=complex)
        return self.num(k) / self.den(k)

    def as_function(self) -> HalfPlaneFunction:
        return HalfPlaneFunction(self, "numeric", CONJUGATE, name="L")


def reflection_coefficient(Fa, Fb, alpha: BoundaryParam, beta: BoundaryParam,
                           grid: Optional[KGrid] = None, check_tol: float = 1e-8):
    """Left reflection coefficient of the potential extended by zero to x < 0."""
    cb = beta.cot_value
    if alpha.is_dirichlet:
        num = lambda k: (k - 1j * cb) * Fa(k) - Fb(k)
        den = lambda k: (k + 1j * cb) * Fa(k) + Fb(k)
    else:
        ca = alpha.cot_value
        if ca == cb:
            raise ConsistencyFailure("alpha and beta coincide")
        num = lambda k: (k - 1j * cb) * Fa(k) - (k - 1j * ca) * Fb(k)
        den = lambda k: (k + 1j * cb) * Fa(k) - (k + 1j * ca) * Fb(k)
    refl = Reflection(num, den)
    if grid is None:
        return refl
    L = refl(grid.points.astype(complex))
    if np.max(np.abs(L)) > 1.0 + check_tol:
        raise ConsistencyFailure(f"|L| = {np.max(np.abs(L)):.12g} exceeds 1 on the real axis")
    return refl, BoundaryFunction(grid, L, CONJUGATE)


def reflection_from_origin(f0, fp0, k):
    """L = (ik f(k,0) - f'(k,0)) / (ik f(k,0) + f'(k,0))."""
    k = np.asarray(k, dtype=complex)
    return (1j * k * f0 - fp0) / (1j * k * f0 + fp0)


def fm_discrete_data(refl: Reflection, omega_max: float = 50.0, n_scan: int = 4000):
    """Poles i*tau of L on the positive imaginary axis and c = sqrt(-i Res)."""
    om = np.concatenate([np.geomspace(1e-6 * omega_max, 1e-2 * omega_max, 200, endpoint=False),
                         np.linspace(1e-2 * omega_max, omega_max, n_scan)])
    d = np.asarray(refl.den(1j * om))
    proj = np.real if np.linalg.norm(d.real) >= np.linalg.norm(d.imag) else np.imag
    vals = proj(d)
    taus, cs = [], []
    for i in range(len(om) - 1):
        if vals[i] * vals[i + 1] < 0:
            try:
                tau = brentq(lambda w: float(proj(refl.den(np.array([1j * w]))[0])), om[i], om[i + 1],
                             xtol=1e-13, rtol=1e-15)
            except ValueError as exc:
                raise RootFailure("pole refinement failed") from exc
            eps = 1e-6 * max(tau, 1.0)
            z = 1j * tau
            dd = (refl.den(np.array([z + 1j * eps]))[0] - refl.den(np.array([z - 1j * eps]))[0]) / (2j * eps)
            res = refl.num(np.array([z]))[0] / dd
            c2 = -1j * res
            if abs(c2.imag) > 1e-6 * max(1.0, abs(c2)) or c2.real <= 0:
                raise ConsistencyFailure(f"-i Res(L, {tau}i) = {c2} is not positive")
            taus.append(tau)
            cs.append(math.sqrt(c2.real))
    return EigenSet(taus), np.array(cs)


def fm_kernel(data: FMData, x_max: float = DEFAULT_X_MAX, dx: float = DEFAULT_DX) -> Kernel2D:
    """Omega(s) on s = -m*dx, 0 <= m <= 2 x_max/dx; Omega vanishes for s > 0."""
    n = int(round(2 * x_max / dx))
    s = -dx * np.arange(n + 1)
    vals = _line_transform(data.L.k, data.L.values, s)
    for tau, c in zip(data.taus.kappas, data.c):
        vals = vals + c * c * np.exp(-tau * s)
    return Kernel2D("FM", "left", dx, vals, data.taus, data.c ** 2, x_max)


def fm_invert(kernel: Kernel2D | FMData, x_max: float = DEFAULT_X_MAX, dx: float = DEFAULT_DX) -> Potential:
    """V = 2 d/dx B(x, 0+) with B(x,y) + Omega(y-2x) + int_0^inf Omega(y+z-2x) B(x,z) dz = 0.

    Omega vanishes for positive arguments, so B(x, .) lives on [0, 2x].
    """
    if isinstance(kernel, FMData):
        kernel = fm_kernel(kernel, x_max, dx)
    h = kernel.h
    om = kernel.values
    nx = (len(om) - 1) // 2
    diag = np.empty(nx + 1)
    diag[0] = -om[0]
    for n in range(1, nx + 1):
        size = 2 * n + 1
        idx = np.arange(size)
        m = 2 * n - (idx[:, None] + idx[None, :])   # Omega at -m*h; m < 0 means zero
        mat = np.where(m >= 0, om[np.clip(m, 0, None)], 0.0)
        wts = np.full((size, size), h)
        wts[:, 0] = 0.5 * h
        wts[m == 0] = 0.5 * h
        wts[m < 0] = 0.0
        A = np.eye(size) + mat * wts
        B = _solve(A, -om[2 * n - idx])
        diag[n] = B[0]
    return _as_potential(diag, h, 1.0)
