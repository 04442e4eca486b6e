"""Spectral shift function of a boundary-condition pair, and recovery from it.

For Robin alpha the pair ratio is Z = F_alpha/F_beta, for Dirichlet alpha it
is Z = i F_beta/F_pi.  xi is the normalized argument of Z divided by pi:
a real function in (0, 1) on the positive real axis and a 0/1 step function
on the positive imaginary axis whose jumps sit at the bound-state kappas of
both boundary conditions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .core import (
    ANTI_CONJUGATE,
    CONJUGATE,
    DIRICHLET,
    ROBIN,
    BoundaryParam,
    EigenSet,
    HalfPlaneFunction,
    KGrid,
    blaschke,
)
from .errors import (
    AsymptoticsFailure,
    ConsistencyFailure,
    InvalidXi,
    ReductionFailure,
    SpectralError,
)
from .halfplane import log_schwarz_reconstruct, outer_from_modulus

EQUAL = "Equal"
PLUS_ONE = "PlusOne"
ROBIN_PAIR = "Robin-pair"
DIRICHLET_TOP = "Dirichlet-top"


@dataclass(frozen=True, eq=False)
class KreinShift:
    """xi on the grid of R+ plus its step profile on the positive imaginary axis.

    ``jumps`` lists (kappa, value just above kappa); ``imag_at_zero`` is the
    value on (0, first jump); ``xi_at_infinity`` is 0 (Robin alpha) or 1/2
    (Dirichlet alpha).
    """

    grid: KGrid
    real_axis: np.ndarray
    jumps: tuple = ()
    imag_at_zero: Optional[int] = None
    xi_at_infinity: float = 0.0

    def __post_init__(self):
        vals = np.asarray(self.real_axis, dtype=float)
        object.__setattr__(self, "real_axis", vals)
        if vals.shape != self.grid.points.shape:
            raise InvalidXi("xi samples do not match the grid")
        if self.xi_at_infinity not in (0.0, 0.5):
            raise InvalidXi("xi at infinity must be 0 or 1/2")
        jumps = tuple((float(k), int(v)) for k, v in sorted(self.jumps))
        object.__setattr__(self, "jumps", jumps)
        if any(v not in (0, 1) for _, v in jumps):
            raise InvalidXi("values on the imaginary axis must be 0 or 1")
        if self.imag_at_zero is None:
            start = 1 - jumps[0][1] if jumps else (1 if self.dirichlet else 0)
            object.__setattr__(self, "imag_at_zero", start)
        prev = self.imag_at_zero
        for k, v in jumps:
            if v == prev:
                raise InvalidXi(f"no change of value at the jump {k}")
            prev = v

    @property
    def dirichlet(self) -> bool:
        return self.xi_at_infinity == 0.5

    @property
    def kind(self) -> str:
        return DIRICHLET if self.dirichlet else ROBIN

    def imag_value(self, omega):
        """xi(i*omega) for omega > 0 from the step profile."""
        omega = np.asarray(omega, dtype=float)
        out = np.full(omega.shape, self.imag_at_zero, dtype=int)
        for k, v in self.jumps:
            out = np.where(omega > k, v, out)
        return out

    def real_extended(self, k):
        """xi on the whole real line using xi(-k) = -xi(k)."""
        k = np.asarray(k, dtype=float)
        t = self.grid.points
        val = np.interp(np.abs(k), t, self.real_axis)
        return np.sign(k) * val


@dataclass(frozen=True, eq=False)
class ZRatio:
    Z: HalfPlaneFunction
    kind: str
    reduced: Optional[HalfPlaneFunction] = field(default=None)


def _ratio(Fa, Fb, alpha: BoundaryParam):
    if alpha.is_dirichlet:
        return lambda k: 1j * Fb(k) / Fa(k)
    return lambda k: Fa(k) / Fb(k)


def _imag_axis_jumps(Z, omega_max: float, n: int = 4000):
    """Sign changes of the real function Z(i omega) on (0, omega_max]."""
    om = np.concatenate([np.geomspace(1e-6 * omega_max, 1e-2 * omega_max, 200, endpoint=False),
                         np.linspace(1e-2 * omega_max, omega_max, n)])
    z = np.real(Z(1j * om))
    out = []
    for i in range(len(om) - 1):
        if z[i] * z[i + 1] < 0:
            r = brentq(lambda w: float(np.real(Z(1j * w))), om[i], om[i + 1], xtol=1e-12)
            out.append(r)
    return out


def xi_from_jost(Fa, Fb, alpha: BoundaryParam, beta: BoundaryParam, grid: KGrid,
                 eig_alpha: Optional[EigenSet] = None, eig_beta: Optional[EigenSet] = None,
                 omega_max: float = 50.0) -> KreinShift:
    """xi from the Jost pair; imaginary-axis jumps from the eigenvalues (or a sign scan of Z)."""
    if beta.is_dirichlet or (not alpha.is_dirichlet and beta.cot_value <= alpha.cot_value):
        raise ConsistencyFailure("need 0 < beta < alpha")
    zf = _ratio(Fa, Fb, alpha)
    k = grid.points.astype(complex)
    Z = np.asarray(zf(k))
    if np.any(Z.imag[1:] <= 0):
        raise ConsistencyFailure("Im Z is not positive on the positive real axis")
    if alpha.is_dirichlet:
        w = Z / (1j * k)
        base = 0.5
    else:
        w = Z
        base = 0.0
    ang = np.unwrap(np.angle(w[::-1]))[::-1]
    xi = base + ang / math.pi
    if eig_alpha is not None and eig_beta is not None:
        locs = sorted(list(eig_alpha) + list(eig_beta))
    else:
        locs = _imag_axis_jumps(lambda q: zf(q), omega_max)
    # value on each interval from the sign of Z there: positive -> 0, negative -> 1
    if eig_alpha is not None and eig_beta is not None:
        # every zero and pole of Z is simple, so the sign alternates back from its value at infinity
        last = 1 if alpha.is_dirichlet else 0
        vals = [(last + len(locs) - i) % 2 for i in range(len(locs) + 1)]
    else:
        edges = [0.0] + list(locs) + [locs[-1] + 1.0 if locs else 1.0]
        mids = np.array([0.5 * (a + b) for a, b in zip(edges[:-1], edges[1:])])
        signs = np.real(zf(1j * mids))
        vals = [0 if s > 0 else 1 for s in signs]
    jumps = tuple((kap, vals[i + 1]) for i, kap in enumerate(locs))
    return KreinShift(grid, xi, jumps, vals[0], 0.5 if alpha.is_dirichlet else 0.0)


def eigen_from_jumps(xi: KreinShift):
    """(alpha kind, N_alpha, N_beta, eig_alpha, eig_beta) from the imaginary-axis profile."""
    locs = [k for k, _ in xi.jumps]
    start = xi.imag_at_zero
    end = xi.jumps[-1][1] if xi.jumps else start
    if xi.dirichlet:
        if end != 1:
            raise InvalidXi("Dirichlet profile must end at 1")
        plus_one = start == 0
    else:
        if end != 0:
            raise InvalidXi("Robin profile must end at 0")
        plus_one = start == 1
    J = len(locs)
    if (J % 2 == 1) != plus_one:
        raise InvalidXi("jump count does not match any interlacing table")
    first = locs[0::2]
    second = locs[1::2]
    if plus_one:
        eig_beta, eig_alpha = first, second
    else:
        eig_alpha, eig_beta = first, second
    ea, eb = EigenSet(eig_alpha), EigenSet(eig_beta)
    return xi.kind, len(ea), len(eb), ea, eb


def _atan_sum(k, kappas):
    out = np.zeros_like(k, dtype=float)
    for kap in kappas:
        out += np.arctan2(kap, k)
    return out


def reduce_xi(xi: KreinShift, eig_alpha: EigenSet, eig_beta: EigenSet, tol: float = 1e-6) -> np.ndarray:
    """xi with the bound-state phase removed, on the grid of R+ (odd on R)."""
    k = xi.grid.points
    a = _atan_sum(k, eig_alpha.kappas)
    b = _atan_sum(k, eig_beta.kappas)
    if xi.dirichlet:
        xi0 = xi.real_axis + (2.0 / math.pi) * (b - a)
    else:
        xi0 = xi.real_axis + (2.0 / math.pi) * (a - b)
    # reduced profile on I+: xi plus the parity of factors with kappa above omega
    # (one extra sign from ik in the Dirichlet case) must vanish mod 2
    locs = np.array(sorted(list(eig_alpha) + list(eig_beta)))
    if len(locs):
        edges = np.concatenate([[0.0], locs, [locs[-1] + 1.0]])
        mids = 0.5 * (edges[:-1] + edges[1:])
        n_above = np.array([np.sum(locs > m) for m in mids])
        expected = (n_above % 2) ^ (1 if xi.dirichlet else 0)
        got = xi.imag_value(mids)
        if np.any(np.abs(got - expected) > tol):
            raise ReductionFailure("reduced shift does not vanish on the imaginary axis")
    elif xi.imag_value(np.array([1.0]))[0] != (1 if xi.dirichlet else 0):
        raise ReductionFailure("reduced shift does not vanish on the imaginary axis")
    return xi0


def z_from_xi(xi0, grid: KGrid, eig_alpha: EigenSet, eig_beta: EigenSet, kind: str) -> ZRatio:
    """Z from the reduced shift: exponential of a Schwarz integral, then the Blaschke factors."""
    xi0 = np.asarray(xi0, dtype=float)
    if kind == DIRICHLET:
        z0 = log_schwarz_reconstruct(grid, math.pi * (xi0 - 0.5), "ik")

        def ev(k):
            return z0(k) * blaschke(k, eig_beta) / blaschke(k, eig_alpha)
        zkind = DIRICHLET_TOP
    else:
        z0 = log_schwarz_reconstruct(grid, math.pi * xi0, "plain")

        def ev(k):
            return z0(k) * blaschke(k, eig_alpha) / blaschke(k, eig_beta)
        zkind = ROBIN_PAIR
    Z = HalfPlaneFunction(ev, "numeric", None, name="Z")
    return ZRatio(Z, zkind, z0)


def _fit(Z, K, offset, powers, tol):
    s = np.geomspace(K, 64.0 * K, 24)
    y = np.real(Z(1j * s)) - offset(s)
    A = np.stack([s ** (-float(p)) for p in powers], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = np.max(np.abs(y - A @ coef))
    if not np.all(np.isfinite(coef)) or resid > tol:
        raise AsymptoticsFailure(f"large-k fit residual {resid:.3g}")
    return coef


def params_from_z(Z: HalfPlaneFunction, kind: str, K: float, tol: float = 1e-6):
    """(alpha, beta, h) from Z ~ 1 + ih/k - h cot(beta)/k^2 or Z ~ ik + cot(beta)."""
    if kind == DIRICHLET:
        b = _fit(Z, K, lambda s: -s, [0, 1, 2, 3, 4, 5], tol * K)
        return BoundaryParam.dirichlet(), BoundaryParam.robin(float(b[0])), None
    a = _fit(Z, K, lambda s: np.ones_like(s), [1, 2, 3, 4, 5, 6, 7], tol)
    h = float(a[0])
    if not h > 0:
        raise AsymptoticsFailure(f"recovered h = {h} is not positive")
    cb = float(a[1]) / h
    return BoundaryParam.robin(cb - h), BoundaryParam.robin(cb), h


@dataclass(frozen=True, eq=False)
class KreinRecovery:
    alpha: BoundaryParam
    beta: BoundaryParam
    F_alpha: HalfPlaneFunction
    F_beta: HalfPlaneFunction
    Z: ZRatio
    eig_alpha: EigenSet
    eig_beta: EigenSet


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except SpectralError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


def recover_from_xi(xi: KreinShift) -> KreinRecovery:
    """alpha, beta and both Jost functions from xi alone."""
    kind, _, _, ea, eb = _stage("jumps", eigen_from_jumps, xi)
    xi0 = _stage("reduce", reduce_xi, xi, ea, eb)
    zr = _stage("z", z_from_xi, xi0, xi.grid, ea, eb, kind)
    alpha, beta, h = _stage("asymptotics", params_from_z, zr.Z, kind, xi.grid.k_max)
    k = xi.grid.points
    imz = np.real(np.imag(zr.Z(k.astype(complex))))
    if np.any(imz <= 0):
        raise ConsistencyFailure("Im Z is not positive on the real axis", stage="modulus")
    Z = zr.Z
    if kind == DIRICHLET:
        mod = np.sqrt(k / imz)
        Fpi = _stage("outer", outer_from_modulus, xi.grid, mod, ea, DIRICHLET)
        Fb = HalfPlaneFunction(lambda q: -1j * Z(q) * Fpi(q), "numeric", ANTI_CONJUGATE, name="F_beta")
        Fa = Fpi
    else:
        mod = np.sqrt(k * h / imz)
        Fb = _stage("outer", outer_from_modulus, xi.grid, mod, eb, ROBIN)
        Fa = HalfPlaneFunction(lambda q: Z(q) * Fb(q), "numeric", ANTI_CONJUGATE, name="F_alpha")
    return KreinRecovery(alpha, beta, Fa, Fb, zr, ea, eb)


def xi_at_zero_report(xi: KreinShift, d_alpha: int, d_beta: int):
    """(xi(0+), value predicted from the eigenvalue counts, difference); diagnostic only."""
    _, na, nb, _, _ = eigen_from_jumps(xi)
    observed = float(xi.real_axis[0])
    if xi.dirichlet:
        predicted = na - nb + (d_alpha - d_beta) / 2.0
    else:
        predicted = nb - na + (d_beta - d_alpha) / 2.0
    return observed, predicted, observed - predicted
