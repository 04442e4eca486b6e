"""Recovery of the boundary pair and both Jost functions from one modulus,
two eigenvalue sets and (depending on the data set) h or beta.

Each data set D1..D8 gives the real part of an auxiliary function Lambda_j
on the real line as a closed expression in the data.  Lambda_j is analytic
and O(1/k) in C+, so it is rebuilt by the Schwarz transform; the ratio of
the two Jost functions then follows algebraically, the missing boundary
parameters from the large-k behaviour of that ratio, and the Jost function
whose modulus is known from its outer factorization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

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
    SpectralDataSet,
)
from .errors import (
    AsymptoticsFailure,
    ConsistencyFailure,
    InvalidArgument,
    InvalidDataset,
    InterlacingViolation,
    NotInClass,
    RecoveryFailure,
    ZeroCrossing,
)
from .forward import JostAtOrigin, interlacing_check
from .halfplane import EVEN, ODD, CauchyTransform, outer_from_modulus, winding_number

# relative tolerance on the k -> i*infinity limit used for D3/D4
LIMIT_TOL = 1e-3
# |u(K)| / max|u| above this means the real part does not decay
DECAY_REJECT = 0.5
# a real k this close to 0 is moved up the imaginary axis inside ratios
ORIGIN_NUDGE = 1e-7


def _q(k, kap_top, kap_bottom):
    """prod (k^2 + a^2) / prod (k^2 + b^2); rational in k, analytic off the poles."""
    k = np.asarray(k, dtype=complex)
    k2 = k * k
    out = np.ones_like(k)
    for a in kap_top:
        out = out * (k2 + a * a)
    for b in kap_bottom:
        out = out / (k2 + b * b)
    return out


def _nudge(k):
    k = np.asarray(k, dtype=complex)
    return np.where(np.abs(k) < ORIGIN_NUDGE, k + 1j * ORIGIN_NUDGE, k)


@dataclass(eq=False)
class LambdaFamily:
    """Re Lambda_j on the grid, possibly depending on one missing kappa (j = 3, 4)."""

    j: int
    dataset: SpectralDataSet
    re_builder: Callable
    resolved: Optional[HalfPlaneFunction] = None
    kappa_missing: Optional[float] = None
    transform: Optional[CauchyTransform] = field(default=None, repr=False)

    @property
    def grid(self) -> KGrid:
        return self.dataset.modulus.grid

    @property
    def parity(self) -> str:
        return ODD if self.j == 1 else EVEN

    @property
    def has_parameter(self) -> bool:
        return self.j in (3, 4)

    def eig_beta(self, kappa: Optional[float] = None) -> EigenSet:
        base = list(self.dataset.eig_beta)
        if self.has_parameter:
            kap = self.kappa_missing if kappa is None else kappa
            if kap is None:
                raise InvalidArgument("missing kappa not supplied")
            base.append(float(kap))
        return EigenSet(sorted(base))


def _check_interlacing(D: SpectralDataSet):
    if D.partial:
        return
    try:
        kind = interlacing_check(D.eig_alpha, D.eig_beta)
    except InterlacingViolation as exc:
        raise InvalidDataset(str(exc)) from exc
    if (kind == "PlusOne") != D.plus_one:
        raise InvalidDataset(f"{D.tag}: eigenvalue counts do not match the data set")


def build_re_lambda(D: SpectralDataSet) -> LambdaFamily:
    """Real part of Lambda_j on the data grid as a closed expression in the data."""
    _check_interlacing(D)
    j = int(D.tag[1])
    t = D.modulus.grid.points
    mod = np.asarray(D.modulus.values.real, dtype=float)
    if np.any(mod[1:] <= 0):
        raise ZeroCrossing("modulus vanishes at an interior grid point")
    mod2 = mod * mod
    h = D.h_beta_alpha
    ka = D.eig_alpha.kappas

    def builder(kappa=None):
        kb = D.eig_beta.kappas if kappa is None else np.append(D.eig_beta.kappas, kappa)
        if j in (3, 4) and kappa is None:
            raise InvalidArgument("D3/D4 need a trial value for the missing kappa")
        Q = _q(t, ka, kb).real
        with np.errstate(divide="ignore", invalid="ignore"):
            if j == 1:
                u = t * h * Q / mod2
            elif j == 2:
                u = -1.0 + Q / mod2
            elif j == 3:
                u = h * t * t * Q / mod2
            elif j == 4:
                u = -1.0 + t * t * Q / mod2
            elif j == 5:
                u = -h + t * t * h / (mod2 * Q)
            elif j == 6:
                u = -1.0 + t * t / (mod2 * Q)
            elif j == 7:
                u = h - h / (mod2 * Q)
            else:
                u = -1.0 + 1.0 / (mod2 * Q)
        if not np.all(np.isfinite(u)):
            raise ZeroCrossing("Re Lambda is not finite on the grid (modulus vanishes)")
        return u

    fam = LambdaFamily(j, D, builder)
    if not fam.has_parameter:
        u = builder()
        peak = max(np.max(np.abs(u)), 1e-300)
        if abs(u[-1]) / peak > DECAY_REJECT and abs(u[-1]) > 1e-8:
            raise NotInClass(f"Re Lambda_{j} does not decay at k_max; data are inconsistent")
    return fam


def _limit_target(fam: LambdaFamily) -> float:
    """Required value of (1/pi) int Re Lambda dt for the D3/D4 families."""
    if fam.j == 3:
        return 1.0
    return -fam.dataset.beta.cot_value


def _limit_residual(fam: LambdaFamily, kappa: float) -> float:
    u = fam.re_builder(kappa)
    ct = CauchyTransform(fam.grid, u, EVEN, "real", singular_weight=0.0)
    return ct.line_integral() / math.pi - _limit_target(fam)


def reconstruct_lambda(fam: LambdaFamily, kappa: Optional[float] = None) -> HalfPlaneFunction:
    """Lambda_j from its real part; certifies O(1/k) decay along the imaginary axis."""
    if fam.has_parameter:
        if kappa is None:
            kappa = fam.kappa_missing
        if kappa is None:
            raise InvalidArgument(f"Lambda_{fam.j} needs the missing kappa")
        u = fam.re_builder(kappa)
    else:
        if kappa is not None:
            raise InvalidArgument(f"Lambda_{fam.j} takes no parameter")
        u = fam.re_builder()
    ct = CauchyTransform(fam.grid, u, fam.parity, "real", singular_weight=0.0)
    K = fam.grid.k_max
    s = np.array([K, 2 * K, 4 * K])
    vals = np.abs(ct(1j * s)) * s
    if not np.all(np.isfinite(vals)) or vals[-1] > 2.0 * vals[0] + 1e-6 * max(1.0, float(np.max(np.abs(u)))):
        raise NotInClass(f"Lambda_{fam.j} is not O(1/k) along the imaginary axis")
    if fam.has_parameter:
        res = ct.line_integral() / math.pi - _limit_target(fam)
        scale = max(1.0, abs(_limit_target(fam)))
        if abs(res) > LIMIT_TOL * scale:
            raise NotInClass(f"Lambda_{fam.j} misses its limit at infinity (residual {res:.3g})")
    lam = HalfPlaneFunction(ct, "numeric", None, name=f"Lambda_{fam.j}")
    lam.transform = ct
    if fam.has_parameter:
        fam.kappa_missing = float(kappa)
    fam.resolved = lam
    fam.transform = ct
    return lam


def _missing_slot(eig_alpha: EigenSet, partial: EigenSet):
    """Open interval for the missing beta eigenvalue in a PlusOne interlacing."""
    a = list(eig_alpha)
    bounds = [0.0] + a + [math.inf]
    slots = [(bounds[i], bounds[i + 1]) for i in range(len(a) + 1)]
    free = []
    for lo, hi in slots:
        inside = [b for b in partial if lo < b < hi]
        if len(inside) > 1:
            raise RecoveryFailure("two known beta eigenvalues share an interlacing slot")
        if not inside:
            free.append((lo, hi))
    if any(b in a for b in partial) or len(free) != 1:
        raise RecoveryFailure("known eigenvalues do not leave exactly one admissible slot")
    return free[0]


def resolve_missing_eigenvalue(fam: LambdaFamily, xtol: float = 1e-12) -> float:
    """The kappa for which Lambda_3 (Lambda_4) has the right limit at i*infinity."""
    if not fam.has_parameter:
        raise InvalidArgument("only D3/D4 families have a missing eigenvalue")
    lo, hi = _missing_slot(fam.dataset.eig_alpha, fam.dataset.eig_beta)
    span = hi - lo if math.isfinite(hi) else max(lo, 1.0)
    a = lo + 1e-9 * span
    f = lambda kap: _limit_residual(fam, kap)
    fa = f(a)
    if math.isfinite(hi):
        b = hi - 1e-9 * span
        fb = f(b)
    else:
        b, fb = max(2.0 * lo, 1.0), None
        for _ in range(60):
            fb = f(b)
            if fa * fb < 0:
                break
            b *= 2.0
    if not (fa * fb < 0):
        raise RecoveryFailure(f"no missing eigenvalue in ({lo}, {hi})")
    kap = brentq(f, a, b, xtol=xtol, rtol=1e-14, maxiter=200)
    fam.kappa_missing = float(kap)
    return float(kap)


def _fit_imag_axis(Z: HalfPlaneFunction, K: float, offset: Callable, powers, tol: float):
    s = np.geomspace(K, 64.0 * K, 24)
    y = Z(1j * s).real - offset(s)
    A = np.stack([s ** (-float(p)) for p in powers], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    if not np.all(np.isfinite(coef)) or np.max(np.abs(resid)) > tol:
        raise AsymptoticsFailure(f"large-k fit residual {np.max(np.abs(resid)):.3g}")
    return coef


def recover_params_and_ratio(fam: LambdaFamily, D: SpectralDataSet | None = None, fit_tol: float = 1e-6):
    """(alpha, beta, Z) where Z = F_alpha/F_beta (Robin alpha) or i F_beta/F_pi (Dirichlet alpha)."""
    D = D or fam.dataset
    lam = fam.resolved
    if lam is None:
        raise InvalidArgument("reconstruct Lambda first")
    j = fam.j
    ka = D.eig_alpha.kappas
    kb = fam.eig_beta().kappas
    h = D.h_beta_alpha
    beta = D.beta
    m1 = fam.transform.leading_coefficient() if j in (2, 7, 8) else 0.0

    def Q(k):
        return _q(k, ka, kb)

    if j == 1:
        ratio = lambda k: 1j * Q(k) / (lam(k) + 1j)                       # F_alpha / F_beta
    elif j == 2:
        c2 = -1j * beta.cot_value - m1
        ratio = lambda k: 1j * (k * (lam(k) + 1.0) + c2) / Q(k)          # i F_beta / F_pi
    elif j == 3:
        ratio = lambda k: 1j * k * Q(k) / lam(k)
    elif j == 4:
        ratio = lambda k: 1j * (lam(k) + 1.0) / (k * Q(k))
    elif j == 5:
        ratio = lambda k: Q(k) * (1j * k - h - lam(k)) / (1j * k)
    elif j == 6:
        ratio = lambda k: 1j * k / (Q(k) * (lam(k) + 1.0))
    elif j == 7:
        sigma = float(np.sum(kb ** 2) - np.sum(ka ** 2))
        c7 = sigma - h * beta.cot_value + 1j * m1
        ratio = lambda k: Q(k) * (k * k + 1j * h * k + c7 - 1j * k * lam(k))
    else:
        c8 = 1j * beta.cot_value - m1
        ratio = lambda k: 1j / (Q(k) * (k * (lam(k) + 1.0) + c8))

    Z = HalfPlaneFunction(lambda k: ratio(_nudge(k)), "numeric", None, name=f"Z[D{j}]")
    K = D.modulus.grid.k_max

    if D.alpha_dirichlet:
        alpha = BoundaryParam.dirichlet()
        if beta is None:
            b = _fit_imag_axis(Z, K, lambda s: -s, [0, 1, 2, 3, 4, 5], fit_tol * K)
            beta = BoundaryParam.robin(float(b[0]))
    else:
        if beta is None:
            a = _fit_imag_axis(Z, K, lambda s: 1.0 + h / s, [2, 3, 4, 5, 6, 7], fit_tol)
            beta = BoundaryParam.robin(float(a[0] / h))
        alpha = BoundaryParam.robin(beta.cot_value - h)
    return alpha, beta, Z


def _zero_count(func, kappas) -> int:
    """Zeros of func in a box around the imaginary-axis segment holding all kappas.

    The box edges avoid every kappa, where ratio formulas have removable poles.
    """
    kappas = np.asarray(kappas, dtype=float)
    y0 = 0.5 * float(np.min(kappas))
    y1 = float(np.max(kappas)) + 1.0
    return winding_number(func, (-0.5, 0.5, y0, y1), n=600)


def recover_jost_pair(D: SpectralDataSet, Z: HalfPlaneFunction, alpha: BoundaryParam, beta: BoundaryParam,
                      eig_beta: Optional[EigenSet] = None, verify: bool = True):
    """F_alpha and F_beta: the one with known modulus by outer factorization, the other through Z."""
    eig_beta = eig_beta if eig_beta is not None else D.eig_beta
    grid = D.modulus.grid
    mod = D.modulus.values.real
    if D.modulus_of_alpha:
        kind = DIRICHLET if alpha.is_dirichlet else ROBIN
        Fa = outer_from_modulus(grid, mod, D.eig_alpha, kind)
        if alpha.is_dirichlet:
            Fb_eval = lambda k: -1j * Z(k) * Fa(k)
        else:
            Fb_eval = lambda k: Fa(k) / Z(k)
        Fb = HalfPlaneFunction(lambda k: Fb_eval(_nudge(k)), "numeric", ANTI_CONJUGATE, name="F_beta")
        derived, zeros = Fb, eig_beta
    else:
        Fb = outer_from_modulus(grid, mod, eig_beta, ROBIN)
        if alpha.is_dirichlet:
            Fa_eval = lambda k: 1j * Fb(k) / Z(k)
            parity = CONJUGATE
        else:
            Fa_eval = lambda k: Z(k) * Fb(k)
            parity = ANTI_CONJUGATE
        Fa = HalfPlaneFunction(lambda k: Fa_eval(_nudge(k)), "numeric", parity, name="F_alpha")
        derived, zeros = Fa, D.eig_alpha
    if verify and len(zeros) > 0:
        everything = np.concatenate([D.eig_alpha.kappas, eig_beta.kappas])
        n = _zero_count(derived, everything)
        if n != len(zeros):
            raise RecoveryFailure(f"derived Jost function has {n} zeros in the test box, expected {len(zeros)}")
    return Fa, Fb


def boundary_data_f(Fa, Fb, alpha: BoundaryParam, beta: BoundaryParam, k) -> JostAtOrigin:
    """f(k,0) and f'(k,0) from the two Jost functions."""
    k = complex(k)
    if alpha.is_dirichlet:
        fpi = complex(Fa(k))
        return JostAtOrigin(fpi, 1j * complex(Fb(k)) - beta.cot_value * fpi, k)
    h = beta.cot_value - alpha.cot_value
    if h == 0:
        raise InvalidArgument("alpha and beta coincide")
    fa, fb = complex(Fa(k)), complex(Fb(k))
    f0 = 1j / h * (fb - fa)
    fp0 = 1j / h * (beta.cot_value * fa - alpha.cot_value * fb)
    return JostAtOrigin(f0, fp0, k)


def _value_at(F, z: complex, radius: float) -> complex:
    """F(z), or its mean over a small circle when z is a removable singularity of the evaluation."""
    val = complex(F(z))
    if np.isfinite(val):
        return val
    ring = z + radius * np.exp(2j * np.pi * np.arange(16) / 16)
    return complex(np.mean(np.asarray(F(ring))))


def norming_from_jost(Fa, Fb, h: Optional[float], eigs: EigenSet, bc_kind: str, imag_tol: float = 1e-8):
    """Gel'fand-Levitan and Marchenko norming constants from the Jost pair."""
    g, m = [], []
    for kap in eigs.kappas:
        z = 1j * kap
        dF = Fa.derivative(z, step=1e-5 * kap)
        fb = _value_at(Fb, z, 1e-3 * kap)
        if bc_kind == DIRICHLET:
            g2 = 2 * kap * fb / dF
            m2 = -2 * kap / (fb * dF)
        else:
            g2 = 2j * kap * fb / (h * dF)
            m2 = -2j * kap * h / (fb * dF)
        for name, val in (("g^2", g2), ("m^2", m2)):
            if not np.isfinite(val) or abs(val.imag) > imag_tol * max(1.0, abs(val)) or val.real <= 0:
                raise ConsistencyFailure(f"{name} = {val} at kappa = {kap} is not positive real")
        g.append(math.sqrt(g2.real))
        m.append(math.sqrt(m2.real))
    return np.array(g), np.array(m)


@dataclass(frozen=True, eq=False)
class Recovery:
    alpha: BoundaryParam
    beta: BoundaryParam
    F_alpha: HalfPlaneFunction
    F_beta: HalfPlaneFunction
    Z: HalfPlaneFunction
    eig_alpha: EigenSet
    eig_beta: EigenSet
    family: LambdaFamily

    @property
    def h(self) -> Optional[float]:
        if self.alpha.is_dirichlet:
            return None
        return self.beta.cot_value - self.alpha.cot_value


def recover(D: SpectralDataSet, verify: bool = True) -> Recovery:
    """Full pipeline for one data set."""
    fam = build_re_lambda(D)
    if fam.has_parameter:
        resolve_missing_eigenvalue(fam)
    reconstruct_lambda(fam)
    eig_beta = fam.eig_beta()
    try:
        interlacing_check(D.eig_alpha, eig_beta)
    except InterlacingViolation as exc:
        raise RecoveryFailure(str(exc)) from exc
    alpha, beta, Z = recover_params_and_ratio(fam, D)
    Fa, Fb = recover_jost_pair(D, Z, alpha, beta, eig_beta, verify=verify)
    return Recovery(alpha, beta, Fa, Fb, Z, D.eig_alpha, eig_beta, fam)
