"""Forward map: potential and boundary condition to Jost data and spectral data."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from . import _kernels
from .core import (
    BoundaryFunction,
    HalfPlaneFunction,
    BoundaryParam,
    EigenSet,
    KGrid,
    Potential,
    make_kgrid,
)
from .errors import (
    DegenerateState,
    IntegrationFailure,
    InterlacingViolation,
    RootFailure,
    ZeroCrossing,
)

EQUAL = "Equal"
PLUS_ONE = "PlusOne"

# |F(k_min)| < D_FLAG_TOL * (1 + |F(k_max)|) declares the exceptional case
D_FLAG_TOL = 1e-4


@dataclass(frozen=True)
class JostAtOrigin:
    f0: complex
    fprime0: complex
    k: complex


@dataclass(frozen=True, eq=False)
class ForwardSummary:
    F: BoundaryFunction
    eigs: EigenSet
    g: np.ndarray
    m: np.ndarray
    d_flag: int
    phase: np.ndarray
    bc: BoundaryParam = field(default=None)


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    lam: np.ndarray
    ac_density: np.ndarray
    point_masses: list


def _m_at_origin(V: Potential, ks):
    ks = np.atleast_1d(np.asarray(ks, dtype=complex))
    m0, mp0 = _kernels.jost_m(ks, V.values, V.midpoints(), V.grid.dx)
    if not (np.all(np.isfinite(m0)) and np.all(np.isfinite(mp0))):
        raise IntegrationFailure("Jost integration overflowed; reduce x_max or Im k")
    return ks, m0, mp0


def jost_at_origin(V: Potential, ks):
    """f(k,0) and f'(k,0) for an array of k in the closed upper half plane."""
    ks, m0, mp0 = _m_at_origin(V, ks)
    return m0, mp0 + 1j * ks * m0


def jost_solution(V: Potential, k: complex):
    """Jost solution f(k,x) and f'(k,x) on the potential's grid.

    Integrated backward from x_max where f = exp(ikx) exactly; the factor
    exp(ikx) is split off (f = exp(ikx) m) so growth on the imaginary axis
    stays bounded.
    """
    k = complex(k)
    if k.imag < 0:
        raise ValueError("k must lie in the closed upper half plane")
    m, mp = _kernels.jost_profile(k, V.values, V.midpoints(), V.grid.dx)
    if not (np.all(np.isfinite(m)) and np.all(np.isfinite(mp))):
        raise IntegrationFailure(f"Jost integration failed at k = {k}")
    x = V.grid.points
    e = np.exp(1j * k * x)
    return e * m, e * (mp + 1j * k * m)


def _jost_from_origin(bc: BoundaryParam, f0, fp0):
    if bc.is_dirichlet:
        return f0
    return -1j * (fp0 + bc.cot_value * f0)


def jost_function(V: Potential, bc: BoundaryParam, k):
    """F(k): -i[f'(k,0) + cot(alpha) f(k,0)] (Robin) or f(k,0) (Dirichlet)."""
    f0, fp0 = jost_at_origin(V, k)
    out = _jost_from_origin(bc, f0, fp0)
    if np.ndim(k) == 0:
        return complex(out[0])
    return out


def jost_half_plane(V: Potential, bc: BoundaryParam) -> HalfPlaneFunction:
    """F as an evaluator anywhere in the closed upper half plane."""
    return HalfPlaneFunction(lambda k: jost_function(V, bc, k), "numeric", bc.parity, name=f"F[{bc.kind}]")


def jost_boundary_function(V: Potential, bc: BoundaryParam, grid: KGrid) -> BoundaryFunction:
    return BoundaryFunction(grid, jost_function(V, bc, grid.points.astype(complex)), bc.parity)


def _imag_axis_real(V: Potential, bc: BoundaryParam, kappas):
    """Real-valued restriction of F to the positive imaginary axis."""
    kappas = np.atleast_1d(np.asarray(kappas, dtype=float))
    f0, fp0 = jost_at_origin(V, 1j * kappas)
    if bc.is_dirichlet:
        return f0.real
    return (fp0 + bc.cot_value * f0).real


def kappa_bound(V: Potential, bc: BoundaryParam) -> float:
    """Upper bound for bound-state kappas: H >= min V - max(cot, 0)**2."""
    extra = 0.0 if bc.is_dirichlet else max(bc.cot_value, 0.0) ** 2
    return 1.0 + math.sqrt(max(0.0, -float(np.min(V.values))) + extra)


def bound_states(V: Potential, bc: BoundaryParam, n_scan: int = 800, xtol: float = 1e-12) -> EigenSet:
    """All kappa > 0 with F(i kappa) = 0, by sign scan plus Brent refinement."""
    kmax = kappa_bound(V, bc)
    scan = np.concatenate([np.geomspace(1e-6 * kmax, 0.02 * kmax, 40, endpoint=False),
                           np.linspace(0.02 * kmax, kmax, n_scan)])
    vals = _imag_axis_real(V, bc, scan)
    roots = []
    for i in range(len(scan) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(scan[i])
            continue
        if a * b < 0:
            try:
                r = brentq(lambda s: _imag_axis_real(V, bc, s)[0], scan[i], scan[i + 1], xtol=xtol, rtol=1e-15,
                           maxiter=200)
            except (RuntimeError, ValueError) as exc:
                raise RootFailure(f"root refinement failed in [{scan[i]}, {scan[i + 1]}]") from exc
            roots.append(r)
    return EigenSet(np.array(sorted(roots)))


def norming_constants(V: Potential, bc: BoundaryParam, eigs: EigenSet):
    """Gel'fand-Levitan (g) and Marchenko (m) norming constants for each bound state."""
    g, m = [], []
    x = V.grid.points
    for kap in eigs.kappas:
        f, fp = jost_solution(V, 1j * kap)
        f = f.real
        norm2 = simpson(f * f, x=x) + math.exp(-2 * kap * x[-1]) / (2 * kap)
        if not norm2 > 0:
            raise DegenerateState(f"zero norm at kappa = {kap}")
        norm = math.sqrt(norm2)
        top = abs(fp[0].real) if bc.is_dirichlet else abs(f[0])
        g.append(top / norm)
        m.append(1.0 / norm)
    return np.array(g), np.array(m)


def phase_shift(F: BoundaryFunction) -> np.ndarray:
    """phi(k) = -arg F(k), unwrapped downward from the principal value at k_max."""
    mod = np.abs(F.values)
    if np.any(mod[1:] < 1e-12):
        raise ZeroCrossing("Jost function vanishes at an interior real k")
    ang = -np.angle(F.values[::-1])
    return np.unwrap(ang)[::-1]


def scattering_matrix(F: BoundaryFunction, bc_kind: str | None = None) -> BoundaryFunction:
    """S(k) = -F(-k)/F(k) (Robin) or F(-k)/F(k) (Dirichlet); both equal conj(F)/F on R."""
    if np.any(np.abs(F.values) == 0):
        raise ZeroCrossing("zero denominator in the scattering matrix")
    sign = -1.0 if F.parity == "anti-conjugate" else 1.0
    f_minus = F(-F.k)
    S = sign * f_minus / F.values
    return BoundaryFunction(F.grid, S, "conjugate")


def spectral_measure(F: BoundaryFunction, eigs: EigenSet, g) -> SpectralMeasure:
    k = F.k
    mod2 = np.abs(F.values) ** 2
    if np.any(mod2[1:] == 0):
        raise ZeroCrossing("|F| vanishes at an interior grid point")
    g = np.asarray(g, dtype=float)
    if len(g) != len(eigs):
        raise ValueError("norming constants do not match the eigenvalues")
    lam = k * k
    dens = k / (np.pi * mod2)
    masses = [(-kap * kap, gj * gj) for kap, gj in zip(eigs.kappas, g)]
    return SpectralMeasure(lam, dens, masses)


def d_flag(F: BoundaryFunction, tol: float = D_FLAG_TOL) -> int:
    return int(abs(F.values[0]) < tol * (1.0 + abs(F.values[-1])))


def levinson_report(phase, eigs: EigenSet, d: int, bc_kind: str):
    """(phi(0+), right-hand side of Levinson's formula, difference); diagnostic only."""
    phi0 = float(np.asarray(phase)[0])
    n = len(eigs)
    if bc_kind == "Dirichlet":
        rhs = (n + d / 2.0) * math.pi
    else:
        rhs = (n + (1 + d) / 2.0) * math.pi
    return phi0, rhs, phi0 - rhs


def interlacing_check(eig_alpha: EigenSet, eig_beta: EigenSet) -> str:
    """Classify the eigenvalue pair for 0 < beta < alpha: Equal or PlusOne."""
    a = list(eig_alpha)
    b = list(eig_beta)
    if len(b) == len(a):
        seq = [v for pair in zip(a, b) for v in pair]
        kind = EQUAL
    elif len(b) == len(a) + 1:
        seq = [b[0]] + [v for pair in zip(a, b[1:]) for v in pair]
        kind = PLUS_ONE
    else:
        raise InterlacingViolation(f"counts N_alpha={len(a)}, N_beta={len(b)} cannot interlace")
    if any(x >= y for x, y in zip(seq, seq[1:])):
        raise InterlacingViolation(f"ordering violated: alpha={a}, beta={b}")
    return kind


def forward_summary(V: Potential, bc: BoundaryParam, grid: KGrid | None = None) -> ForwardSummary:
    grid = grid or make_kgrid()
    F = jost_boundary_function(V, bc, grid)
    eigs = bound_states(V, bc)
    g, m = norming_constants(V, bc, eigs)
    return ForwardSummary(F, eigs, g, m, d_flag(F), phase_shift(F), bc)
