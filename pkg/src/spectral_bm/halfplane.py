"""Analytic reconstruction in the upper half plane.

Everything here rests on one transform: for real data u on the line,

    S[u](k) = (1 / (pi i)) * int u(t) / (t - k) dt,    k in closed C+,

which returns the function g analytic in C+, O(1/k) at infinity, with
Re g = u on R.  Real k is the limit from above, so principal value plus
i*pi*u(k).  The integral is evaluated on a cubic-spline model of u over the
symmetric grid [-K, K] (exact per-piece formula near k, Gauss far away) and
an analytic power-law tail beyond |t| = K.
"""
from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from . import _kernels
from .core import ANTI_CONJUGATE, CONJUGATE, DIRICHLET, EigenSet, HalfPlaneFunction, KGrid, blaschke
from .errors import InvalidData, InvalidModulus, OutOfDomain, OutOfRange

log = logging.getLogger(__name__)

EVEN = "even"
ODD = "odd"
TAIL_FRACTION = 0.1
TAIL_TERMS = 5
# largest ratio of consecutive tail terms |a_{n+1} K^-p_{n+1}| / |a_n K^-p_n|
TAIL_RATIO = 0.5
# fit residual (relative to the window data) treated as an exact power law
TAIL_EXACT = 1e-9


def g0(k):
    """log(k / (k + i)); the reference carrying a log singularity or phase jump at 0."""
    k = np.asarray(k, dtype=complex)
    return np.log(k) - np.log(k + 1j)


def _ref_power(k, c):
    """(k/(k+i))**c on the branch of g0."""
    k = np.asarray(k, dtype=complex)
    if float(c).is_integer():
        return (k / (k + 1j)) ** int(c) if c >= 0 else ((k + 1j) / k) ** int(-c)
    return np.exp(c * g0(k))


def _re_g0(t):
    return 0.5 * np.log(t * t / (t * t + 1.0))


def _im_g0(t):
    return -np.sign(t) * np.arctan(1.0 / np.abs(t))


def _tail_integral(n: int, w: np.ndarray, K: float) -> np.ndarray:
    """int_K^inf s^-n / (s - w) ds for complex w (|Re w| <= K when w is real)."""
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    small = np.abs(w) < 0.5 * K
    if small.any():
        ws = w[small]
        acc = np.zeros_like(ws)
        term = np.ones_like(ws)
        for m in range(80):
            acc += term * K ** (-(n + m)) / (n + m)
            term = term * ws
        out[small] = acc
    big = ~small
    if big.any():
        wb = w[big]
        z = 1.0 - wb / K
        val = -np.log(z) / wb**n
        for j in range(2, n + 1):
            val -= K ** (1 - j) / ((j - 1) * wb ** (n - j + 1))
        out[big] = val
    return out


class CauchyTransform:
    """Schwarz transform of real samples given on the positive grid.

    ``parity`` states how the data extend to t < 0.  ``kind="real"`` reads
    the samples as Re g, ``kind="imag"`` as Im g.  A log singularity
    (even data) or a jump (odd data) at t = 0 is removed against the
    reference g0 = log(k/(k+i)) and added back analytically.
    """

    def __init__(self, grid: KGrid, samples, parity: str, kind: str = "real",
                 singular_weight: Optional[float] = None):
        t = grid.points
        u = np.asarray(samples, dtype=float)
        if u.shape != t.shape:
            raise InvalidData("samples do not match grid")
        if not np.all(np.isfinite(u)):
            raise InvalidData("samples contain NaN or Inf")
        if parity not in (EVEN, ODD) or kind not in ("real", "imag"):
            raise ValueError("bad parity/kind")
        self.grid = grid
        self.parity = parity
        self.kind = kind
        self.K = float(t[-1])

        # weight c of the reference g0 (Re g0 for real kind, Im g0 for imag kind)
        if singular_weight is not None:
            c = float(singular_weight)
        elif kind == "real" and parity == EVEN:
            # slope against log t at the small end
            i1 = min(len(t) - 1, max(1, np.searchsorted(t, t[0] * 100.0)))
            c = (u[i1] - u[0]) / (np.log(t[i1]) - np.log(t[0]))
            if abs(c - round(c)) < 0.05:
                c = float(round(c))
        elif kind == "imag" and parity == ODD:
            c = u[0] / (-np.pi / 2)
        else:
            c = 0.0
        self.weight = c
        if c != 0.0:
            ref = _re_g0(t) if kind == "real" else _im_g0(t)
            u = u - c * ref
        self.samples = u

        # symmetric spline model
        sign = 1.0 if parity == EVEN else -1.0
        if parity == EVEN:
            u_zero = u[0] - (u[1] - u[0]) * t[0] ** 2 / (t[1] ** 2 - t[0] ** 2)
        else:
            u_zero = 0.0
        t_full = np.concatenate([-t[::-1], [0.0], t])
        u_full = np.concatenate([sign * u[::-1], [u_zero], u])
        pp = CubicSpline(t_full, u_full)
        self._starts = t_full[:-1]
        self._widths = np.diff(t_full)
        self._coef = np.asarray(pp.c)
        self._spline = pp

        # tail model: powers matching the parity, pinned to u(K)
        self.tail_powers, self.tail_coef = self._fit_tail(t, u)
        self.decay_ratio = abs(u[-1]) / max(np.max(np.abs(u)), 1e-300)

    def _fit_tail(self, t, u):
        """Fewest-surprise tail: the most power terms whose extrapolation stays bounded.

        Power-law data take all TAIL_TERMS terms.  Data whose decay is not a
        power law (oscillating or sub-exponential tails) make the pinned fit
        cancel between huge coefficients and blow up beyond K; those fall
        back to fewer terms.
        """
        sel = t >= (1.0 - TAIL_FRACTION) * self.K
        ts, us = t[sel], u[sel]
        probe = self.K * np.geomspace(1.0, 100.0, 200)
        bound = 2.0 * np.max(np.abs(us)) + 1e-300
        for n_terms in range(TAIL_TERMS, 0, -1):
            powers, coef = self._fit_tail_terms(ts, us, u[-1], n_terms)
            tail = sum(a * probe ** (-float(p)) for p, a in zip(powers, coef))
            # accept an exact power law, or an asymptotic series whose terms shrink geometrically
            terms = np.abs(coef) * self.K ** (-powers.astype(float))
            resid = us - sum(a * ts ** (-float(p)) for p, a in zip(powers, coef))
            exact = np.max(np.abs(resid)) <= TAIL_EXACT * np.max(np.abs(us))
            shrinking = np.all(terms[1:] <= TAIL_RATIO * terms[:-1])
            if np.all(np.isfinite(coef)) and np.max(np.abs(tail)) <= bound and (exact or shrinking):
                return powers, coef
        return powers, coef

    def _fit_tail_terms(self, ts, us, u_end, n_terms):
        first_power = 1 if self.parity == ODD else 2
        powers = np.arange(first_power, first_power + 2 * n_terms, 2)
        K = self.K
        if n_terms == 1:
            return powers, np.array([u_end * K ** float(powers[0])])
        basis = np.stack([ts ** (-float(p)) for p in powers], axis=1)
        bK = np.array([K ** (-float(p)) for p in powers])
        # eliminate the first coefficient with the continuity constraint at K
        a_rest_basis = basis[:, 1:] - np.outer(basis[:, 0], bK[1:] / bK[0])
        rhs = us - basis[:, 0] * u_end / bK[0]
        scale = np.max(np.abs(a_rest_basis), axis=0)
        scale[scale == 0] = 1.0
        sol, *_ = np.linalg.lstsq(a_rest_basis / scale, rhs, rcond=None)
        rest = sol / scale
        first = (u_end - bK[1:] @ rest) / bK[0]
        return powers, np.concatenate([[first], rest])

    def _raw(self, k: np.ndarray) -> np.ndarray:
        """(1/(pi i)) int model(t)/(t-k) dt for the regularized samples."""
        k = np.asarray(k, dtype=complex).copy()
        K = self.K
        onaxis = k.imag == 0
        if np.any(np.abs(k.real[onaxis]) > K * (1 + 1e-12)):
            raise OutOfRange(f"real evaluation point beyond the data range |k| <= {K}")
        # nudge real points sitting on the truncation edge
        edge = K - 1e-6 * self._widths[-1]
        k.real[onaxis] = np.clip(k.real[onaxis], -edge, edge)
        body = _kernels.cauchy_sum(self._starts, self._widths, self._coef, k)
        p = 1.0 if self.parity == EVEN else -1.0
        tail = np.zeros_like(k)
        for n, a in zip(self.tail_powers, self.tail_coef):
            tail += a * (_tail_integral(int(n), k, K) - p * _tail_integral(int(n), -k, K))
        return (body + tail) / (1j * np.pi)

    def regular(self, k):
        """The transform without the reference term weight*g0(k)."""
        k = np.atleast_1d(np.asarray(k, dtype=complex))
        if np.any(k.imag < 0):
            raise OutOfDomain("evaluation point in the open lower half plane")
        raw = self._raw(k)
        if self.kind == "imag":
            raw = 1j * raw
        return raw

    def __call__(self, k):
        k = np.atleast_1d(np.asarray(k, dtype=complex))
        raw = self.regular(k)
        if self.weight != 0.0:
            raw = raw + self.weight * g0(k)
        return raw

    def exp_factor(self, k, sign: float = 1.0):
        """exp(sign * transform(k)), with the reference part as the power (k/(k+i))**(sign*weight)."""
        k = np.atleast_1d(np.asarray(k, dtype=complex))
        out = np.exp(sign * self.regular(k))
        if self.weight != 0.0:
            out = out * _ref_power(k, sign * self.weight)
        return out

    def line_integral(self) -> float:
        """int_{-inf}^{inf} of the data (Re g or Im g); zero for odd data."""
        if self.parity == ODD:
            return 0.0
        if self.weight != 0.0:
            raise InvalidData("data with a log singularity: the line integral is not used here")
        t = self.grid.points
        body = 2.0 * self._spline.integrate(0.0, t[-1])
        tail = 2.0 * sum(a * self.K ** (1 - n) / (n - 1) for n, a in zip(self.tail_powers, self.tail_coef))
        return float(body + tail)

    def leading_coefficient(self) -> complex:
        """lim k*g(k) as k -> infinity for even real data: (i/pi) int u dt."""
        return 1j / np.pi * self.line_integral()


def schwarz_reconstruct(grid: KGrid, re_samples, eval_point=None, parity: str = EVEN,
                        decay_tol: float = 1e-2):
    """Reconstruct g analytic in C+ with Re g = re_samples on R.

    Returns the evaluator if ``eval_point`` is None, else its value(s).
    """
    ct = CauchyTransform(grid, re_samples, parity, "real", singular_weight=0.0)
    if ct.decay_ratio > decay_tol:
        log.warning("real-part samples do not decay at k_max (ratio %.3g)", ct.decay_ratio)
    if eval_point is None:
        return ct
    val = ct(eval_point)
    return complex(val[0]) if np.ndim(eval_point) == 0 else val


def outer_from_modulus(grid: KGrid, modulus, zeros: EigenSet, bc_kind: str,
                       eval_point=None) -> HalfPlaneFunction | complex:
    """Jost function from its modulus on R+ and its zeros on the positive imaginary axis.

    Robin: F(k) = k B(k) exp(-S[log|t/F|](k)); Dirichlet: F(k) = B(k) exp(S[log|F|](k)),
    B the Blaschke product with zeros i*kappa.
    """
    mod = np.asarray(modulus, dtype=float)
    t = grid.points
    if mod.shape != t.shape or np.any(~np.isfinite(mod)) or np.any(mod <= 0):
        raise InvalidModulus("modulus must be positive and finite on the grid")
    if bc_kind == DIRICHLET:
        u = np.log(mod)
        ct = CauchyTransform(grid, u, EVEN, "real")

        def ev(k):
            return blaschke(k, zeros) * ct.exp_factor(k, 1.0)

        parity = CONJUGATE
    else:
        u = np.log(t / mod)
        ct = CauchyTransform(grid, u, EVEN, "real")
        if abs(u[-1]) > 0.1:
            raise InvalidModulus("log|t/F(t)| does not decay; modulus is not Robin-like")

        def ev(k):
            k = np.asarray(k, dtype=complex)
            w = ct.weight
            if w == 1.0:
                # k * (k/(k+i))**-1 = k + i, finite at the origin
                pref = (k + 1j) * np.exp(-ct.regular(k))
            else:
                pref = k * ct.exp_factor(k, -1.0)
            return pref * blaschke(k, zeros)

        parity = ANTI_CONJUGATE
    f = HalfPlaneFunction(ev, "numeric", parity, name=f"outer[{bc_kind}]")
    f.transform = ct
    if eval_point is None:
        return f
    return f(eval_point)


def log_schwarz_reconstruct(grid: KGrid, im_log_samples, variant: str = "plain", eval_point=None):
    """exp of the analytic function whose imaginary part on R is ``im_log_samples``.

    ``variant="plain"``: samples are Im log Z0(t), returns Z0.
    ``variant="ik"``: samples are Im log(Z0(t)/(it)), returns ik * exp(...).
    """
    v = np.asarray(im_log_samples, dtype=float)
    if abs(v[-1]) * grid.k_max > 1e3 * max(1.0, np.max(np.abs(v))):
        raise InvalidData("Im log samples do not decay like 1/k")
    ct = CauchyTransform(grid, v, ODD, "imag")
    if variant == "plain":
        def ev(k):
            return np.exp(ct(k))
    elif variant == "ik":
        def ev(k):
            return 1j * k * np.exp(ct(k))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    f = HalfPlaneFunction(ev, "numeric", None, name=f"log-schwarz[{variant}]")
    f.transform = ct
    if eval_point is None:
        return f
    return f(eval_point)


def winding_number(func, zeros_box: tuple[float, float, float, float], n: int = 4000) -> int:
    """Argument-principle zero count of func inside a rectangle [x0,x1] x [y0,y1] in C+."""
    x0, x1, y0, y1 = zeros_box
    s = np.linspace(0, 1, n, endpoint=False)
    path = np.concatenate([
        x0 + (x1 - x0) * s + 1j * y0,
        x1 + 1j * (y0 + (y1 - y0) * s),
        x1 - (x1 - x0) * s + 1j * y1,
        x0 + 1j * (y1 - (y1 - y0) * s),
    ])
    vals = func(path)
    ang = np.unwrap(np.angle(np.append(vals, vals[0])))
    return int(round((ang[-1] - ang[0]) / (2 * math.pi)))
