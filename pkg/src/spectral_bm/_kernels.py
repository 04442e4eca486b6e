"""Hot numeric loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports cleanly and the environment
variable ``SPECTRAL_BM_DISABLE_NUMBA`` is unset (or ``0``).  Both paths
are always importable so the benchmark and the tests can compare them.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
    # workqueue ships with numba; avoids warnings from an outdated system TBB
    numba.config.THREADING_LAYER = os.environ.get("NUMBA_THREADING_LAYER", "workqueue")
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("SPECTRAL_BM_DISABLE_NUMBA", "0").lower() not in (
    "1",
    "true",
    "yes",
)

# 6-point Gauss-Legendre on [-1, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(6)

# exact interval formula is used within this many interval widths of k
NEAR_FACTOR = 4.0


_prange = numba.prange if HAVE_NUMBA else range


def _maybe_njit(func, parallel=False):
    if HAVE_NUMBA:
        return numba.njit(cache=True, parallel=parallel)(func)
    return func


# ---------------------------------------------------------------------------
# Jost solution: m'' = V m - 2ik m', m(x_max) = 1, m'(x_max) = 0, RK4 backward
# ---------------------------------------------------------------------------


def _jost_m_numpy(ks, v_nodes, v_mid, dx):
    ks = np.asarray(ks, dtype=np.complex128)
    m = np.ones_like(ks)
    p = np.zeros_like(ks)
    c = -2j * ks
    h = -dx
    for i in range(len(v_nodes) - 1, 0, -1):
        v0 = v_nodes[i]
        v1 = v_mid[i - 1]
        v2 = v_nodes[i - 1]
        k1m = p
        k1p = v0 * m + c * p
        mm = m + 0.5 * h * k1m
        pm = p + 0.5 * h * k1p
        k2m = pm
        k2p = v1 * mm + c * pm
        mm = m + 0.5 * h * k2m
        pm = p + 0.5 * h * k2p
        k3m = pm
        k3p = v1 * mm + c * pm
        mm = m + h * k3m
        pm = p + h * k3p
        k4m = pm
        k4p = v2 * mm + c * pm
        m = m + h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)
        p = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
    return m, p


def _jost_m_loop(ks, v_nodes, v_mid, dx):
    n = ks.shape[0]
    m_out = np.empty(n, dtype=np.complex128)
    p_out = np.empty(n, dtype=np.complex128)
    h = -dx
    for j in range(n):
        c = -2j * ks[j]
        m = 1.0 + 0j
        p = 0.0 + 0j
        for i in range(v_nodes.shape[0] - 1, 0, -1):
            v0 = v_nodes[i]
            v1 = v_mid[i - 1]
            v2 = v_nodes[i - 1]
            k1m = p
            k1p = v0 * m + c * p
            k2m = p + 0.5 * h * k1p
            k2p = v1 * (m + 0.5 * h * k1m) + c * k2m
            k3m = p + 0.5 * h * k2p
            k3p = v1 * (m + 0.5 * h * k2m) + c * k3m
            k4m = p + h * k3p
            k4p = v2 * (m + h * k3m) + c * k4m
            m = m + h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)
            p = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        m_out[j] = m
        p_out[j] = p
    return m_out, p_out


def _jost_profile_loop(k, v_nodes, v_mid, dx):
    n = v_nodes.shape[0]
    ms = np.empty(n, dtype=np.complex128)
    ps = np.empty(n, dtype=np.complex128)
    c = -2j * k
    h = -dx
    m = 1.0 + 0j
    p = 0.0 + 0j
    ms[n - 1] = m
    ps[n - 1] = p
    for i in range(n - 1, 0, -1):
        v0 = v_nodes[i]
        v1 = v_mid[i - 1]
        v2 = v_nodes[i - 1]
        k1m = p
        k1p = v0 * m + c * p
        k2m = p + 0.5 * h * k1p
        k2p = v1 * (m + 0.5 * h * k1m) + c * k2m
        k3m = p + 0.5 * h * k2p
        k3p = v1 * (m + 0.5 * h * k2m) + c * k3m
        k4m = p + h * k3p
        k4p = v2 * (m + h * k3m) + c * k4m
        m = m + h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)
        p = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        ms[i - 1] = m
        ps[i - 1] = p
    return ms, ps


_jost_m_numba = _maybe_njit(_jost_m_loop)
_jost_profile_numba = _maybe_njit(_jost_profile_loop)


def jost_m(ks, v_nodes, v_mid, dx):
    """Return m(k, 0) and m'(k, 0) for every k, where f = exp(ikx) m."""
    ks = np.atleast_1d(np.asarray(ks, dtype=np.complex128))
    v_nodes = np.ascontiguousarray(v_nodes, dtype=np.float64)
    v_mid = np.ascontiguousarray(v_mid, dtype=np.float64)
    if USE_NUMBA:
        return _jost_m_numba(ks, v_nodes, v_mid, float(dx))
    return _jost_m_numpy(ks, v_nodes, v_mid, float(dx))


def jost_profile(k, v_nodes, v_mid, dx):
    v_nodes = np.ascontiguousarray(v_nodes, dtype=np.float64)
    v_mid = np.ascontiguousarray(v_mid, dtype=np.float64)
    if USE_NUMBA:
        return _jost_profile_numba(complex(k), v_nodes, v_mid, float(dx))
    return _jost_profile_loop(complex(k), v_nodes, v_mid, float(dx))


# ---------------------------------------------------------------------------
# Cauchy sums: sum over cubic pieces of  int p(s) / (s - w) ds
# ---------------------------------------------------------------------------


def _cauchy_loop(starts, widths, coef, ks, gx, gw, near):
    nint = starts.shape[0]
    nk = ks.shape[0]
    out = np.zeros(nk, dtype=np.complex128)
    for j in _prange(nk):
        k = ks[j]
        acc = 0.0 + 0j
        for i in range(nint):
            h = widths[i]
            w = k - starts[i]
            c3 = coef[0, i]
            c2 = coef[1, i]
            c1 = coef[2, i]
            c0 = coef[3, i]
            if abs(w - 0.5 * h) > near * h:
                s_acc = 0.0 + 0j
                for q in range(gx.shape[0]):
                    s = 0.5 * h * (gx[q] + 1.0)
                    ps = ((c3 * s + c2) * s + c1) * s + c0
                    s_acc += gw[q] * ps / (s - w)
                acc += 0.5 * h * s_acc
            else:
                q2 = c3 + 0j
                q1 = c2 + w * q2
                q0 = c1 + w * q1
                r = c0 + w * q0
                poly = q0 * h + q1 * h * h / 2.0 + q2 * h * h * h / 3.0
                if w.imag > 0.0:
                    lg = np.log(h - w) - np.log(-w)
                else:
                    wr = w.real
                    lg = 0.0 + 0j
                    a = abs(h - wr)
                    b = abs(wr)
                    if a > 0.0:
                        lg += np.log(a)
                    if b > 0.0:
                        lg -= np.log(b)
                    if wr > 0.0 and wr <= h:
                        lg += 1j * np.pi
                acc += poly + r * lg
        out[j] = acc
    return out


def _cauchy_numpy(starts, widths, coef, ks, gx, gw, near):
    out = np.zeros(ks.shape[0], dtype=np.complex128)
    c3, c2, c1, c0 = coef
    s_nodes = 0.5 * widths[:, None] * (gx[None, :] + 1.0)
    p_nodes = ((c3[:, None] * s_nodes + c2[:, None]) * s_nodes + c1[:, None]) * s_nodes + c0[:, None]
    for j, k in enumerate(ks):
        w = k - starts
        far = np.abs(w - 0.5 * widths) > near * widths
        acc = 0.0 + 0j
        if far.any():
            wf = w[far]
            terms = gw[None, :] * p_nodes[far] / (s_nodes[far] - wf[:, None])
            acc += np.sum(0.5 * widths[far] * terms.sum(axis=1))
        nr = ~far
        if nr.any():
            h = widths[nr]
            wn = w[nr]
            q2 = c3[nr] + 0j
            q1 = c2[nr] + wn * q2
            q0 = c1[nr] + wn * q1
            r = c0[nr] + wn * q0
            poly = q0 * h + q1 * h**2 / 2.0 + q2 * h**3 / 3.0
            if k.imag > 0.0:
                lg = np.log(h - wn) - np.log(-wn)
            else:
                wr = wn.real
                a = np.abs(h - wr)
                b = np.abs(wr)
                lg = np.where(a > 0, np.log(np.where(a > 0, a, 1.0)), 0.0) - np.where(
                    b > 0, np.log(np.where(b > 0, b, 1.0)), 0.0
                )
                lg = lg + 1j * np.pi * ((wr > 0) & (wr <= h))
            acc += np.sum(poly + r * lg)
        out[j] = acc
    return out


_cauchy_numba = _maybe_njit(_cauchy_loop, parallel=True)


def cauchy_sum(starts, widths, coef, ks):
    """Sum over pieces of int_0^h p_i(s) / (s - (k - a_i)) ds, k in closed C+.

    ``coef`` holds cubic coefficients in scipy PPoly order (highest first),
    local variable s = t - a_i.  Real k is taken as the limit from above.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.complex128))
    starts = np.ascontiguousarray(starts, dtype=np.float64)
    widths = np.ascontiguousarray(widths, dtype=np.float64)
    coef = np.ascontiguousarray(coef, dtype=np.float64)
    if USE_NUMBA:
        return _cauchy_numba(starts, widths, coef, ks, _GL_X, _GL_W, NEAR_FACTOR)
    return _cauchy_numpy(starts, widths, coef, ks, _GL_X, _GL_W, NEAR_FACTOR)


# ---------------------------------------------------------------------------
# Filon quadrature of piecewise-linear data against cos(ks) and sin(ks)
# ---------------------------------------------------------------------------


def _filon_loop(knodes, w, svals):
    ns = svals.shape[0]
    nint = knodes.shape[0] - 1
    cos_out = np.zeros(ns)
    sin_out = np.zeros(ns)
    for j in range(ns):
        s = svals[j]
        ca = 0.0
        sa = 0.0
        for i in range(nint):
            h = knodes[i + 1] - knodes[i]
            d = 0.5 * h
            c = knodes[i] + d
            mval = 0.5 * (w[i] + w[i + 1])
            beta = (w[i + 1] - w[i]) / h
            th = s * d
            if abs(th) < 1e-2:
                t2 = th * th
                sinc = 1.0 - t2 / 6.0 + t2 * t2 / 120.0
                jj = th / 3.0 - th * t2 / 30.0
            else:
                sinc = np.sin(th) / th
                jj = (np.sin(th) - th * np.cos(th)) / (th * th)
            csc = np.cos(s * c)
            snc = np.sin(s * c)
            ca += mval * csc * 2.0 * d * sinc - beta * snc * 2.0 * d * d * jj
            sa += mval * snc * 2.0 * d * sinc + beta * csc * 2.0 * d * d * jj
        cos_out[j] = ca
        sin_out[j] = sa
    return cos_out, sin_out


def _filon_numpy(knodes, w, svals):
    h = np.diff(knodes)
    d = 0.5 * h
    c = knodes[:-1] + d
    mval = 0.5 * (w[:-1] + w[1:])
    beta = np.diff(w) / h
    cos_out = np.empty(svals.shape[0])
    sin_out = np.empty(svals.shape[0])
    for j, s in enumerate(svals):
        th = s * d
        small = np.abs(th) < 1e-2
        t2 = th * th
        safe = np.where(small, 1.0, th)
        sinc = np.where(small, 1.0 - t2 / 6.0 + t2 * t2 / 120.0, np.sin(safe) / safe)
        jj = np.where(small, th / 3.0 - th * t2 / 30.0, (np.sin(safe) - safe * np.cos(safe)) / safe**2)
        csc = np.cos(s * c)
        snc = np.sin(s * c)
        cos_out[j] = np.sum(mval * csc * 2 * d * sinc - beta * snc * 2 * d * d * jj)
        sin_out[j] = np.sum(mval * snc * 2 * d * sinc + beta * csc * 2 * d * d * jj)
    return cos_out, sin_out


_filon_numba = _maybe_njit(_filon_loop)


def filon(knodes, w, svals):
    """Integrals of the linear interpolant of w against cos(ks), sin(ks)."""
    knodes = np.ascontiguousarray(knodes, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    svals = np.ascontiguousarray(np.atleast_1d(svals), dtype=np.float64)
    if USE_NUMBA:
        return _filon_numba(knodes, w, svals)
    return _filon_numpy(knodes, w, svals)
