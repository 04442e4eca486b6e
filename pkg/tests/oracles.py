"""Independent reference computations used by the tests.

Nothing here touches the package's numerics: eigenvalue counts come from a
finite-difference matrix and the random wells are plain closed forms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal


def fd_bound_states(V, cot_alpha: float | None, length: float = 25.0, n: int = 5000) -> np.ndarray:
    """Negative eigenvalues of -u'' + V u on [0, length], u(length) = 0.

    ``cot_alpha`` None gives u(0) = 0; otherwise u'(0) + cot_alpha u(0) = 0
    through a ghost node, with the first row symmetrized by a diagonal
    similarity.  Returns the kappas sqrt(-lambda), descending.
    """
    h = length / n
    if cot_alpha is None:
        x = h * np.arange(1, n)
        diag = 2.0 / h**2 + V(x)
        off = -np.ones(n - 2) / h**2
    else:
        x = h * np.arange(0, n)
        diag = 2.0 / h**2 + V(x)
        diag[0] -= 2.0 * cot_alpha / h
        off = -np.ones(n - 1) / h**2
        off[0] = -np.sqrt(2.0) / h**2
    lam = eigh_tridiagonal(diag, off, select="v", select_range=(-1e6, 0.0), eigvals_only=True)
    return np.sort(np.sqrt(-lam[lam < 0]))[::-1]


@dataclass(frozen=True)
class BumpWell:
    depth: float
    width: float
    center: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / (0.5 * self.width)
        inside = np.abs(u) < 1.0
        safe = np.where(inside, u, 0.0)
        return np.where(inside, -self.depth * np.exp(1.0 - 1.0 / (1.0 - safe * safe)), 0.0)

    @property
    def support(self):
        return max(0.0, self.center - 0.5 * self.width), self.center + 0.5 * self.width


def random_wells(n: int, seed: int):
    """Smooth compactly supported wells, depth <= 4 and width <= 3."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        out.append(BumpWell(depth=float(rng.uniform(0.5, 4.0)), width=float(rng.uniform(1.0, 3.0)),
                            center=float(rng.uniform(0.5, 2.0))))
    return out
