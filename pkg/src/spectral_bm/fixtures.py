"""Closed-form reference models with known Jost functions.

Two exactly solvable half-line models are provided. ``well_a`` is the
one-parameter reflectionless-type well V = -288 e^{4x}/(9+e^{4x})^2 with a
Robin pair; ``well_b`` is a five-exponential potential with a Dirichlet /
Robin pair. Both are used as golden fixtures by the tests and by the
``validate`` command.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import BoundaryParam, EigenSet


def well_a_potential(x):
    x = np.asarray(x, dtype=float)
    e = np.exp(-4.0 * x)
    # -288 e^{4x}/(9+e^{4x})^2 written in decaying exponentials
    return -288.0 * e / (9.0 * e + 1.0) ** 2


def well_a_jost_solution(k, x):
    x = np.asarray(x, dtype=float)
    return np.exp(1j * k * x) * (1.0 - 36j / ((k + 2j) * (9.0 + np.exp(4.0 * x))))


def well_b_potential(x):
    x = np.asarray(x, dtype=float)
    e = np.exp(-2.0 * x)
    num = 24 * e - 480 * e**2 + 720 * e**3 - 480 * e**4 + 600 * e**5
    den = (1 - 3 * e + 15 * e**2 - 5 * e**3) ** 2
    return num / den


def well_b_jost_solution(k, x):
    x = np.asarray(x, dtype=float)
    e = np.exp(-2.0 * x)
    den = 1 - 3 * e + 15 * e**2 - 5 * e**3
    corr = (6j * (e - 5 * e**3) / (k + 1j) + 60j * (-e**2 + e**3) / (k + 2j)) / den
    return np.exp(1j * k * x) * (1.0 + corr)


@dataclass(frozen=True)
class ClosedFormModel:
    name: str
    potential: Callable
    jost_solution: Callable
    alpha: BoundaryParam
    beta: BoundaryParam
    F_alpha: Callable
    F_beta: Callable
    eig_alpha: EigenSet
    eig_beta: EigenSet
    g_alpha: tuple
    m_alpha: tuple


WELL_A = ClosedFormModel(
    name="well_a",
    potential=well_a_potential,
    jost_solution=well_a_jost_solution,
    alpha=BoundaryParam.robin(-8.0 / 5.0),
    beta=BoundaryParam.robin(17.0 / 5.0),
    F_alpha=lambda k: k - 2j,
    F_beta=lambda k: (k - 1j) * (k - 4j) / (k + 2j),
    eig_alpha=EigenSet([2.0]),
    eig_beta=EigenSet([1.0, 4.0]),
    g_alpha=(math.sqrt(2.0 / 5.0),),
    m_alpha=(math.sqrt(40.0),),
)

WELL_B = ClosedFormModel(
    name="well_b",
    potential=well_b_potential,
    jost_solution=well_b_jost_solution,
    alpha=BoundaryParam.dirichlet(),
    beta=BoundaryParam.robin(3.0),
    F_alpha=lambda k: (k - 2j) / (k + 1j),
    F_beta=lambda k: (k - 1j) * (k - 3j) / (k + 2j),
    eig_alpha=EigenSet([2.0]),
    eig_beta=EigenSet([1.0, 3.0]),
    g_alpha=(math.sqrt(3.0),),
    m_alpha=(4.0 * math.sqrt(3.0),),
)

MODELS = {m.name: m for m in (WELL_A, WELL_B)}
