"""Hodrick-Prescott decomposition and the smoothing-parameter/cutoff mapping."""

from __future__ import annotations

from dataclasses import dataclass
from math import acos, cos, pi, sqrt

import numpy as np
from scipy.linalg import solveh_banded

from .series import InputError, as_values

__all__ = [
    "DEFAULT_LAMBDAS",
    "HPDecomposition",
    "lambda_from_cutoff",
    "cutoff_from_lambda",
    "hp_decompose",
    "hp_banded_matrix",
]

DEFAULT_LAMBDAS = (5500.0, 12000.0, 32000.0, 55000.0)


@dataclass(frozen=True, eq=False)
class HPDecomposition:
    trend: np.ndarray
    cycle: np.ndarray
    lam: float


def lambda_from_cutoff(psi0: float) -> float:
    """Smoothing parameter ``1 / (4 (1 - cos psi0)^2)`` for cutoff ``psi0`` in (0, pi)."""
    if not 0 < psi0 < pi:
        raise ValueError(f"cutoff frequency must lie in (0, pi), got {psi0}")
    return 1.0 / (4.0 * (1.0 - cos(psi0)) ** 2)


def cutoff_from_lambda(lam: float) -> float:
    """Inverse of :func:`lambda_from_cutoff`; requires ``lam > 1/16``."""
    if not lam > 1.0 / 16.0:
        raise ValueError(f"no cutoff in (0, pi) for lambda={lam}; need lambda > 1/16")
    return acos(1.0 - 1.0 / (2.0 * sqrt(lam)))


def hp_banded_matrix(n: int, lam: float) -> np.ndarray:
    """Upper banded storage (3, n-2) of ``I + lam * D D'`` for :func:`scipy.linalg.solveh_banded`.

    ``D`` is the (n-2) x n second-difference matrix, so ``D D'`` has the
    constant bands 6, -4, 1.
    """
    m = n - 2
    ab = np.zeros((3, m))
    ab[2] = 1.0 + 6.0 * lam
    ab[1, 1:] = -4.0 * lam
    ab[0, 2:] = lam
    return ab


def hp_decompose(series, lam: float) -> HPDecomposition:
    """Split ``series`` into HP trend and cycle (``cycle = x - trend``).

    The trend minimises ``|x - t|^2 + lam |D t|^2``. Rather than the normal
    equations ``(I + lam D'D) t = x`` we solve the dual banded system
    ``(I + lam D D') w = D x`` and set ``cycle = lam D' w``. Both matrices are
    conditioned like ``lam``, but the dual route only ever sees the second
    differences of ``x``: a linear input gives an exactly zero cycle and the
    rounding error stays well below that of the primal solve.
    """
    x = as_values(series)
    lam = float(lam)
    if lam < 0 or not np.isfinite(lam):
        raise ValueError(f"lambda must be a finite nonnegative number, got {lam}")
    if lam == 0:
        return HPDecomposition(x.copy(), np.zeros_like(x), lam)
    if x.size < 4:
        raise InputError(f"HP filter needs at least 4 observations, got {x.size}")
    w = solveh_banded(hp_banded_matrix(x.size, lam), x[2:] - 2 * x[1:-1] + x[:-2])
    cycle = np.zeros_like(x)
    cycle[:-2] += w
    cycle[1:-1] -= 2 * w
    cycle[2:] += w
    cycle *= lam
    return HPDecomposition(x - cycle, cycle, lam)
