"""Subsampling distributions and the frequency-grid significance scan.

Every length-``b`` block ``X_t, ..., X_{t+b-1}`` (``t = 1..n-b+1``) yields a
windowed coefficient, demeaned with the full-path mean and indexed by
absolute time. The *uncentered* statistic is ``sqrt(b) |r_b,t|``; the
*centered* one subtracts ``sqrt(b) |r_n|`` from it.

Critical values take the confidence level ``gamma`` (e.g. 0.99) and return
the smallest order statistic whose empirical CDF reaches ``gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, floor, sqrt

import numpy as np

from .series import as_values
from .spectral import FrequencyGrid, path_mean, scan_statistic

__all__ = [
    "SubsampleDistribution",
    "SignificanceScan",
    "default_block_length",
    "window_coeffs",
    "subsample_distribution",
    "critical_value",
    "scan",
    "confidence_interval",
]

MODES = ("uncentered", "centered")


@dataclass(frozen=True, eq=False)
class SubsampleDistribution:
    stats: np.ndarray
    n: int
    b: int
    psi: float
    mode: str
    full: float  # |r_n(psi)| on the whole path

    @property
    def q(self) -> int:
        return self.stats.size

    def cdf(self, x):
        """Empirical CDF, right-continuous."""
        return np.searchsorted(self.stats, x, side="right") / self.q


def default_block_length(n: int) -> int:
    """``round(2.5 * sqrt(n))`` clamped to ``[4, n - 1]``."""
    if n < 16:
        raise ValueError(f"need n >= 16 for the default block length, got {n}")
    b = int(floor(2.5 * sqrt(n) + 0.5))
    return min(max(b, 4), n - 1)


def _check_b(n: int, b: int):
    if not (1 <= b < n):
        raise ValueError(f"block length b={b} must satisfy 1 <= b < n={n}")


def window_coeffs(values, b: int, psi) -> tuple[np.ndarray, np.ndarray]:
    """Windowed demeaned coefficients for every block start.

    Returns ``(blocks, full)`` where ``blocks[..., t-1]`` is ``r_n^{t-1,b}(psi)``
    and ``full`` is ``r_n(psi)``; leading axes follow ``psi``.
    """
    x = as_values(values)
    n = x.size
    _check_b(n, b)
    psi_arr = np.asarray(psi, dtype=float)
    j = np.arange(1, n + 1)
    z = (x - path_mean(x)) * np.exp(-1j * np.multiply.outer(psi_arr, j))
    cs = np.concatenate([np.zeros(psi_arr.shape + (1,), complex), np.cumsum(z, axis=-1)], axis=-1)
    blocks = (cs[..., b:] - cs[..., :n - b + 1]) / b
    full = cs[..., -1] / n
    return blocks, full


def subsample_distribution(values, b: int, psi: float, mode: str = "uncentered"
                           ) -> SubsampleDistribution:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    x = as_values(values)
    blocks, full = window_coeffs(x, b, float(psi))
    stats = sqrt(b) * np.abs(blocks)
    if mode == "centered":
        stats = stats - sqrt(b) * abs(full)
    stats = np.sort(stats)
    stats.setflags(write=False)
    return SubsampleDistribution(stats, x.size, b, float(psi), mode, float(abs(full)))


def _order_index(q: int, gamma: float) -> int:
    # 0-based index of the ceil(gamma*q)-th order statistic; the rounding
    # guards against products such as 0.95*200 = 190.00000000000003
    k = ceil(round(gamma * q, 9))
    return min(max(k, 1), q) - 1


def critical_value(dist: SubsampleDistribution | np.ndarray, gamma: float) -> float:
    """``inf{x : CDF(x) >= gamma}`` for confidence level ``gamma`` in (0, 1)."""
    if not 0 < gamma < 1:
        raise ValueError(f"confidence level must lie in (0, 1), got {gamma}")
    stats = dist.stats if isinstance(dist, SubsampleDistribution) else np.sort(dist)
    if stats.size == 0:
        raise ValueError("empty subsampling distribution")
    return float(stats[_order_index(stats.size, gamma)])


@dataclass(frozen=True, eq=False)
class SignificanceScan:
    """Per-frequency statistic, critical values and rejection flags.

    ``critical[i, k]`` and ``flags[i, k]`` refer to ``grid.points[i]`` and
    ``gammas[k]``.
    """

    grid: FrequencyGrid
    statistic: np.ndarray
    critical: np.ndarray
    flags: np.ndarray
    b: int
    gammas: tuple[float, ...]

    @property
    def psi(self) -> np.ndarray:
        return self.grid.points

    def column(self, gamma: float) -> int:
        for k, g in enumerate(self.gammas):
            if abs(g - gamma) < 1e-12:
                return k
        raise KeyError(f"confidence level {gamma} not in scan levels {self.gammas}")

    def to_records(self) -> list[dict]:
        out = []
        for i, psi in enumerate(self.psi):
            rec = {
                "psi": float(psi),
                "period_months": float(2 * np.pi / psi),
                "statistic": float(self.statistic[i]),
            }
            for k, g in enumerate(self.gammas):
                rec[f"critical_{g:g}"] = float(self.critical[i, k])
            for k, g in enumerate(self.gammas):
                rec[f"flag_{g:g}"] = bool(self.flags[i, k])
            out.append(rec)
        return out


def scan(values, grid: FrequencyGrid | None = None, b: int | None = None,
         gammas=(0.92, 0.95, 0.99)) -> SignificanceScan:
    """Test every grid frequency against its uncentered subsampling critical value.

    A grid point is flagged when the statistic strictly exceeds the critical
    value, so a flat (all-zero) configuration never rejects.
    """
    x = as_values(values)
    n = x.size
    grid = grid if grid is not None else FrequencyGrid()
    b = default_block_length(n) if b is None else int(b)
    gammas = tuple(sorted(float(g) for g in gammas))
    if not gammas:
        raise ValueError("need at least one confidence level")
    for g in gammas:
        if not 0 < g < 1:
            raise ValueError(f"confidence level must lie in (0, 1), got {g}")
    blocks, _ = window_coeffs(x, b, grid.points)
    statistic = scan_statistic(x, grid.points)
    stats = np.sort(sqrt(b) * np.abs(blocks), axis=-1)
    q = stats.shape[-1]
    critical = np.stack([stats[:, _order_index(q, g)] for g in gammas], axis=1)
    flags = statistic[:, None] > critical
    return SignificanceScan(grid, statistic, critical, flags, b, gammas)


def confidence_interval(values, b: int, psi: float, gamma: float) -> tuple[float, float]:
    """One-sided interval ``[max(0, |r_n| - c/sqrt(n)), inf)`` for ``|m(psi)|``.

    ``c`` is the ``gamma`` critical value of the centered distribution.
    """
    dist = subsample_distribution(values, b, psi, "centered")
    c = critical_value(dist, gamma)
    lo = max(0.0, dist.full - c / sqrt(dist.n))
    return lo, float("inf")
