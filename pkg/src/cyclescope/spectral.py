"""Fourier coefficients of the mean function at arbitrary frequencies.

All estimators are direct sums over absolute 1-based time indices; nothing
here goes through an FFT, so off-grid frequencies are evaluated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import pi, sqrt

import numpy as np

from .series import LinearFilterSpec, as_values, transfer

__all__ = [
    "BAND_HI",
    "FrequencyGrid",
    "CycleEstimate",
    "fourier_coeff",
    "demeaned_coeff",
    "scan_statistic",
    "refine_frequency",
    "period_of",
    "backout_coefficient",
    "amplitude_of",
]

#: Upper edge of the business-cycle band in radians/month (cycles > ~17.95 months).
BAND_HI = 0.35

_INV_PHI = (sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Equally spaced frequencies ``k * step`` strictly inside ``(lo, hi)``."""

    step: float = pi / 720
    hi: float = BAND_HI
    lo: float = 0.0
    points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not (self.step > 0 and 0 <= self.lo < self.hi):
            raise ValueError(f"invalid grid: step={self.step}, lo={self.lo}, hi={self.hi}")
        if self.hi > 2 * pi:
            raise ValueError("grid must lie in (0, 2*pi)")
        k0 = int(np.floor(self.lo / self.step)) + 1
        k1 = int(np.ceil(self.hi / self.step))
        k = np.arange(k0, k1 + 1)
        pts = k * self.step
        pts = pts[(pts > self.lo) & (pts < self.hi)]
        if pts.size == 0:
            raise ValueError("grid is empty")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.size


@dataclass(frozen=True)
class CycleEstimate:
    """A refined cycle frequency with its coefficients on both filtering stages.

    ``coeff_filtered`` is estimated on the filtered series; ``coeff_original``
    is that value divided by the composite transfer function, i.e. the
    coefficient of the unfiltered series.
    """

    psi: float
    coeff_filtered: complex
    coeff_original: complex
    interval: tuple[float, float]

    @property
    def period_months(self) -> float:
        return 2 * pi / self.psi

    @property
    def period_years(self) -> float:
        return self.period_months / 12.0

    @property
    def amplitude(self) -> float:
        return amplitude_of(self.coeff_original)


def _check_window(n: int, c: int, d: int):
    if c < 0 or d < 1 or c + d > n:
        raise ValueError(f"window c={c}, d={d} exceeds series of length {n}")


def fourier_coeff(values, c: int, d: int, psi):
    """``(1/d) sum_{j=c+1}^{c+d} X_j exp(-i psi j)`` with absolute index ``j``.

    ``psi`` may be scalar or array-like.
    """
    x = as_values(values)
    _check_window(x.size, c, d)
    return _window_sum(x[c:c + d], c, psi)


def demeaned_coeff(values, c: int, d: int, psi):
    """As :func:`fourier_coeff` after subtracting the mean of the *whole* path.

    The subtraction uses the full-sample mean even when ``(c, d)`` selects a
    sub-window, so the window estimates share a common centring.
    """
    x = as_values(values)
    _check_window(x.size, c, d)
    return _window_sum(x[c:c + d] - path_mean(x), c, psi)


def path_mean(x: np.ndarray) -> float:
    """Sample mean, exact for constant paths so that demeaning gives exact zeros."""
    if np.all(x == x[0]):
        return float(x[0])
    return float(x.mean())


def _window_sum(seg: np.ndarray, c: int, psi):
    psi_arr = np.asarray(psi, dtype=float)
    j = np.arange(c + 1, c + seg.size + 1)
    vals = np.exp(-1j * np.multiply.outer(psi_arr, j)) @ seg / seg.size
    if psi_arr.ndim == 0:
        return complex(vals)
    return vals


def scan_statistic(values, psi):
    """Test statistic ``sqrt(n) * |r_n(psi)|`` on the demeaned path."""
    x = as_values(values)
    if x.size < 2:
        raise ValueError("need at least two observations")
    return np.sqrt(x.size) * np.abs(demeaned_coeff(x, 0, x.size, psi))


def refine_frequency(values, interval, statistic: str = "demeaned", n_sub: int = 1000,
                     tol: float = 1e-8):
    """Locate the maximiser of ``|coeff(x)|`` over ``interval``.

    A dense search on ``n_sub + 1`` equally spaced points picks the best grid
    point (first one on ties, i.e. the smallest frequency); a golden-section
    search on the neighbouring cells then polishes it to ``tol``. The polished
    point only replaces the grid point if it is strictly better.

    Parameters
    ----------
    values : array_like
        Filtered series.
    interval : (lo, hi)
        Search band, ``0 < lo < hi``.
    statistic : {"demeaned", "raw"}
        ``"demeaned"`` maximises the modulus of :func:`demeaned_coeff`,
        ``"raw"`` that of :func:`fourier_coeff`.

    Returns
    -------
    psi_hat : float
    coeff : complex
        :func:`demeaned_coeff` at ``psi_hat`` (or :func:`fourier_coeff` for
        ``statistic="raw"``).
    """
    lo, hi = (float(v) for v in interval)
    if not (0 < lo < hi):
        raise ValueError(f"invalid interval ({lo}, {hi})")
    if statistic not in ("demeaned", "raw"):
        raise ValueError(f"unknown statistic {statistic!r}")
    x = as_values(values)
    n = x.size
    coeff = demeaned_coeff if statistic == "demeaned" else fourier_coeff

    def objective(psi):
        return np.abs(coeff(x, 0, n, psi))

    grid = np.linspace(lo, hi, n_sub + 1)
    vals = objective(grid)
    k = int(np.argmax(vals))
    best_psi, best_val = float(grid[k]), float(vals[k])
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, n_sub)]
    cand = _golden_max(lambda s: float(objective(s)), a, b, tol)
    cand_val = float(objective(cand))
    if cand_val > best_val:
        best_psi = cand
    return float(best_psi), coeff(x, 0, n, best_psi)


def _golden_max(f, a: float, b: float, tol: float) -> float:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def period_of(psi: float) -> tuple[float, float]:
    """Cycle length ``2*pi/psi`` in months and in years."""
    if not psi > 0:
        raise ValueError(f"frequency must be positive, got {psi}")
    months = 2 * pi / psi
    return months, months / 12.0


def backout_coefficient(coeff_filtered: complex, psi: float, composite: LinearFilterSpec,
                        offset: int = 0) -> complex:
    """Undo a filter on a Fourier coefficient: ``coeff / L(exp(-i psi))``.

    ``offset`` is the number of months between index 1 of the unfiltered and
    index 1 of the filtered series (the filter's lag count when the filtered
    series was produced by :func:`~cyclescope.series.apply_filter`). A
    coefficient estimated in the filtered series' own time index carries the
    phase ``exp(i psi offset)``, which is removed first.
    """
    h = transfer(composite, psi)
    if abs(h) <= 1e-9:
        raise ValueError(f"transfer function is singular at psi={psi!r} (|L|={abs(h):.3g})")
    return complex(coeff_filtered) * complex(np.exp(-1j * psi * offset)) / h


def amplitude_of(coeff: complex) -> float:
    """Peak-to-trough range of ``2 Re[m exp(i psi t)]``, i.e. ``4|m|``."""
    return 4.0 * abs(coeff)
