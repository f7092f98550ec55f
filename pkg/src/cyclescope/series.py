"""Monthly series container and finite two-sided linear filters.

Filters follow the backshift convention ``B^j X_t = X_{t-j}``: a filter is a
map from integer lag ``j`` to weight ``a_j`` and acts as
``Y_t = sum_j a_j X_{t-j}``. Its transfer function at frequency ``psi`` is
``sum_j a_j exp(-i psi j)``.

Filtering never pads: output position 1 corresponds to input position
``q + 1`` where ``q`` is the largest lag, and ``p + q`` samples are lost
(``p`` being minus the smallest lag).
"""

from __future__ import annotations

import csv
import io
import os
import re
from dataclasses import dataclass
from math import comb
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "InputError",
    "MonthlySeries",
    "LinearFilterSpec",
    "ma_2x12",
    "difference_filter",
    "compose",
    "apply_filter",
    "transfer",
    "read_csv",
    "write_csv",
    "format_month",
    "parse_month",
]

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


class InputError(ValueError):
    """Raised for malformed or insufficient input series."""


def parse_month(text: str) -> tuple[int, int]:
    m = _MONTH_RE.match(text.strip())
    if m is None:
        raise InputError(f"bad date {text!r}, expected YYYY-MM")
    year, month = int(m.group(1)), int(m.group(2))
    if not 1 <= month <= 12:
        raise InputError(f"bad month in {text!r}")
    return year, month


def format_month(ym: tuple[int, int]) -> str:
    return f"{ym[0]:04d}-{ym[1]:02d}"


def add_months(ym: tuple[int, int], k: int) -> tuple[int, int]:
    total = ym[0] * 12 + (ym[1] - 1) + k
    return total // 12, total % 12 + 1


@dataclass(frozen=True, eq=False)
class MonthlySeries:
    """Contiguous monthly observations.

    Parameters
    ----------
    start : (year, month)
        Calendar month of the first observation (index ``t = 1``).
    values : array_like
        Finite observations; stored as a read-only float array.
    label : str
        Free text.
    """

    start: tuple[int, int]
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).ravel()
        if vals.size < 1:
            raise InputError("series must contain at least one value")
        if not np.all(np.isfinite(vals)):
            bad = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise InputError(f"non-finite value at position {bad + 1}")
        if not 1 <= self.start[1] <= 12:
            raise InputError(f"bad start month {self.start}")
        vals.setflags(write=False)
        object.__setattr__(self, "start", (int(self.start[0]), int(self.start[1])))
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    def month(self, t: int) -> tuple[int, int]:
        """Calendar month of 1-based index ``t``."""
        return add_months(self.start, t - 1)

    def dates(self) -> list[str]:
        return [format_month(self.month(t)) for t in range(1, len(self) + 1)]

    def with_values(self, values, shift: int = 0, label: str | None = None) -> "MonthlySeries":
        return MonthlySeries(
            add_months(self.start, shift), values, self.label if label is None else label
        )


@dataclass(frozen=True, eq=False)
class LinearFilterSpec:
    """Finite filter ``L(B) = sum_{j=lo}^{hi} a_j B^j``.

    ``weights[k]`` is the coefficient of lag ``lo + k``.
    """

    lo: int
    weights: np.ndarray
    name: str = ""

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).ravel()
        if w.size == 0 or not np.any(w != 0):
            raise ValueError("filter needs at least one nonzero coefficient")
        if self.lo > 0 or self.lo + w.size - 1 < 0:
            raise ValueError("filter lags must span lag 0 (p, q >= 0)")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_mapping(cls, coefficients: Mapping[int, float], name: str = "") -> "LinearFilterSpec":
        lags = sorted(coefficients)
        lo, hi = min(lags[0], 0), max(lags[-1], 0)
        w = np.zeros(hi - lo + 1)
        for j, a in coefficients.items():
            w[j - lo] = a
        return cls(lo, w, name)

    @property
    def hi(self) -> int:
        return self.lo + self.weights.size - 1

    @property
    def lead(self) -> int:
        """Number of leads ``p`` (samples lost at the tail)."""
        return -self.lo

    @property
    def lag(self) -> int:
        """Number of lags ``q`` (samples lost at the head)."""
        return self.hi

    @property
    def lags(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @property
    def coefficients(self) -> dict[int, float]:
        return {int(j): float(a) for j, a in zip(self.lags, self.weights)}

    def transfer(self, psi):
        return transfer(self, psi)


def ma_2x12() -> LinearFilterSpec:
    """Centered 2x12 moving average, weights (1, 2, ..., 2, 1)/24 on lags -6..6."""
    w = np.full(13, 2.0)
    w[0] = w[-1] = 1.0
    return LinearFilterSpec(-6, w / 24.0, "2x12 MA")


def difference_filter(p: int) -> LinearFilterSpec:
    """``(1 - B)^p`` as signed binomial weights on lags 0..p."""
    if int(p) != p or p < 1:
        raise ValueError(f"difference order must be a positive integer, got {p!r}")
    p = int(p)
    w = np.array([(-1) ** j * comb(p, j) for j in range(p + 1)], dtype=float)
    return LinearFilterSpec(0, w, f"(1-B)^{p}")


def compose(*filters: LinearFilterSpec) -> LinearFilterSpec:
    """Product of filters, i.e. convolution of their coefficient sequences."""
    if not filters:
        raise ValueError("nothing to compose")
    lo, w = filters[0].lo, filters[0].weights
    for f in filters[1:]:
        lo += f.lo
        w = np.convolve(w, f.weights)
    return LinearFilterSpec(lo, w, " * ".join(f.name for f in filters))


def transfer(filt: LinearFilterSpec, psi):
    """Transfer function ``sum_j a_j exp(-i psi j)`` by direct summation.

    ``psi`` may be a scalar (returns ``complex``) or an array.
    """
    psi_arr = np.asarray(psi, dtype=float)
    lags = filt.lags
    vals = np.exp(-1j * np.multiply.outer(psi_arr, lags)) @ filt.weights
    if psi_arr.ndim == 0:
        return complex(vals)
    return vals


def apply_filter(series: MonthlySeries, filt: LinearFilterSpec) -> MonthlySeries:
    """Apply ``filt`` without padding.

    Output position ``k`` holds ``sum_j a_j x[k + q - j]`` (1-based) and the
    start month advances by ``q``.
    """
    x = series.values
    n = x.size
    p, q = filt.lead, filt.lag
    if n <= p + q:
        raise InputError(
            f"series of length {n} too short for filter {filt.name!r}: need at least {p + q + 1}"
        )
    m = n - p - q
    out = np.zeros(m)
    for j, a in zip(filt.lags, filt.weights):
        if a != 0:
            out += a * x[q - j: q - j + m]
    return series.with_values(out, shift=q)


def read_csv(source, label: str | None = None) -> MonthlySeries:
    """Read a ``date,value`` CSV with ``YYYY-MM`` dates in consecutive months.

    ``source`` is a path or an open text stream.
    """
    if hasattr(source, "read"):
        text = source.read()
        name = label or getattr(source, "name", "")
    else:
        with open(source, newline="") as fh:
            text = fh.read()
        name = label or os.path.basename(str(source))
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise InputError("empty CSV")
    header = [c.strip().lower() for c in rows[0]]
    if header != ["date", "value"]:
        raise InputError(f"line 1: expected header 'date,value', got {','.join(rows[0])!r}")
    if len(rows) < 2:
        raise InputError("CSV has a header but no data rows")
    start = None
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise InputError(f"line {lineno}: expected 2 columns, got {len(row)}")
        try:
            ym = parse_month(row[0])
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        try:
            v = float(row[1])
        except ValueError:
            raise InputError(f"line {lineno}: value {row[1]!r} is not a number") from None
        if not np.isfinite(v):
            raise InputError(f"line {lineno}: value {row[1]!r} is not finite")
        if start is None:
            start = ym
        else:
            expected = add_months(start, len(values))
            if ym != expected:
                raise InputError(
                    f"line {lineno}: months not consecutive, missing {format_month(expected)}"
                    f" (found {format_month(ym)})"
                )
        values.append(v)
    return MonthlySeries(start, np.asarray(values), name)


def write_csv(series: MonthlySeries, target=None) -> str:
    """Serialize to ``date,value`` CSV; returns the text and writes it if ``target`` given."""
    buf = io.StringIO()
    buf.write("date,value\n")
    for d, v in zip(series.dates(), series.values):
        buf.write(f"{d},{float(v)!r}\n")
    text = buf.getvalue()
    if target is not None:
        with open(target, "w", newline="") as fh:
            fh.write(text)
    return text


def as_values(values: Sequence[float] | np.ndarray | MonthlySeries) -> np.ndarray:
    if isinstance(values, MonthlySeries):
        return values.values
    return np.asarray(values, dtype=float).ravel()
