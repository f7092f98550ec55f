"""Three-step cycle identification: deseasonalise, detrend, scan and refine.

1. ``Y = L_2x12(B) P`` removes the monthly seasonal frequencies exactly.
2. ``X = (1 - B)^p Y`` removes a degree-``p`` polynomial trend.
3. ``X`` is scanned over the business-cycle band; maximal runs of rejected
   grid points become intervals, each refined to one frequency whose
   coefficient is mapped back to ``P`` through the composite transfer
   function.

The cycle itself is extracted from ``Y`` with HP filters, and turning points
are dated on the cycle of the smallest smoothing parameter.
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, field
from math import pi

import numpy as np

from . import __version__
from .hp import DEFAULT_LAMBDAS, HPDecomposition, cutoff_from_lambda, hp_decompose
from .series import (
    InputError,
    MonthlySeries,
    apply_filter,
    compose,
    difference_filter,
    format_month,
    ma_2x12,
)
from .spectral import (
    BAND_HI,
    CycleEstimate,
    FrequencyGrid,
    backout_coefficient,
    refine_frequency,
)
from .subsampling import SignificanceScan, default_block_length, scan

__all__ = [
    "PipelineConfig",
    "PipelineReport",
    "run",
    "detect_intervals",
    "turning_points",
    "phases",
    "TREND_BAND_YEARS",
]

TREND_BAND_YEARS = 8.0


@dataclass(frozen=True)
class PipelineConfig:
    log_transform: bool = True
    p: int = 1
    gammas: tuple[float, ...] = (0.92, 0.95, 0.99)
    scan_gamma: float = 0.99
    grid_step: float = pi / 720
    band_hi: float = BAND_HI
    b_override: int | None = None
    lambdas: tuple[float, ...] = DEFAULT_LAMBDAS
    min_phase_months: int = 9
    statistic: str = "demeaned"

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(sorted(float(g) for g in self.gammas)))
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if not self.gammas or any(not 0 < g < 1 for g in self.gammas):
            raise ValueError(f"confidence levels must lie in (0, 1): {self.gammas}")
        if not any(abs(g - self.scan_gamma) < 1e-12 for g in self.gammas):
            raise ValueError(f"scan_gamma {self.scan_gamma} must be one of {self.gammas}")
        if int(self.p) != self.p or not 0 <= self.p <= 3:
            raise ValueError(f"trend order p must be an integer in 0..3, got {self.p}")
        if self.min_phase_months < 1:
            raise ValueError("min_phase_months must be >= 1")
        if any(v < 0 for v in self.lambdas):
            raise ValueError("lambdas must be nonnegative")
        if self.statistic not in ("demeaned", "raw"):
            raise ValueError(f"unknown statistic {self.statistic!r}")

    @property
    def grid(self) -> FrequencyGrid:
        return FrequencyGrid(self.grid_step, self.band_hi)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gammas"] = list(self.gammas)
        d["lambdas"] = list(self.lambdas)
        return d


@dataclass(frozen=True, eq=False)
class PipelineReport:
    config: PipelineConfig
    stages: dict[str, MonthlySeries]
    composite: object
    scan: SignificanceScan
    intervals: list[tuple[float, float]]
    cycles: list[CycleEstimate]
    hp: dict[float, HPDecomposition]
    turning_points: list[dict]
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return report_to_dict(self)


def detect_intervals(sc: SignificanceScan, gamma: float) -> list[tuple[float, float]]:
    """Maximal runs of flagged grid points, padded by half a step and clipped to the band."""
    flags = sc.flags[:, sc.column(gamma)]
    pts = sc.grid.points
    half = sc.grid.step / 2
    out = []
    i, n = 0, flags.size
    while i < n:
        if not flags[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and flags[j + 1]:
            j += 1
        lo = max(pts[i] - half, sc.grid.lo)
        hi = min(pts[j] + half, sc.grid.hi)
        out.append((float(lo), float(hi)))
        i = j + 1
    return out


def turning_points(cycle, min_phase_months: int = 9) -> list[dict]:
    """Alternating peaks and troughs of ``cycle``.

    Interior local extrema are visited in time order. An extremum of the same
    type as the last retained one replaces it when more extreme; one of the
    opposite type is retained only if it lies at least ``min_phase_months``
    after the last retained point. Indices are 1-based.
    """
    c = np.asarray(cycle, dtype=float)
    if c.size == 0:
        raise ValueError("empty cycle")
    kept: list[dict] = []
    for i in range(1, c.size - 1):
        if c[i] > c[i - 1] and c[i] >= c[i + 1]:
            kind = "peak"
        elif c[i] < c[i - 1] and c[i] <= c[i + 1]:
            kind = "trough"
        else:
            continue
        pt = {"index": i + 1, "type": kind, "value": float(c[i])}
        if not kept:
            kept.append(pt)
            continue
        last = kept[-1]
        if kind == last["type"]:
            more = c[i] > last["value"] if kind == "peak" else c[i] < last["value"]
            if more:
                kept[-1] = pt
        elif pt["index"] - last["index"] >= min_phase_months:
            kept.append(pt)
    return kept


def phases(points: list[dict]) -> list[dict]:
    """Expansions (trough to peak) and recessions (peak to trough) between turning points."""
    out = []
    for a, b in zip(points, points[1:]):
        kind = "expansion" if a["type"] == "trough" else "recession"
        out.append({"type": kind, "start": a.get("date", a["index"]),
                    "end": b.get("date", b["index"]), "months": b["index"] - a["index"]})
    return out


def _digest(series: MonthlySeries) -> str:
    h = hashlib.sha256()
    h.update(format_month(series.start).encode())
    h.update(np.ascontiguousarray(series.values, dtype="<f8").tobytes())
    return h.hexdigest()


def run(series: MonthlySeries, config: PipelineConfig | None = None) -> PipelineReport:
    """Run the full identification and extraction procedure on a monthly series."""
    config = config or PipelineConfig()
    n = len(series)
    ma = ma_2x12()
    filters = [ma] + ([difference_filter(config.p)] if config.p > 0 else [])
    composite = compose(*filters)
    need = max(49, composite.lead + composite.lag + 16)
    if n < need:
        raise InputError(f"series has {n} observations; need at least {need}")

    if config.log_transform:
        if np.any(series.values <= 0):
            bad = int(np.flatnonzero(series.values <= 0)[0]) + 1
            raise InputError(
                f"log transform needs positive values; value at {format_month(series.month(bad))}"
                f" is {series.values[bad - 1]!r}"
            )
        P = series.with_values(np.log(series.values))
    else:
        P = series
    Y = apply_filter(P, ma)
    X = apply_filter(Y, filters[1]) if config.p > 0 else Y
    offset = composite.lag

    grid = config.grid
    b = config.b_override if config.b_override is not None else default_block_length(len(X))
    sc = scan(X.values, grid, b, config.gammas)
    intervals = detect_intervals(sc, config.scan_gamma)

    cycles = []
    for iv in intervals:
        psi, coeff = refine_frequency(X.values, iv, statistic=config.statistic)
        orig = backout_coefficient(coeff, psi, composite, offset=offset)
        cycles.append(CycleEstimate(psi, coeff, orig, iv))
    cycles.sort(key=lambda c: c.psi)

    hp = {lam: hp_decompose(Y.values, lam) for lam in config.lambdas}
    tps: list[dict] = []
    if hp:
        lam0 = min(hp)
        tps = turning_points(hp[lam0].cycle, config.min_phase_months)
        for tp in tps:
            tp["date"] = format_month(Y.month(tp["index"]))

    provenance = {
        "tool": "cyclescope",
        "version": __version__,
        "label": series.label,
        "input_start": format_month(series.start),
        "input_length": n,
        "input_sha256": _digest(series),
        "config": config.to_dict(),
        "block_length": b,
        "composite_filter": composite.name,
    }
    return PipelineReport(config, {"P": P, "Y": Y, "X": X}, composite, sc, intervals, cycles,
                          hp, tps, provenance)


def _coeff(z: complex) -> dict:
    return {"re": z.real, "im": z.imag, "modulus": abs(z), "argument": float(np.angle(z))}


def _stage(s: MonthlySeries) -> dict:
    return {"start": format_month(s.start), "length": len(s), "values": [float(v) for v in s.values]}


def report_to_dict(rep: PipelineReport) -> dict:
    cycles = []
    for c in rep.cycles:
        cycles.append({
            "psi": c.psi,
            "period_months": c.period_months,
            "period_years": c.period_years,
            "coeff_filtered": _coeff(c.coeff_filtered),
            "coeff_original": _coeff(c.coeff_original),
            "amplitude": c.amplitude,
            "interval": list(c.interval),
            "band": "trend-band" if c.period_years > TREND_BAND_YEARS else "business",
        })
    hp = []
    for lam, dec in rep.hp.items():
        entry = {"lambda": lam, "cutoff_months": None}
        if lam > 1 / 16:
            entry["cutoff_months"] = 2 * pi / cutoff_from_lambda(lam)
        hp.append(entry)
    return {
        "stages": {k: _stage(v) for k, v in rep.stages.items()},
        "scan": {
            "b": rep.scan.b,
            "gammas": list(rep.scan.gammas),
            "grid_step": rep.scan.grid.step,
            "points": rep.scan.to_records(),
        },
        "intervals": [list(iv) for iv in rep.intervals],
        "cycles": cycles,
        "hp": hp,
        "turning_points": rep.turning_points,
        "phases": phases(rep.turning_points),
        "provenance": rep.provenance,
    }
