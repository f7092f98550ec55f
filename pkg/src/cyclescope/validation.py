"""Self-checks run by ``cyclescope validate``.

Each check returns a :class:`Check` carrying the measured value and the
tolerance it was held to.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt

import numpy as np

from .hp import DEFAULT_LAMBDAS, cutoff_from_lambda, hp_decompose
from .pipeline import PipelineConfig, run
from .series import MonthlySeries, apply_filter, ma_2x12, transfer
from .spectral import period_of, refine_frequency
from .subsampling import subsample_distribution
from .synth import (
    SyntheticSpec,
    dense_hp_trend,
    fixture_spec,
    generate,
    monte_carlo,
    oracle_subsample_cdf,
    oracle_subsample_stats,
)


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28} measured={self.measured:.6g}  tol={self.tolerance:.6g}  {self.detail}"

    def to_dict(self) -> dict:
        return {"name": self.name, "measured": self.measured, "tolerance": self.tolerance,
                "passed": self.passed, "detail": self.detail}


def check_lambda_table() -> list[Check]:
    out = []
    for lam, years in zip(DEFAULT_LAMBDAS, (4.5, 5.5, 7.0, 8.0)):
        got = 2 * pi / cutoff_from_lambda(lam) / 12
        rel = abs(got / years - 1)
        out.append(Check(f"lambda-table {lam:g}", got, 0.02, rel <= 0.02,
                         f"years (target {years:g}, rel err {rel:.4f})"))
    return out


def check_periods() -> list[Check]:
    out = []
    for psi, lo, hi in ((0.062, 8.4, 8.5), (0.153, 3.35, 3.45), (0.258, 1.95, 2.05)):
        years = period_of(psi)[1]
        out.append(Check(f"period {psi:g}", years, hi - lo, lo <= years <= hi,
                         f"years in [{lo:g}, {hi:g}]"))
    return out


def check_oracle(max_n: int = 12, seed: int = 7) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    cdf_worst = 0.0
    cases = 0
    for n in range(2, max_n + 1):
        x = rng.normal(size=n)
        for b in range(1, n):
            for psi in (pi / 6, pi / 4, pi / 2):
                for mode in ("uncentered", "centered"):
                    dist = subsample_distribution(x, b, psi, mode)
                    ref = np.sort(oracle_subsample_stats(x, b, psi, mode))
                    worst = max(worst, float(np.max(np.abs(dist.stats - ref))))
                    for s in dist.stats:
                        probe = s + 1e-12
                        d = abs(float(dist.cdf(probe)) - oracle_subsample_cdf(x, b, psi, mode, probe))
                        cdf_worst = max(cdf_worst, d)
                    cases += 1
    return [
        Check("oracle stats", worst, 1e-14, worst <= 1e-14, f"{cases} cases"),
        Check("oracle cdf", cdf_worst, 1e-14, cdf_worst <= 1e-14, f"{cases} cases"),
    ]


def check_seasonal() -> list[Check]:
    ma = ma_2x12()
    gains = [abs(transfer(ma, 2 * pi * k / 12)) for k in range(1, 12)]
    t = np.arange(1, 241)
    rng = np.random.default_rng(3)
    seas = sum(rng.normal() * np.cos(2 * pi * k * t / 12 + rng.uniform(0, 2 * pi))
               for k in range(1, 12))
    y = apply_filter(MonthlySeries((2000, 1), seas), ma).values
    resid = float(np.max(np.abs(y)))
    return [
        Check("seasonal transfer", max(gains), 1e-12, max(gains) < 1e-12),
        Check("seasonal filtering", resid, 1e-10, resid < 1e-10),
    ]


def check_hp(n: int = 200, seed: int = 5) -> list[Check]:
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n).cumsum()
    out = []
    for lam in (1600.0, 5500.0, 55000.0):
        err = float(np.max(np.abs(hp_decompose(x, lam).trend - dense_hp_trend(x, lam))))
        out.append(Check(f"hp banded vs dense {lam:g}", err, 1e-10, err < 1e-10))
    line = 2.0 + 0.5 * np.arange(n)
    c = float(np.max(np.abs(hp_decompose(line, 55000.0).cycle)))
    out.append(Check("hp linear input", c, 1e-10, c < 1e-10))
    return out


def check_montecarlo(replications: int = 200, n: int = 1800) -> list[Check]:
    out = []
    null = SyntheticSpec(sigma=1.0, seed=11)
    bound = 0.05 + 3 * sqrt(0.05 * 0.95 / replications)
    for r in monte_carlo(null, n, replications, 0.95, (0.062, 0.153, 0.2, 0.258)):
        out.append(Check(f"size psi={r.target:g}", r.rejection_rate, bound,
                         r.rejection_rate <= bound))
    m = 0.0175
    alt = SyntheticSpec(harmonics=((0.153, 0.0, 2 * m),), sigma=sqrt(n) * m / 8, seed=12)
    r = monte_carlo(alt, n, replications, 0.99, (0.153,))[0]
    out.append(Check("power psi=0.153", r.rejection_rate, 0.90, r.rejection_rate >= 0.90))
    m = 0.0125
    alt = SyntheticSpec(harmonics=((0.153, 2 * m, 0.0),), sigma=sqrt(n) * m / 8, seed=13)
    r = monte_carlo(alt, n, replications, 0.95, (0.153,))[0]
    out.append(Check("coverage gamma=0.95", r.coverage, 0.05, abs(r.coverage - 0.95) <= 0.05))
    return out


def check_consistency(replications: int = 100) -> list[Check]:
    m = 0.0175
    spec = SyntheticSpec(harmonics=((0.153, 0.0, 2 * m),), sigma=sqrt(1800) * m / 8, seed=21)
    med = {}
    for n in (600, 2400):
        errs = [abs(refine_frequency(generate(spec, n, seed=[spec.seed, n, r]).values,
                                     (0.10, 0.20))[0] - 0.153) for r in range(replications)]
        med[n] = float(np.median(errs))
    ratio = med[600] / med[2400]
    return [Check("frequency consistency", ratio, 2.0, ratio >= 2.0,
                  f"median err {med[600]:.3g} -> {med[2400]:.3g}")]


def check_amplitude() -> list[Check]:
    d = fixture_spec().to_dict()
    d.update(sigma=0.0, exponentiate=False)
    spec = SyntheticSpec.from_dict(d)
    rep = run(generate(spec, 1800), PipelineConfig(log_transform=False))
    worst = 0.0
    for psi, a, b in spec.harmonics:
        hits = [c for c in rep.cycles if c.interval[0] <= psi <= c.interval[1]]
        rel = abs(hits[0].amplitude / (2 * abs(complex(a, b))) - 1) if hits else 1.0
        worst = max(worst, rel)
    return [Check("amplitude noiseless", worst, 0.01, worst <= 0.01)]


def check_amplitude_noisy(replications: int = 100, n: int = 1800) -> list[Check]:
    m = 0.0175
    spec = SyntheticSpec(harmonics=((0.153, 0.0, 2 * m),), sigma=sqrt(n) * m / 8, seed=31)
    cfg = PipelineConfig(log_transform=False)
    errs = []
    for r in range(replications):
        rep = run(generate(spec, n, seed=[spec.seed, r]), cfg)
        hits = [c for c in rep.cycles if c.interval[0] <= 0.153 <= c.interval[1]]
        errs.append(abs(hits[0].amplitude / (4 * m) - 1) if hits else 1.0)
    med = float(np.median(errs))
    return [Check("amplitude noisy (median)", med, 0.15, med <= 0.15,
                  f"{replications} replications")]


SUITES = {
    "lambda-table": check_lambda_table,
    "periods": check_periods,
    "oracle": check_oracle,
    "seasonal": check_seasonal,
    "hp": check_hp,
    "amplitude": check_amplitude,
    "amplitude-noisy": check_amplitude_noisy,
    "consistency": check_consistency,
    "montecarlo": check_montecarlo,
}

FAST = ("lambda-table", "periods", "oracle", "seasonal", "hp", "amplitude")
