from math import pi, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cyclescope.series import compose, difference_filter, ma_2x12, transfer
from cyclescope.spectral import (
    FrequencyGrid,
    amplitude_of,
    backout_coefficient,
    demeaned_coeff,
    fourier_coeff,
    period_of,
    refine_frequency,
    scan_statistic,
)
from cyclescope.synth import SyntheticSpec, generate


def brute_coeff(x, c, d, psi, demean=False):
    xbar = sum(x) / len(x)
    tot = 0j
    for j in range(c + 1, c + d + 1):
        v = x[j - 1] - (xbar if demean else 0.0)
        tot += v * complex(np.cos(psi * j), -np.sin(psi * j))
    return tot / d


def test_default_grid():
    g = FrequencyGrid()
    assert len(g) == 80
    assert g.points[0] == pytest.approx(pi / 720)
    assert g.points[-1] == pytest.approx(80 * pi / 720)
    assert g.points[-1] < 0.35
    assert np.all(np.diff(g.points) > 0)


def test_fourier_coeff_constant_at_zero():
    assert fourier_coeff(np.full(10, 2.5), 0, 10, 0.0) == pytest.approx(2.5 + 0j, abs=1e-15)


def test_fourier_coeff_cosine_eight_points():
    # sum_{t=1}^{8} cos^2(pi t/4) = 4, cross terms cancel
    t = np.arange(1, 9)
    assert fourier_coeff(np.cos(pi * t / 4), 0, 8, pi / 4) == pytest.approx(0.5 + 0j, abs=1e-15)


def test_fourier_coeff_zero_frequency_is_mean(rng):
    x = rng.normal(size=37)
    assert fourier_coeff(x, 0, 37, 0.0) == pytest.approx(complex(x.mean()), abs=1e-15)


def test_fourier_coeff_uses_absolute_index():
    x = np.arange(1.0, 11.0)
    assert fourier_coeff(x, 3, 4, 0.7) == pytest.approx(brute_coeff(list(x), 3, 4, 0.7), abs=1e-14)


def test_fourier_coeff_window_bounds():
    with pytest.raises(ValueError):
        fourier_coeff(np.ones(5), 3, 3, 0.1)


def test_demeaned_coeff_trivial_cases(rng):
    x = rng.normal(size=20)
    assert abs(demeaned_coeff(x, 0, 20, 0.0)) < 1e-15
    assert demeaned_coeff(np.full(9, 4.0), 2, 5, 1.3) == 0


def test_demeaned_coeff_hand_value():
    # window j = 3,4,5 of [1..6], mean 3.5: (-0.5*i + 0.5 - 1.5*i) / 3
    got = demeaned_coeff([1, 2, 3, 4, 5, 6], 2, 3, pi / 2)
    assert got == pytest.approx(1 / 6 - 2j / 3, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(arrays(float, st.integers(2, 25), elements=st.floats(-100, 100)), st.data())
def test_demeaned_equals_raw_on_demeaned_path(x, data):
    n = x.size
    c = data.draw(st.integers(0, n - 1))
    d = data.draw(st.integers(1, n - c))
    psi = data.draw(st.sampled_from(list(FrequencyGrid().points[::7])))
    lhs = demeaned_coeff(x, c, d, psi)
    rhs = fourier_coeff(x - x.mean(), c, d, psi)
    assert abs(lhs - rhs) <= 1e-14 * (1 + np.abs(x).max())
    assert abs(lhs - brute_coeff(list(x), c, d, psi, demean=True)) <= 1e-12 * (1 + np.abs(x).max())


def test_conjugate_symmetry(rng):
    x = rng.normal(size=60)
    for psi in FrequencyGrid().points[::9]:
        assert abs(fourier_coeff(x, 0, 60, 2 * pi - psi) - np.conj(fourier_coeff(x, 0, 60, psi))) < 1e-12


def test_scale_equivariance(rng):
    x = rng.normal(size=120) + 0.5 * np.cos(0.2 * np.arange(1, 121))
    for s in (-3.0, 0.5, 7.0):
        for psi in (0.05, 0.2, 0.31):
            assert abs(demeaned_coeff(s * x, 0, 120, psi)) == pytest.approx(
                abs(s) * abs(demeaned_coeff(x, 0, 120, psi)), rel=1e-12)
        assert refine_frequency(s * x, (0.1, 0.3))[0] == pytest.approx(
            refine_frequency(x, (0.1, 0.3))[0], abs=1e-9)


def test_matched_frequency_recovery():
    # n = 7200 is a near multiple of the period of the on-grid frequency 35*pi/720
    psi0 = 35 * pi / 720
    a, b = 0.3, -0.4
    t = np.arange(1, 7201)
    x = a * np.cos(psi0 * t) + b * np.sin(psi0 * t)
    err = abs(fourier_coeff(x, 0, 7200, psi0) - complex(a, -b) / 2)
    assert err < 1e-3 * sqrt(a * a + b * b)


def test_scan_statistic_constant():
    assert scan_statistic(np.full(30, 1.2), 0.1) == 0


def test_scan_statistic_matched_and_far():
    n, A, psi0 = 720, 0.8, 0.153
    t = np.arange(1, n + 1)
    x = A * np.cos(psi0 * t)
    assert scan_statistic(x, psi0) == pytest.approx(sqrt(n) * A / 2, rel=0.01)
    assert scan_statistic(x, 0.30) < 0.05 * sqrt(n) * A


def test_refine_single_harmonic():
    spec = SyntheticSpec(harmonics=((0.153, 0.05, 0.0),), sigma=0.05, seed=3)
    x = generate(spec, 1800).values
    psi, coeff = refine_frequency(x, (0.10, 0.20))
    assert abs(psi - 0.153) < 2 * pi / 1800
    assert coeff == demeaned_coeff(x, 0, 1800, psi)


def test_refine_constant_returns_lower_edge():
    psi, coeff = refine_frequency(np.full(100, 5.0), (0.12, 0.2))
    assert psi == 0.12
    assert coeff == 0


def test_refine_ignores_out_of_interval_peak():
    n = 1200
    t = np.arange(1, n + 1)
    x = 1.0 * np.cos(0.12 * t) + 3.0 * np.cos(0.30 * t)
    psi, _ = refine_frequency(x, (0.05, 0.20))
    grid = np.linspace(0.05, 0.20, 20001)
    brute = grid[np.argmax(np.abs([brute_coeff(list(x), 0, n, g, True) for g in grid[::100]]))
                 * 100]
    assert abs(psi - 0.12) < 2 * pi / n
    assert abs(psi - brute) < 2 * pi / n


def test_refine_raw_switch():
    spec = SyntheticSpec(trend=(0.01,), harmonics=((0.2, 0.1, 0.0),), sigma=0.02, seed=9)
    x = generate(spec, 900).values
    psi_d, c_d = refine_frequency(x, (0.15, 0.25))
    psi_r, c_r = refine_frequency(x, (0.15, 0.25), statistic="raw")
    assert abs(psi_d - psi_r) < 1e-3
    assert c_r == fourier_coeff(x, 0, 900, psi_r)


def test_refine_bad_interval():
    with pytest.raises(ValueError):
        refine_frequency(np.ones(10), (0.2, 0.1))


@pytest.mark.parametrize("psi, months, years_lo, years_hi", [
    (0.062, 101.3, 8.4, 8.5),
    (0.153, 41.1, 3.35, 3.45),
])
def test_period_of_table_values(psi, months, years_lo, years_hi):
    m, y = period_of(psi)
    assert m == pytest.approx(months, abs=0.05)
    assert years_lo <= y <= years_hi


def test_period_of_annual():
    m, y = period_of(2 * pi / 12)
    assert m == pytest.approx(12.0) and y == pytest.approx(1.0)


def test_period_of_rejects_nonpositive():
    with pytest.raises(ValueError):
        period_of(0.0)


def test_backout_inverts_transfer():
    f = compose(ma_2x12(), difference_filter(1))
    m = 0.025 - 0.01j
    for psi in (0.05, 0.153, 0.3):
        assert backout_coefficient(transfer(f, psi) * m, psi, f) == pytest.approx(m, abs=1e-15)


def test_backout_singular():
    with pytest.raises(ValueError, match="singular"):
        backout_coefficient(1.0, 2 * pi / 12, ma_2x12())


def test_amplitude_is_four_modulus():
    assert amplitude_of(0.025 + 0j) == pytest.approx(0.1)
    # analytic range of 2 Re[m e^{i psi t}] over a dense real t grid
    m, psi = 0.01 - 0.02j, 0.153
    t = np.linspace(0, 2 * pi / psi, 100001)
    h = 2 * np.real(m * np.exp(1j * psi * t))
    assert amplitude_of(m) == pytest.approx(h.max() - h.min(), rel=1e-8)
