from math import pi

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cyclescope.hp import (
    DEFAULT_LAMBDAS,
    cutoff_from_lambda,
    hp_banded_matrix,
    hp_decompose,
    lambda_from_cutoff,
)
from cyclescope.series import InputError
from cyclescope.synth import dense_hp_trend


def test_lambda_zero_is_identity(rng):
    x = rng.normal(size=30)
    dec = hp_decompose(x, 0.0)
    assert np.array_equal(dec.trend, x)
    assert np.all(dec.cycle == 0)


@pytest.mark.parametrize("lam", [1.0, 1600.0, 55000.0, 1e7])
def test_linear_input_passes_through(lam):
    x = -3.0 + 0.25 * np.arange(150)
    assert np.max(np.abs(hp_decompose(x, lam).cycle)) < 1e-9


@pytest.mark.parametrize("lam", [1600.0, 5500.0, 55000.0])
def test_banded_matches_dense(rng, lam):
    x = rng.normal(size=200).cumsum()
    assert np.max(np.abs(hp_decompose(x, lam).trend - dense_hp_trend(x, lam))) < 1e-10


def test_banded_matrix_is_dense_system():
    n, lam = 9, 3.0
    ab = hp_banded_matrix(n, lam)
    D = np.diff(np.eye(n), 2, axis=0)
    A = np.eye(n - 2) + lam * D @ D.T
    for k in range(3):
        np.testing.assert_allclose(ab[2 - k, k:], np.diag(A, k), atol=1e-14)


def test_normal_equations_hold(rng):
    x = rng.normal(size=60).cumsum()
    lam = 1600.0
    D = np.diff(np.eye(60), 2, axis=0)
    t = hp_decompose(x, lam).trend
    resid = (np.eye(60) + lam * D.T @ D) @ t - x
    assert np.max(np.abs(resid)) < 1e-8


def test_exact_zero_cycle_on_line():
    x = 2.0 + 0.5 * np.arange(200)
    assert np.all(hp_decompose(x, 55000).cycle == 0)


def test_cycle_plus_trend(rng):
    x = rng.normal(size=80)
    dec = hp_decompose(x, 1600)
    np.testing.assert_allclose(dec.trend + dec.cycle, x, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(arrays(float, 40, elements=st.floats(-10, 10)),
       arrays(float, 40, elements=st.floats(-10, 10)),
       st.floats(-3, 3), st.sampled_from([10.0, 1600.0, 55000.0]))
def test_linearity(x, y, a, lam):
    lhs = hp_decompose(a * x + y, lam).trend
    rhs = a * hp_decompose(x, lam).trend + hp_decompose(y, lam).trend
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * (1 + np.max(np.abs(x)) + np.max(np.abs(y)))


def test_smoothing_increases_with_lambda(rng):
    x = rng.normal(size=300).cumsum()
    rough = [np.var(np.diff(hp_decompose(x, lam).trend, 2)) for lam in (100, *DEFAULT_LAMBDAS)]
    assert all(a > b for a, b in zip(rough, rough[1:]))


def test_too_short():
    with pytest.raises(InputError):
        hp_decompose([1.0, 2.0, 3.0], 10.0)
    with pytest.raises(ValueError):
        hp_decompose(np.arange(10.0), -1.0)


@pytest.mark.parametrize("psi0", [0.05, 0.1, 0.3, 1.0, 2.0])
def test_mapping_roundtrip(psi0):
    assert cutoff_from_lambda(lambda_from_cutoff(psi0)) == pytest.approx(psi0, rel=1e-12)


def test_mapping_half_pi():
    # 1 - cos(pi/2) = 1
    assert lambda_from_cutoff(pi / 2) == pytest.approx(0.25, abs=1e-15)
    assert cutoff_from_lambda(0.25) == pytest.approx(pi / 2, abs=1e-15)


@pytest.mark.parametrize("lam, years", list(zip(DEFAULT_LAMBDAS, (4.5, 5.5, 7.0, 8.0))))
def test_default_lambda_periods(lam, years):
    assert 2 * pi / cutoff_from_lambda(lam) / 12 == pytest.approx(years, rel=0.02)


@pytest.mark.parametrize("lam", [0.0, 1 / 16, -2.0])
def test_mapping_domain(lam):
    with pytest.raises(ValueError):
        cutoff_from_lambda(lam)
    with pytest.raises(ValueError):
        lambda_from_cutoff(0.0)


@pytest.mark.parametrize("lam", [1600.0, 5500.0])
def test_cutoff_is_half_gain_point(lam):
    # interior gain of the trend filter at the cutoff is 1/(1 + lam 4 (1 - cos)^2) = 1/2
    psi0 = cutoff_from_lambda(lam)
    t = np.arange(1, 4001)
    trend = hp_decompose(np.cos(psi0 * t), lam).trend
    mid = slice(1500, 2500)
    gain = np.std(trend[mid]) / np.std(np.cos(psi0 * t[mid]))
    assert gain == pytest.approx(0.5, abs=2e-3)
