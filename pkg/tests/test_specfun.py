import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lissajous_cs.specfun import (
    LOG_FACTORIALS,
    CapacityError,
    LogFactorialTable,
    OscillatorScale,
    hermite_fn,
    hermite_fn_deriv,
    hermite_table,
    hermite_table_with_deriv,
    log_binomial_ratio,
    scaled_eigenfunction,
    scaled_eigenfunction_deriv,
)

PI_M14 = math.pi ** -0.25


def mp_psi(n, u):
    mpmath.mp.dps = 40
    u = mpmath.mpf(u)
    val = mpmath.hermite(n, u) * mpmath.exp(-u * u / 2) / mpmath.sqrt(2 ** n * mpmath.factorial(n) * mpmath.sqrt(mpmath.pi))
    return float(val)


def test_ground_state_at_origin():
    assert hermite_fn(0, 0.0) == pytest.approx(0.751125544464943, abs=1e-15)


def test_odd_parity_zero():
    assert hermite_fn(1, 0.0) == 0.0


def test_h3_closed_form():
    # H_3(1) = 8 - 12 = -4
    expected = PI_M14 * (2 ** 3 * 6) ** -0.5 * math.exp(-0.5) * -4.0
    assert hermite_fn(3, 1.0) == pytest.approx(expected, rel=1e-14)


def test_derivative_examples():
    assert hermite_fn_deriv(0, 0.0) == pytest.approx(0.0, abs=1e-16)
    assert hermite_fn_deriv(1, 0.0) == pytest.approx(math.sqrt(2) * PI_M14, rel=1e-14)
    h = 1e-5
    fd = (hermite_fn(5, 0.7 + h) - hermite_fn(5, 0.7 - h)) / (2 * h)
    assert hermite_fn_deriv(5, 0.7) == pytest.approx(fd, rel=1e-8)


def test_scaled_examples():
    assert scaled_eigenfunction(0, 0.0, OscillatorScale(1.0)) == pytest.approx(PI_M14, rel=1e-15)
    assert scaled_eigenfunction(0, 0.0, OscillatorScale(math.sqrt(2))) == pytest.approx(2 ** 0.25 * PI_M14, rel=1e-15)
    s = math.sqrt(3)
    assert scaled_eigenfunction(4, 0.3, OscillatorScale(s)) == pytest.approx(math.sqrt(s) * hermite_fn(4, 0.3 * s), rel=1e-15)


def test_scaled_derivative_chain_rule():
    sc = OscillatorScale(math.sqrt(2))
    h = 1e-6
    fd = (scaled_eigenfunction(7, 1.1 + h, sc) - scaled_eigenfunction(7, 1.1 - h, sc)) / (2 * h)
    assert scaled_eigenfunction_deriv(7, 1.1, sc) == pytest.approx(fd, rel=1e-7)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 13, 30, 60, 100])
@pytest.mark.parametrize("u", [-9.5, -3.2, -0.4, 0.0, 0.9, 2.5, 7.7])
def test_against_mpmath(n, u):
    ref = mp_psi(n, u)
    got = float(hermite_fn(n, u))
    assert abs(got - ref) <= 1e-10 * max(abs(ref), 1e-3 * PI_M14)


def test_large_order_no_overflow():
    u = np.linspace(-40, 40, 2001)
    T = hermite_table(500, u)
    assert np.all(np.isfinite(T))
    assert float(hermite_fn(500, 20.0)) == pytest.approx(mp_psi(500, 20.0), rel=1e-9)


@pytest.mark.parametrize("n", [0, 3, 10, 40])
def test_l2_normalized(n):
    u = np.linspace(-20, 20, 8001)
    v = hermite_fn(n, u)
    assert np.trapezoid(v * v, u) == pytest.approx(1.0, abs=1e-12)


def test_orthogonality():
    u = np.linspace(-20, 20, 8001)
    T = hermite_table(12, u)
    G = np.trapezoid(T[:, None, :] * T[None, :, :], u, axis=-1)
    assert np.abs(G - np.eye(13)).max() < 1e-12


def test_table_matches_single_calls_and_derivative_table():
    u = np.linspace(-5, 5, 41)
    T, D = hermite_table_with_deriv(9, u)
    for n in range(10):
        np.testing.assert_allclose(T[n], hermite_fn(n, u), rtol=0, atol=1e-15)
        np.testing.assert_allclose(D[n], hermite_fn_deriv(n, u), rtol=0, atol=1e-14)


@given(n=st.integers(0, 80), u=st.floats(-12, 12))
@settings(max_examples=200, deadline=None)
def test_parity(n, u):
    a, b = float(hermite_fn(n, u)), float(hermite_fn(n, -u))
    assert a == pytest.approx((-1) ** n * b, rel=1e-12, abs=1e-300)


@given(n=st.integers(1, 80), u=st.floats(-12, 12))
@settings(max_examples=200, deadline=None)
def test_three_term_recurrence(n, u):
    # u psi_n = sqrt(n/2) psi_{n-1} + sqrt((n+1)/2) psi_{n+1}
    T = hermite_table(n + 1, u)
    lhs = u * T[n]
    rhs = math.sqrt(n / 2) * T[n - 1] + math.sqrt((n + 1) / 2) * T[n + 1]
    scale = np.abs(T[n - 1 : n + 2]).max() * max(1.0, abs(u))
    assert abs(lhs - rhs) <= 1e-12 * scale + 1e-300


def test_capacity():
    with pytest.raises(CapacityError):
        hermite_fn(513, 0.0)
    with pytest.raises(CapacityError):
        LOG_FACTORIALS(2000)


def test_log_binomial_examples():
    assert log_binomial_ratio(2, 0, 2) == pytest.approx(0.0, abs=1e-15)
    assert log_binomial_ratio(2, 1, 0) == pytest.approx(math.log(2), rel=1e-15)
    assert log_binomial_ratio(15, 6, 9) == pytest.approx(math.log(5005), rel=1e-14)


@given(n=st.integers(0, 300), k=st.integers(0, 300))
@settings(max_examples=100, deadline=None)
def test_log_binomial_exact(n, k):
    k = min(k, n)
    exact = math.log(math.comb(n, k))
    assert log_binomial_ratio(n, k, n - k) == pytest.approx(exact, rel=1e-13, abs=1e-12)


def test_factorial_table_small_values_exact():
    tab = LogFactorialTable()
    for n in range(30):
        assert tab(n) == pytest.approx(math.lgamma(n + 1), rel=1e-15, abs=1e-15)


def test_oscillator_scale_from_frequency():
    assert OscillatorScale.from_frequency(3.0).length_scale_inv == pytest.approx(math.sqrt(3))
