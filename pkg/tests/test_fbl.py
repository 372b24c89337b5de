import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from pldopt import fbl

# reference values from direct quadrature of the Gaussian tail
Q_ONE = 0.15865525393145707
OMEGA_UNIT = 4.802264535411775  # snr 1, n 64, d 16
EPS_UNIT = 7.844062349910914e-07
EPS_M5DB = 0.10590529262360798  # snr 10**-0.5, n 64, d 16


def quad_tail(x):
    return quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi), x, np.inf, epsrel=1e-13)[0]


def test_q_func_reference():
    assert fbl.q_func(1.0) == pytest.approx(Q_ONE, rel=1e-14)
    assert fbl.q_func(0.0) == 0.5
    for x in (-3.0, -0.2, 0.7, 2.5, 6.0):
        assert fbl.q_func(x) == pytest.approx(quad_tail(x), rel=1e-10)


def test_error_reference_points():
    assert fbl.q_argument(1.0, 64, 16) == pytest.approx(OMEGA_UNIT, rel=1e-13)
    assert fbl.fbl_error(1.0, 64, 16) == pytest.approx(EPS_UNIT, rel=1e-12)
    assert fbl.fbl_error(10 ** -0.5, 64, 16) == pytest.approx(EPS_M5DB, rel=1e-12)


def test_capacity_dispersion():
    assert fbl.capacity(1.0) == pytest.approx(1.0)
    assert fbl.dispersion(1.0) == pytest.approx(0.75)
    assert fbl.dispersion(0.0) == 0.0


def test_zero_snr_is_certain_failure():
    assert fbl.fbl_error(0.0, 64, 16) == 1.0
    assert np.all(fbl.fbl_error(np.array([0.0, -1.0]), 64, 16) == 1.0)


def test_array_broadcast_and_scalar_type():
    out = fbl.fbl_error(np.array([0.5, 1.0, 2.0]), 64, np.array([[8.0], [16.0]]))
    assert out.shape == (2, 3)
    assert isinstance(fbl.fbl_error(1.0, 64, 16), float)


def test_error_monotone():
    snr = np.logspace(-2, 2, 200)
    e = fbl.fbl_error(snr, 64, 16)
    assert np.all(np.diff(e) <= 0)
    d = np.linspace(0, 64, 200)
    e = fbl.fbl_error(1.0, 64, d)
    assert np.all(np.diff(e) >= 0)


def test_q_inv_domain():
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            fbl.q_inv(bad)


@given(st.floats(1e-12, 1 - 1e-12))
def test_q_inv_round_trip(p):
    assert fbl.q_func(fbl.q_inv(p)) == pytest.approx(p, rel=1e-9, abs=1e-15)


@settings(max_examples=60)
@given(st.floats(0.05, 50.0), st.floats(0.02, 0.98))
def test_invert_info_bits_round_trip(snr, eps):
    root = fbl.invert_info_bits(snr, 64, eps)
    if root.clamped is None:
        assert fbl.fbl_error(snr, 64, root.value) == pytest.approx(eps, abs=1e-7)


def test_invert_info_bits_clamps():
    low = fbl.invert_info_bits(1e-6, 64, 1e-6)
    assert low.clamped == "low" and low.value == 0.0
    high = fbl.invert_info_bits(1e6, 64, 0.9)
    assert high.clamped == "high" and high.value == 64


@settings(max_examples=60)
@given(st.floats(1.0, 60.0), st.floats(0.01, 0.99))
def test_invert_snr_round_trip(d, eps):
    snr = fbl.invert_snr(64, d, eps)
    assert fbl.fbl_error(snr, 64, d) == pytest.approx(eps, abs=1e-7)


def test_invert_snr_unreachable():
    with pytest.raises(fbl.UnreachableError):
        fbl.invert_snr(64, 1e6, 0.5)


@settings(max_examples=100)
@given(st.floats(0.01, 30.0), st.floats(1.0, 60.0))
def test_gradient_matches_central_differences(snr, d):
    ds, dd = fbl.fbl_error_grad(snr, 64, d)
    w = fbl.q_argument(snr, 64, d)
    sign = 1.0 if w >= 0 else -1.0

    # difference the smaller of eps and 1 - eps to keep full relative precision
    def f(g, b):
        return fbl.q_func(sign * fbl.q_argument(g, 64, b))

    h = 1e-6 * snr
    num_s = sign * (f(snr + h, d) - f(snr - h, d)) / (2 * h)
    h = 1e-6 * d
    num_d = sign * (f(snr, d + h) - f(snr, d - h)) / (2 * h)
    assert ds == pytest.approx(num_s, rel=1e-5, abs=1e-300)
    assert dd == pytest.approx(num_d, rel=1e-5, abs=1e-300)
