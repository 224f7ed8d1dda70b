"""Quadrature and extrapolation helpers on integrands with known answers."""

import math

import numpy as np

from susygreen.errors import OscillationError
from susygreen.quadrature import (
    MAX_SAMPLES,
    exp_tail,
    extrapolate_to_zero,
    gl_panels,
    hermite_trapezoid,
    origin_extend,
    origin_limit,
)


def test_gl_panels():
    v = gl_panels(np.cos, 0.0, math.pi / 2, 0.1)
    assert abs(v - 1) < 1e-14, f"int cos over [0, pi/2] = {v}"
    v = gl_panels(lambda k: np.exp(2j * k), 0.0, 50.0, 0.2)
    want = (np.exp(100j) - 1) / 2j
    assert abs(v - want) < 1e-12
    assert gl_panels(np.cos, 1.0, 1.0, 0.1) == 0
    try:
        gl_panels(np.cos, 0.0, 1.0, 16.0 / MAX_SAMPLES / 10, order=16)
    except OscillationError:
        pass
    else:
        raise AssertionError("an oversized panel request should raise OscillationError")


def test_hermite_trapezoid():
    x = np.linspace(0.0, 2.0, 41)
    v = hermite_trapezoid(x, np.exp(-x), -np.exp(-x))
    assert abs(v - (1 - math.exp(-2))) < 1e-7, f"Hermite rule {v}"
    # exact for cubics
    v = hermite_trapezoid(x, x**3, 3 * x**2)
    assert abs(v - 4.0) < 1e-12


def test_extrapolation():
    deltas = [0.1 * 0.5**j for j in range(5)]
    values = [2.0 + 3 * d - d**2 + 0.5 * d**3 for d in deltas]
    est, change = extrapolate_to_zero(deltas, values)
    assert abs(est - 2.0) < 1e-12, f"polynomial data should extrapolate exactly, got {est}"
    assert change < 1e-10
    try:
        extrapolate_to_zero([0.1], [1.0])
    except ValueError:
        pass
    else:
        raise AssertionError("one sample cannot be extrapolated")


def test_origin_and_tail():
    x = np.linspace(1e-4, 0.05, 6)
    y = (1 + 2j) + 0.5 * x - x**2
    assert abs(origin_limit(x, y) - (1 + 2j)) < 1e-12
    at = np.array([0.0, 2e-5])
    val, slope = origin_extend(x, y, at)
    assert np.allclose(val, (1 + 2j) + 0.5 * at - at**2, atol=1e-12)
    assert np.allclose(slope, 0.5 - 2 * at, atol=1e-9)
    # ∫_{10}^∞ e^{−2x}dx from two samples
    v = exp_tail(9.0, math.exp(-18.0), 10.0, math.exp(-20.0))
    assert abs(v - math.exp(-20.0) / 2) < 1e-20
    assert exp_tail(9.0, 1.0, 10.0, 2.0) == 0, "a growing fit has no tail"
    assert exp_tail(9.0, 0.0, 10.0, 1.0) == 0


def run():
    test_gl_panels()
    test_hermite_trapezoid()
    test_extrapolation()
    test_origin_and_tail()
    print("test_quadrature: OK")


if __name__ == "__main__":
    run()
