"""Quadrature and extrapolation helpers shared by the kernel, trace and density code."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import krogh_interpolate

from susygreen.errors import OscillationError

#: Hard limit on integrand samples per panel integral.
MAX_SAMPLES = 20_000_000


def gl_panels(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              max_panel: float, order: int = 16) -> complex:
    """∫_a^b f by Gauss–Legendre panels of length <= max_panel (f is vectorized)."""
    if b <= a:
        return 0j
    n = max(1, int(math.ceil((b - a) / max_panel)))
    if n * order > MAX_SAMPLES:
        raise OscillationError(f"{n} panels of order {order} needed on [{a:g}, {b:g}]")
    t, w = leggauss(order)
    edges = np.linspace(a, b, n + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    pts = mid[:, None] + half[:, None] * t[None, :]
    vals = np.asarray(f(pts.ravel())).reshape(pts.shape)
    return complex(np.sum(vals * w[None, :] * half[:, None]))


def hermite_trapezoid(x: np.ndarray, y: np.ndarray, dy: np.ndarray) -> complex:
    """Exact integral of the cubic Hermite interpolant of (y, y′) on the nodes x.

    Per interval: h(y_i + y_{i+1})/2 + h²(y′_i − y′_{i+1})/12, an O(h⁴) rule.
    """
    h = np.diff(x)
    return complex(np.sum(h * (y[:-1] + y[1:]) / 2 + h**2 * (dy[:-1] - dy[1:]) / 12))


def extrapolate_to_zero(deltas, values) -> tuple[complex, float]:
    """Polynomial (Neville) extrapolation of values(δ) to δ = 0.

    Returns the full-order estimate and its change against the best estimate
    of one order lower, a convergence measure.
    """
    d = np.asarray(deltas, dtype=float)
    col = np.asarray(values, dtype=complex).copy()
    if d.size != col.size or d.size < 2:
        raise ValueError("need at least two (delta, value) pairs of equal length")
    previous = col[-1]
    for m in range(1, d.size):
        previous = col[-1]
        col = (d[:-m] * col[1:] - d[m:] * col[:-1]) / (d[:-m] - d[m:])
    return complex(col[0]), float(abs(col[0] - previous))


def origin_extend(x: np.ndarray, y: np.ndarray, at, n: int = 5
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Value and slope at ``at`` of the polynomial through the first ``n`` samples."""
    xs = np.asarray(x[:n], dtype=float)
    ys = np.asarray(y[:n], dtype=complex)
    at = np.asarray(at, dtype=float)
    re = krogh_interpolate(xs, ys.real, at, der=[0, 1])
    im = krogh_interpolate(xs, ys.imag, at, der=[0, 1])
    return re[0] + 1j * im[0], re[1] + 1j * im[1]


def origin_limit(x: np.ndarray, y: np.ndarray, n: int = 5) -> complex:
    """Value at x = 0 of the polynomial through the first ``n`` samples."""
    return complex(origin_extend(x, y, 0.0, n)[0])


def exp_tail(x1: float, y1: complex, x2: float, y2: complex) -> complex:
    """∫_{x2}^{±∞} of A·e^{−λ|x|} fitted through (x1, y1), (x2, y2) with |x2| > |x1|.

    Zero when the fit does not decay.
    """
    if y1 == 0 or y2 == 0:
        return 0j
    dist = abs(x2 - x1)
    lam = -np.log(complex(y2) / complex(y1)) / dist
    if not lam.real > 0:
        return 0j
    return complex(y2 / lam)
