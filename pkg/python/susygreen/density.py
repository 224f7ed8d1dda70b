"""Spectral-density differences and their Stieltjes transforms.

P(k) = ∫(|ψ_k|² − |χ_k|²)dx compares the continuum of h₀ with that of its
partner. On the line it is integrable and its Stieltjes transform
∫P(k)dk/(k² − E) is the relative trace. On the half line the x-integral only
exists on a finite window [0, A]; the k-integral of P(k, A) then has a limit
as A → ∞ although P(k, A) itself has none.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from susygreen.config import Tolerances
from susygreen.errors import ConvergenceError, DomainError, OscillationError, TailError
from susygreen.models.base import ReferenceModel
from susygreen.quadrature import extrapolate_to_zero, gl_panels
from susygreen.schrodinger import EnergyPoint, momentum_of
from susygreen.utils import vprint

#: Flag recorded when the windowed limit differs from ``r_windowed`` but matches
#: ``r_windowed_numeric``, i.e. the printed form has the sign of iaκ flipped.
WINDOWED_R_SIGN = "windowed-r-sign"


@dataclass(frozen=True)
class DensityReport:
    model: str
    k_or_lambda: float
    numeric_value: float
    analytic_value: float | None = None
    window_A: float | None = None


def _partner_pair(model: ReferenceModel) -> tuple[ReferenceModel, ReferenceModel]:
    parent = model.parent()
    if parent is None:
        raise DomainError(f"{model.name} is not a partner model: no density difference")
    return parent, model


# MARK: Full line
def p_lambda_analytic(a: float, lam: float) -> float:
    """a/(π(λ² + a²)); its argument is the momentum k (see the brute-force check)."""
    return a / (math.pi * (lam * lam + a * a))


def pk_fullline(model: ReferenceModel, k: float, X: float | None = None,
                tol: float = 1e-10) -> float:
    """∫_{−X}^{X}(|ψ_k|² − |χ_k|²)dx, checked against the window 2X."""
    parent, partner = _partner_pair(model)
    if partner.continuum != "line":
        raise DomainError(f"{model.name} lives on the half line; use pkA_halfline")
    X = 40.0 / model.a if X is None else X

    def f(x):
        return float(abs(parent.scattering_state(k, x)) ** 2
                     - abs(partner.scattering_state(k, x)) ** 2)

    def window(L):
        left, _ = quad(f, -L, 0.0, limit=400, epsabs=1e-13, epsrel=1e-12)
        right, _ = quad(f, 0.0, L, limit=400, epsabs=1e-13, epsrel=1e-12)
        return left + right

    v1, v2 = window(X), window(2 * X)
    if abs(v2 - v1) > tol:
        raise TailError(f"P(k={k}) changes by {abs(v2 - v1):.3g} when the window doubles")
    return v1


def r_fullline(a: float, E: EnergyPoint) -> complex:
    """−1/(κ² + iaκ), the Stieltjes transform of a/(π(k² + a²))."""
    k = E.kappa
    return complex(-1 / (k * k + 1j * a * k))


def stieltjes_forward(P: Callable[[float], float], E: EnergyPoint, k_max: float = 200.0,
                      tol: float = Tolerances.quad_tol) -> complex:
    """∫_{−∞}^{∞} P(k)dk/(k² − E) on [−k_max, k_max] plus a P(K)K²/k⁴ tail."""
    total, err = 0j, 0.0
    for lo, hi in ((-k_max, 0.0), (0.0, k_max)):
        val, e = quad(lambda k: P(k) / (k * k - E.E), lo, hi, complex_func=True,
                      limit=400, epsabs=1e-13, epsrel=1e-12)
        total += val
        err += abs(e)
    if err > tol:
        raise ConvergenceError(f"Stieltjes integral error estimate {err:.3g} above {tol:g}")
    tail = (P(k_max) + P(-k_max)) * k_max**2 / (3 * k_max**3)
    return complex(total + tail)


def stieltjes_invert(R: Callable[[EnergyPoint], complex], lam: float,
                     tau: float = 1e-3) -> float:
    """√λ·[R(λ + i0) − R(λ − i0)]/(2πi), the density at k = √λ (τ → 0 by Richardson)."""
    if not lam > 0:
        raise DomainError(f"lambda must be > 0 (got {lam})")

    def jump(t):
        return R(momentum_of(complex(lam, t))) - R(momentum_of(complex(lam, -t)))

    est, _ = extrapolate_to_zero([tau, tau / 2], [jump(tau), jump(tau / 2)])
    val = math.sqrt(lam) * est / (2j * math.pi)
    return float(val.real)


# MARK: Half line
def pkA_halfline(a: float, k: float, A: float) -> float:
    """[2a·coth(aA)·sin²(kA) − k·sin(2Ak)]/(π(k² + a²)), exact on the window [0, A]."""
    if not A > 0:
        raise DomainError(f"window A must be > 0 (got {A})")
    return ((2 * a / math.tanh(a * A) * math.sin(k * A) ** 2 - k * math.sin(2 * A * k))
            / (math.pi * (k * k + a * a)))


def pkA_bruteforce(model: ReferenceModel, k: float, A: float, order: int = 20) -> float:
    """∫₀^A(ψ_k² − ξ_k²)dx by Gauss–Legendre panels."""
    parent, partner = _partner_pair(model)
    panel = min(1.0, math.pi / (4 * abs(k))) if k else 1.0

    def f(x):
        return (np.abs(parent.scattering_state(k, x)) ** 2
                - np.abs(partner.scattering_state(k, x)) ** 2)

    return gl_panels(f, 0.0, A, panel, order).real


def r_windowed(a: float, E: EnergyPoint) -> complex:
    """1/(2(iaκ − κ²)), the windowed limit in its printed form."""
    k = E.kappa
    return complex(1 / (2 * (1j * a * k - k * k)))


def r_windowed_numeric(a: float, E: EnergyPoint) -> complex:
    """−1/(2(κ² + iaκ)), the value the windowed integrals converge to."""
    k = E.kappa
    return complex(-1 / (2 * (k * k + 1j * a * k)))


def _windowed(a: float, E: EnergyPoint, A: float, k_max: float, order: int,
              panel: float | None) -> complex:
    limit = math.pi / (4 * A)
    if panel is None:
        panel = limit
    elif panel > limit:
        raise OscillationError(f"k panel {panel:g} cannot resolve frequency 2A={2 * A:g} "
                               f"(needs <= {limit:g})")
    coth = 1 / math.tanh(a * A)

    def f(k):
        p = (2 * a * coth * np.sin(k * A) ** 2 - k * np.sin(2 * A * k)) / (np.pi * (k * k + a * a))
        return p / (k * k - E.E)

    tail = a * coth / (3 * math.pi * k_max**3)
    return gl_panels(f, 0.0, k_max, panel, order) + tail


@dataclass(frozen=True)
class WindowedLimit:
    A: float
    value: complex
    #: |value(2A) − value(A)|.
    doubling_change: float
    #: Average of value(A′) over one oscillation period A′ ∈ [A, A + π/|κ|].
    cesaro: complex


def stieltjes_windowed_limit(a: float, E: EnergyPoint, A: float, k_max: float = 100.0,
                             order: int = 16, panel: float | None = None) -> WindowedLimit:
    """∫₀^∞ P(k, A)dk/(k² − E) at window A, with doubling and Cesàro diagnostics."""
    value = _windowed(a, E, A, k_max, order, panel)
    doubled = _windowed(a, E, 2 * A, k_max, order, None)
    period = math.pi / abs(E.kappa)
    t, w = leggauss(8)
    As = A + period * (t + 1) / 2
    cesaro = sum(wi * _windowed(a, E, Ai, k_max, order, None) for Ai, wi in zip(As, w)) / 2
    vprint(f"windowed limit at A={A:g}: {value:.10g}, doubling change "
           f"{abs(doubled - value):.2e}, Cesaro {cesaro:.10g}")
    return WindowedLimit(A=A, value=value, doubling_change=float(abs(doubled - value)),
                         cesaro=complex(cesaro))


def window_norm(model: ReferenceModel, k: float, X: float) -> float:
    """∫|χ_k|² over [−X, X] (line) or [0, X] (half line)."""
    lo = -X if model.continuum == "line" else 0.0
    panel = min(1.0, math.pi / (4 * abs(k))) if k else 1.0
    return gl_panels(lambda x: np.abs(model.scattering_state(k, x)) ** 2, lo, X,
                     panel, 20).real


# MARK: Sweeps
def density_report(model: ReferenceModel, k: float, A: float | None = None) -> DensityReport:
    """One row of a density sweep: P(k) on the line, P(k, A) with its brute force otherwise."""
    t = model.transform
    if t is None:
        raise DomainError(f"{model.name} is not a partner model: no density difference")
    if model.continuum == "line":
        numeric = pk_fullline(model, k)
        analytic = -t.case.delta * p_lambda_analytic(model.a, k)
        return DensityReport(model=model.name, k_or_lambda=k, numeric_value=numeric,
                             analytic_value=analytic)
    if A is None:
        raise DomainError(f"{model.name} lives on the half line: a window A is required")
    return DensityReport(model=model.name, k_or_lambda=k,
                         numeric_value=pkA_halfline(model.a, k, A),
                         analytic_value=pkA_bruteforce(model, k, A), window_A=A)
