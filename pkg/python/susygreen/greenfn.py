"""Resolvent kernels G(x, y, E) = f_l(min)·f_r(max)/W built from left/right pairs.

Also the checks that pin a kernel down as the resolvent: the derivative jump
across the diagonal, the equation off the diagonal, and the spectral
(eigenfunction) representation for the reference models.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from susygreen.config import Tolerances
from susygreen.errors import BranchError, ConvergenceError, DomainError
from susygreen.quadrature import extrapolate_to_zero, gl_panels
from susygreen.schrodinger import (
    EnergyPoint,
    Grid,
    Kind,
    Potential,
    WaveSolution,
    momentum_of,
    solve_left,
    solve_right,
    wronskian_profile,
)
from susygreen.utils import vprint

if TYPE_CHECKING:
    from susygreen.models.base import ReferenceModel


class Label(enum.Enum):
    G0 = "G0"
    G1 = "G1"


@dataclass(frozen=True, eq=False)
class GreenFunction:
    """Kernel evaluator for a left/right pair with Wronskian ``W0``.

    G1 kernels carry W = (E − α)W0 here; ``wronskian_check`` then records the
    relative gap to the transformed pair's own Wronskian.
    """

    fl: WaveSolution
    fr: WaveSolution
    W0: complex
    energy: EnergyPoint
    label: Label = Label.G0
    #: Largest relative deviation of the pointwise Wronskian from W0.
    deviation: float = 0.0
    wronskian_check: float = 0.0

    @property
    def grid(self) -> Grid:
        return self.fl.grid

    @property
    def potential(self) -> Potential:
        return self.fl.potential

    def _parts(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        lo, hi = np.minimum(x, y), np.maximum(x, y)
        k = self.energy.kappa
        with np.errstate(over="ignore", invalid="ignore"):
            phase = np.exp(1j * k * (self.fl.sigma * lo + self.fr.sigma * hi))
        return x, y, lo, hi, phase

    def __call__(self, x, y):
        _, _, lo, hi, phase = self._parts(x, y)
        with np.errstate(invalid="ignore"):
            out = self.fl.scaled_at(lo)[0] * self.fr.scaled_at(hi)[0] * phase / self.W0
        if self.fl.reaches_origin:
            # Dirichlet at 0, also where f_r(0) diverges
            out = np.where(lo == 0, 0j, out)
        return out[()] if out.ndim == 0 else out

    def dx(self, x, y):
        """∂G/∂x off the diagonal from the stored derivatives."""
        x, y, lo, hi, phase = self._parts(x, y)
        gl, hl = self.fl.scaled_at(lo)
        gr, hr = self.fr.scaled_at(hi)
        out = np.where(x < y, hl * gr, gl * hr) * phase / self.W0
        return out[()] if out.ndim == 0 else out

    def diagonal(self, x):
        return self(x, x)

    def diagonal_derivative(self, x):
        """d/dx G(x, x) = (f_l′f_r + f_l f_r′)/W."""
        x = np.asarray(x, dtype=float)
        gl, hl = self.fl.scaled_at(x)
        gr, hr = self.fr.scaled_at(x)
        s = self.fl.sigma + self.fr.sigma
        phase = np.exp(s * 1j * self.energy.kappa * x) if s else 1.0
        out = (hl * gr + gl * hr) * phase / self.W0
        return out[()] if np.ndim(out) == 0 else out

    def node_diagonal(self) -> tuple[np.ndarray, np.ndarray]:
        """(G(x,x), d/dx G(x,x)) exactly at the nodes."""
        s = self.fl.sigma + self.fr.sigma
        phase = np.exp(s * 1j * self.energy.kappa * self.grid.nodes) if s else 1.0
        val = self.fl.g * self.fr.g * phase / self.W0
        der = (self.fl.h * self.fr.g + self.fl.g * self.fr.h) * phase / self.W0
        return val, der


def assemble_green(fl: WaveSolution, fr: WaveSolution, floor: float = 1e-8,
                   label: Label = Label.G0) -> GreenFunction:
    """G(x,y) = f_l(min(x,y))·f_r(max(x,y))/W0 with W0 from ``wronskian_profile``."""
    if fl.energy.on_shell or fr.energy.on_shell:
        raise BranchError("Green functions need Im κ > 0; got an on-shell energy")
    if fl.kind is not Kind.LEFT or fr.kind is not Kind.RIGHT:
        raise DomainError(f"assemble_green expects (left, right), got "
                          f"({fl.kind.value}, {fr.kind.value})")
    W0, dev = wronskian_profile(fr, fl, floor)
    vprint(f"{label.value} at E={fl.energy.E:.6g}: W0={W0:.10g}, deviation {dev:.2e}")
    return GreenFunction(fl=fl, fr=fr, W0=W0, energy=fl.energy, label=label, deviation=dev)


# MARK: Solver context
@dataclass(frozen=True, eq=False)
class SolverContext:
    """A potential on a fixed grid; produces G0 at any energy off the spectrum."""

    potential: Potential
    grid: Grid
    tol: Tolerances = Tolerances()

    def pair(self, energy: EnergyPoint) -> tuple[WaveSolution, WaveSolution]:
        return (solve_left(self.potential, energy, self.grid, self.tol),
                solve_right(self.potential, energy, self.grid, self.tol))

    def green(self, energy: EnergyPoint) -> GreenFunction:
        fl, fr = self.pair(energy)
        return assemble_green(fl, fr, self.tol.wronskian_floor)


# MARK: Checks
def jump_check(G: GreenFunction, y: float, rel_step: float = 1e-5) -> float:
    """∂ₓG(y⁺, y) − ∂ₓG(y⁻, y) by one-sided second-order differences; −1 for a resolvent."""
    h = rel_step * G.grid.span
    if not (G.grid.x_min + 2 * h < y < G.grid.x_max - 2 * h):
        raise DomainError(f"y={y} not strictly inside the grid")
    xs = np.array([y - 2 * h, y - h, y, y + h, y + 2 * h])
    g = G(xs, np.full_like(xs, y))
    right = (-3 * g[2] + 4 * g[3] - g[4]) / (2 * h)
    left = (3 * g[2] - 4 * g[1] + g[0]) / (2 * h)
    jump = complex(right - left)
    if abs(jump.imag) > 1e-6:
        vprint(f"jump_check at y={y}: imaginary part {jump.imag:.3g}")
    return float(jump.real)


def offdiag_residual(G: GreenFunction, x: float, y: float) -> float:
    """|(−∂ₓ² + V − E)G(x, y)| / |G| at the node nearest x, in integrated form.

    Uses the nodes around x: (∂ₓG(x₊) − ∂ₓG(x₋)) − ∫(V − E)G dx by Simpson.
    """
    nodes = G.grid.nodes
    i = G.grid.index(x)
    if not 0 < i < nodes.size - 1:
        raise DomainError(f"x={x} has no interior node neighbourhood")
    xs = nodes[i - 1:i + 2]
    if np.min(np.abs(xs - y)) < 1e-12 or (xs[0] - y) * (xs[-1] - y) <= 0:
        raise DomainError(f"stencil around x={x} touches the diagonal y={y}")
    ys = np.full(3, float(y))
    vals = G(xs, ys)
    ders = G.dx(xs, ys)
    F = (G.fl.vnodes[i - 1:i + 2] - G.energy.E) * vals
    h0, h1 = xs[1] - xs[0], xs[2] - xs[1]
    simpson = (h0 + h1) / 6 * ((2 - h1 / h0) * F[0] + (h0 + h1) ** 2 / (h0 * h1) * F[1]
                               + (2 - h0 / h1) * F[2])
    res = abs((ders[2] - ders[0]) - simpson) / (h0 + h1)
    return float(res / abs(vals[1]))


# MARK: Spectral representation
def spectral_reconstruct(model: "ReferenceModel", x: float, y: float, E: EnergyPoint,
                         k_max: float = 200.0, n_k: int = 16, tol: float = 1e-3) -> complex:
    """Σₙ ψₙ(x)ψₙ*(y)/(Eₙ − E) + ∫ψ_k(x)ψ_k*(y)/(k² − E) dk for a closed-form model.

    The k-integral runs over (−K, K) on the line (folded onto (0, K)) and (0, K)
    on the half line, with Gauss–Legendre panels of order ``n_k``. The 1/K
    truncation tail is removed by Richardson on (K, 2K); the estimate from
    (2K, 4K) must agree within ``tol``.
    """
    bound = sum((phi(x) * np.conj(phi(y)) / (En - E.E) for En, phi in model.bound_states()),
                0j)

    def integrand(k):
        val = model.scattering_state(k, x) * np.conj(model.scattering_state(k, y)) / (k**2 - E.E)
        if model.continuum == "line":
            val = val + (model.scattering_state(-k, x) * np.conj(model.scattering_state(-k, y))
                         / (k**2 - E.E))
        return val

    freq = abs(x) + abs(y)
    panel = 1.0 if freq == 0 else min(1.0, math.pi / (2 * freq))
    edges = [0.0, k_max, 2 * k_max, 4 * k_max]
    pieces = [gl_panels(integrand, a, b, panel, n_k) for a, b in zip(edges[:-1], edges[1:])]
    R1 = pieces[0]
    R2 = R1 + pieces[1]
    R4 = R2 + pieces[2]
    e1, e2 = 2 * R2 - R1, 2 * R4 - R2
    if abs(e2 - e1) > tol:
        raise ConvergenceError(f"continuum integral unsettled at k_max={k_max}: "
                               f"{e1:.8g} vs {e2:.8g}")
    return complex(bound + e2)


def cut_jump(model: "ReferenceModel", x: float, y: float, k: float,
             tau: float = 1e-3) -> complex:
    """G(λ + i0) − G(λ − i0) at λ = k² from the closed-form kernel (τ → 0 by Richardson)."""
    lam = k * k

    def jump(t):
        up = model.green(x, y, momentum_of(complex(lam, t)))
        down = model.green(x, y, momentum_of(complex(lam, -t)))
        return up - down

    est, _ = extrapolate_to_zero([tau, tau / 2], [jump(tau), jump(tau / 2)])
    return est


def cut_jump_expected(model: "ReferenceModel", x: float, y: float, k: float) -> complex:
    """(πi/k)·Σ ψ(x)ψ*(y) over the real states at momentum k (both signs on the line)."""
    ks = (k, -k) if model.continuum == "line" else (k,)
    total = sum(model.scattering_state(q, x) * np.conj(model.scattering_state(q, y)) for q in ks)
    return complex(1j * math.pi / k * total)
