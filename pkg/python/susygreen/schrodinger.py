"""Potentials, energies, grids and boundary-matched solutions of (h − E)ψ = 0.

Units are ħ = 2m = 1, so h = −d²/dx² + V and E = κ² with Im κ > 0 off the
spectrum. Solutions are integrated in exponentially rescaled form

    f(x) = g(x)·exp(σiκx),    f′(x) = h(x)·exp(σiκx)

with σ = −1 for left solutions (f_l ~ e^{−iκx}) and σ = +1 for right ones, so
(g, h) stay O(1) over long truncation windows. The true values are only formed
on request.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from susygreen.config import GridSettings, Tolerances
from susygreen.errors import (
    BranchError,
    ConvergenceError,
    DegenerateError,
    DomainError,
    GridMismatch,
    SolutionOverflowError,
)
from susygreen.quadrature import origin_extend
from susygreen.utils import is_verbose, vprint, warn

#: Nodes closer to a c/x² origin than this are skipped by the residual check;
#: a fixed grid cannot resolve the 1/x behaviour there.
SINGULAR_CORE = 1.0

#: Leading half-line nodes used to continue a solution into [0, x0).
ORIGIN_NODES = 6


# MARK: Energies
@dataclass(frozen=True)
class EnergyPoint:
    """Complex energy with its branch-resolved momentum (κ² = E, Im κ > 0).

    ``on_shell`` points (real κ = k, E = k²) only label sampled scattering
    eigenfunctions; Green-function assembly refuses them.
    """

    E: complex
    kappa: complex
    on_shell: bool = False

    def __post_init__(self) -> None:
        if not self.on_shell and not self.kappa.imag > 0:
            raise BranchError(f"momentum {self.kappa} has Im κ <= 0 (E={self.E})")
        if abs(self.kappa**2 - self.E) > 1e-12 * max(1.0, abs(self.E)):
            raise BranchError(f"κ²={self.kappa**2} does not match E={self.E}")

    @classmethod
    def scattering(cls, k: float) -> "EnergyPoint":
        k = float(k)
        return cls(E=complex(k * k), kappa=complex(k), on_shell=True)


def momentum_of(E: complex, epsilon_shift: float | None = None) -> EnergyPoint:
    """Return the EnergyPoint for ``E`` with the root Im κ > 0.

    ``epsilon_shift`` moves E into the upper half plane first (E + iε); it is
    the only way to reach the nonnegative real axis.
    """
    E = complex(E)
    if epsilon_shift is not None:
        if not epsilon_shift > 0:
            raise BranchError(f"epsilon_shift must be > 0 (got {epsilon_shift})")
        E += 1j * epsilon_shift
    kappa = cmath.sqrt(E)
    if kappa.imag < 0:
        kappa = -kappa
    if not kappa.imag > 0:
        raise BranchError(f"energy {E} on continuous spectrum: no momentum with Im κ > 0")
    return EnergyPoint(E=E, kappa=kappa)


# MARK: Potentials
class Domain(enum.Enum):
    FULL_LINE = "full-line"
    HALF_LINE = "half-line"


class DecayClass(enum.Enum):
    FADDEEV_FULL_LINE = "faddeev-full-line"    # ∫(1+|x|)|V|dx < ∞
    FADDEEV_HALF_LINE = "faddeev-half-line"    # ∫x|V|dx < ∞


class Kind(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    #: Sampled eigenfunction carried for normalization or density checks.
    STATE = "state"


@dataclass(frozen=True)
class Potential:
    """A real potential V(x) on the line or the half line.

    ``evaluate`` must accept scalars and numpy arrays. ``decay_rate`` (if known)
    sets the default truncation window; ``origin_singularity`` is the c of a
    c/x² leading term at the origin (half line only).
    """

    name: str
    domain: Domain
    evaluate: Callable[[np.ndarray], np.ndarray]
    origin_singularity: float | None = None
    #: Known discrete energies E₀ < E₁ < … (M = len).
    bound_states: tuple[float, ...] = ()
    decay_rate: float | None = None

    def __post_init__(self) -> None:
        if self.origin_singularity is not None and self.domain is not Domain.HALF_LINE:
            raise DomainError(f"{self.name}: an origin singularity needs a half-line domain")
        if list(self.bound_states) != sorted(self.bound_states):
            raise DomainError(f"{self.name}: bound states must be increasing")

    def __call__(self, x):
        return np.asarray(self.evaluate(np.asarray(x, dtype=float)), dtype=float)

    @property
    def decay_class(self) -> DecayClass:
        if self.domain is Domain.FULL_LINE:
            return DecayClass.FADDEEV_FULL_LINE
        return DecayClass.FADDEEV_HALF_LINE

    @property
    def bound_state_count(self) -> int:
        return len(self.bound_states)

    @property
    def ell(self) -> float:
        """ℓ with ℓ(ℓ+1) = c for the c/x² origin term (0 when regular)."""
        c = self.origin_singularity or 0.0
        return (-1.0 + math.sqrt(1.0 + 4.0 * c)) / 2.0

    def singularity_profile(self, xs: Iterable[float] = (1e-2, 1e-3, 1e-4)) -> np.ndarray:
        """V(x)·x² on a decreasing sequence of x; tends to c for a c/x² origin."""
        xs = np.asarray(list(xs), dtype=float)
        return self(xs) * xs**2


# MARK: Grid
@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing finite node set standing in for the domain (a, b)."""

    nodes: np.ndarray

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise DomainError(f"grid needs at least 3 nodes (got shape {nodes.shape})")
        if not np.all(np.isfinite(nodes)) or not np.all(np.diff(nodes) > 0):
            raise DomainError("grid nodes must be finite and strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @property
    def x_min(self) -> float:
        return float(self.nodes[0])

    @property
    def x_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def span(self) -> float:
        return self.x_max - self.x_min

    @property
    def step(self) -> float:
        return float(np.median(np.diff(self.nodes)))

    def index(self, x: float) -> int:
        """Index of the node nearest to ``x``."""
        return int(np.argmin(np.abs(self.nodes - x)))

    def same_as(self, other: "Grid") -> bool:
        return self is other or (
            self.nodes.shape == other.nodes.shape and np.array_equal(self.nodes, other.nodes)
        )


def default_x_max(energy: EnergyPoint | None, rates: Iterable[float | None],
                  settings: GridSettings) -> float:
    """max(f/Im κ, f/a_pot) with f = settings.decay_factor, capped at window_cap."""
    if settings.x_max is not None:
        return settings.x_max
    cands = [settings.decay_factor / r for r in rates if r]
    if energy is not None and energy.kappa.imag > 0:
        cands.append(settings.decay_factor / energy.kappa.imag)
    if not cands:
        return settings.window_cap
    return min(max(cands), settings.window_cap)


def make_grid(
    potential: Potential,
    energy: EnergyPoint | None = None,
    *,
    settings: GridSettings = GridSettings(),
    include: Iterable[float] = (),
    singular_origin: bool | None = None,
    extra_rates: Iterable[float | None] = (),
) -> Grid:
    """Build the default grid for ``potential`` at ``energy``.

    The full line is symmetric with 0 a node. The half line starts at 0, or at
    ``settings.origin_offset`` when the potential (or, via ``singular_origin``,
    its Darboux partner) is singular there. ``include`` points become nodes.
    """
    X = default_x_max(energy, [potential.decay_rate, *extra_rates], settings)
    step = settings.step
    if step is None:
        step = 0.01 if energy is None else min(0.01, 0.05 / abs(energy.kappa))
    n = max(2, int(math.ceil(X / step)))
    if potential.domain is Domain.FULL_LINE:
        nodes = np.linspace(-X, X, 2 * n + 1)
    else:
        nodes = np.linspace(0.0, X, n + 1)
        if singular_origin is None:
            singular_origin = potential.origin_singularity is not None
        if singular_origin:
            x0 = settings.origin_offset
            nodes = np.concatenate(([x0], nodes[nodes > x0]))
    for p in include:
        nodes = _merge_node(nodes, float(p), step)
    vprint(f"grid for {potential.name}: [{nodes[0]:g}, {nodes[-1]:g}], "
           f"{nodes.size} nodes, step {step:g}")
    return Grid(nodes)


def _merge_node(nodes: np.ndarray, p: float, step: float) -> np.ndarray:
    if p < nodes[0] or p > nodes[-1]:
        raise DomainError(f"point {p} outside the grid [{nodes[0]:g}, {nodes[-1]:g}]")
    i = int(np.argmin(np.abs(nodes - p)))
    d = abs(nodes[i] - p)
    if d <= 1e-12 * max(1.0, abs(p)):
        return nodes
    if d < 0.25 * step and 0 < i < nodes.size - 1:
        nodes = nodes.copy()
        nodes[i] = p
        return nodes
    return np.insert(nodes, int(np.searchsorted(nodes, p)), p)


# MARK: Solutions
@dataclass(frozen=True, eq=False)
class WaveSolution:
    """A solution sampled on a grid, stored rescaled as (g, h) with sign σ.

    ``vnodes`` holds the potential at the nodes; together with the equation it
    gives the derivatives of (g, h) for cubic Hermite interpolation.
    """

    grid: Grid
    energy: EnergyPoint
    kind: Kind
    g: np.ndarray
    h: np.ndarray
    sigma: int
    vnodes: np.ndarray
    potential: Potential
    boundary_record: str
    #: Largest relative Schrödinger residual over checked interior nodes.
    residual: float = 0.0

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def phase(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.sigma == 0:
            return np.ones_like(x, dtype=complex)
        with np.errstate(over="ignore"):
            return np.exp(self.sigma * 1j * self.energy.kappa * x)

    @property
    def values(self) -> tuple[np.ndarray, np.ndarray]:
        """True (f, f′) at the nodes."""
        p = self.phase(self.nodes)
        with np.errstate(over="ignore", invalid="ignore"):
            f, fp = self.g * p, self.h * p
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(fp))):
            raise SolutionOverflowError(
                f"{self.kind.value} solution overflows when unscaled; use scaled values"
            )
        return f, fp

    @cached_property
    def _splines(self) -> tuple[CubicHermiteSpline, CubicHermiteSpline]:
        ik = self.sigma * 1j * self.energy.kappa
        dg = self.h - ik * self.g
        dh = (self.vnodes - self.energy.E) * self.g - ik * self.h
        return (CubicHermiteSpline(self.nodes, self.g, dg),
                CubicHermiteSpline(self.nodes, self.h, dh))

    @property
    def reaches_origin(self) -> bool:
        """Half-line Jost solutions whose grid starts at x0 > 0 also cover [0, x0)."""
        return (self.potential.domain is Domain.HALF_LINE and self.grid.x_min > 0
                and self.kind in (Kind.LEFT, Kind.RIGHT))

    def scaled_at(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Rescaled (g, h) at arbitrary positions inside the grid (or in [0, x0))."""
        x = np.asarray(x, dtype=float)
        pad = 1e-12 * max(1.0, self.grid.span)
        lower = -pad if self.reaches_origin else self.grid.x_min - pad
        if np.any(x < lower) or np.any(x > self.grid.x_max + pad):
            lo = 0.0 if self.reaches_origin else self.grid.x_min
            raise DomainError(f"position outside the grid [{lo:g}, {self.grid.x_max:g}]")
        sg, sh = self._splines
        inside = x >= self.grid.x_min - pad
        if np.all(inside):
            return sg(x), sh(x)
        flat, inside = x.reshape(-1), inside.reshape(-1)
        g = np.empty(flat.shape, dtype=complex)
        h = np.empty(flat.shape, dtype=complex)
        g[inside], h[inside] = sg(flat[inside]), sh(flat[inside])
        g[~inside], h[~inside] = self._near_origin(flat[~inside])
        return g.reshape(x.shape), h.reshape(x.shape)

    def _near_origin(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # f = x^m q(x) with q smooth: m = ℓ+1 (left, regular) or −ℓ (right)
        ell = self.potential.ell
        m = ell + 1.0 if self.kind is Kind.LEFT else -ell
        xs = self.nodes[:ORIGIN_NODES]
        q, dq = origin_extend(xs, self.g[:ORIGIN_NODES] * xs ** (-m), x, ORIGIN_NODES)
        with np.errstate(divide="ignore", invalid="ignore"):
            xm = x**m
            g = xm * q
            dg = xm * dq if m == 0 else m * x ** (m - 1) * q + xm * dq
            return g, dg + self.sigma * 1j * self.energy.kappa * g

    def at(self, x) -> tuple[np.ndarray, np.ndarray]:
        """True (f, f′) at arbitrary positions inside the grid."""
        g, h = self.scaled_at(x)
        p = self.phase(x)
        return g * p, h * p


def schrodinger_residual(grid: Grid, g: np.ndarray, h: np.ndarray, sigma: int,
                         vnodes: np.ndarray, energy: EnergyPoint,
                         potential: Potential) -> float:
    """Largest local residual of −f″ + (V − E)f = 0 in integrated three-node form.

    (f′_{i+1} − f′_{i−1}) − ∫(V − E)f dx over [x_{i−1}, x_{i+1}] (non-uniform
    Simpson), per unit length, relative to 1 + max|f| over the three nodes.
    """
    x = grid.nodes
    if x.size < 3:
        return 0.0
    ik = sigma * 1j * energy.kappa
    xm, xc, xp = x[:-2], x[1:-1], x[2:]
    pm, pp = np.exp(ik * (xm - xc)), np.exp(ik * (xp - xc))
    fm, fc, fp = g[:-2] * pm, g[1:-1], g[2:] * pp
    dm, dp = h[:-2] * pm, h[2:] * pp
    Fm = (vnodes[:-2] - energy.E) * fm
    Fc = (vnodes[1:-1] - energy.E) * fc
    Fp = (vnodes[2:] - energy.E) * fp
    h0, h1 = xc - xm, xp - xc
    simpson = (h0 + h1) / 6 * (
        (2 - h1 / h0) * Fm + (h0 + h1) ** 2 / (h0 * h1) * Fc + (2 - h0 / h1) * Fp
    )
    scale = 1.0 + np.maximum(np.maximum(np.abs(fm), np.abs(fc)), np.abs(fp))
    r = np.abs((dp - dm) - simpson) / (h0 + h1) / scale
    mask = np.isfinite(r)
    if potential.origin_singularity is not None:
        mask &= xc >= SINGULAR_CORE
    return float(np.max(r[mask])) if np.any(mask) else 0.0


def assemble_solution(grid: Grid, potential: Potential, energy: EnergyPoint, kind: Kind,
            g: np.ndarray, h: np.ndarray, sigma: int, record: str,
            tol: Tolerances) -> WaveSolution:
    vnodes = potential(grid.nodes)
    res = schrodinger_residual(grid, g, h, sigma, vnodes, energy, potential)
    if res > tol.residual_tol:
        warn(f"{kind.value} solution of {potential.name} at E={energy.E:.6g}: "
             f"residual {res:.3g} above {tol.residual_tol:g}")
    return WaveSolution(grid=grid, energy=energy, kind=kind, g=g, h=h, sigma=sigma,
                        vnodes=vnodes, potential=potential, boundary_record=record,
                        residual=res)


def _check_domain(potential: Potential, grid: Grid) -> None:
    if potential.domain is Domain.HALF_LINE:
        if grid.x_min < 0:
            raise DomainError(f"{potential.name} lives on the half line; grid starts at "
                              f"{grid.x_min:g}")
        if potential.origin_singularity is not None and grid.x_min <= 0:
            raise DomainError(f"{potential.name} is singular at 0; grid must start at x0 > 0")
    elif grid.x_min >= 0 or grid.x_max <= 0:
        raise DomainError(f"{potential.name} lives on the full line; grid "
                          f"[{grid.x_min:g}, {grid.x_max:g}] does not straddle 0")


def _integrate(potential: Potential, energy: EnergyPoint, grid: Grid, sigma: int,
               x_start: float, y0: tuple[complex, complex], tol: Tolerances) -> tuple:
    E, kappa = energy.E, energy.kappa
    ik = sigma * 1j * kappa
    V = potential.evaluate

    def rhs(x, y):
        v = float(V(x))
        return np.array([y[1] - ik * y[0], (v - E) * y[0] - ik * y[1]])

    rate = potential.decay_rate or 1.0
    max_step = min(0.1, 0.5 / max(abs(kappa), 1e-3), 0.5 / rate)
    forward = x_start <= grid.x_min
    t_eval = grid.nodes if forward else grid.nodes[::-1]
    x_end = grid.x_max if forward else grid.x_min
    sol = solve_ivp(rhs, (x_start, x_end), np.asarray(y0, dtype=complex), method="DOP853",
                    t_eval=t_eval, rtol=tol.ode_rtol, atol=tol.ode_atol, max_step=max_step)
    if not sol.success:
        raise ConvergenceError(f"integration of {potential.name} at E={E} failed: "
                               f"{sol.message}")
    if is_verbose():
        vprint(f"{potential.name} sigma={sigma:+d} E={E:.6g}: {sol.nfev} rhs calls")
    y = sol.y if forward else sol.y[:, ::-1]
    if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > tol.magnitude_cap:
        raise SolutionOverflowError(
            f"rescaled solution of {potential.name} exceeds {tol.magnitude_cap:g} at E={E}"
        )
    return y[0].copy(), y[1].copy()


def solve_left(V: Potential, E: EnergyPoint, g: Grid, tol: Tolerances = Tolerances()
               ) -> WaveSolution:
    """Left solution: f_l → e^{−iκx} at x_min (full line) or f_l(0)=0, f_l′(0)=1."""
    _check_domain(V, g)
    sigma = -1
    if V.domain is Domain.FULL_LINE:
        if abs(float(V(g.x_min))) > tol.residual_tol:
            warn(f"|V(x_min)| = {abs(float(V(g.x_min))):.3g} for {V.name}: "
                 f"window too short for Jost asymptotics")
        x_start, y0 = g.x_min, (1.0 + 0j, sigma * 1j * E.kappa)
        record = f"f_l ~ exp(-i kappa x) at x_min={g.x_min:g}"
    elif V.origin_singularity is None:
        x_start, y0 = 0.0, (0j, 1.0 + 0j)
        record = "f_l(0)=0, f_l'(0)=1"
    else:
        c = V.origin_singularity
        x0 = g.x_min
        s = V.ell + 1.0
        v0 = float(V(x0)) - c / x0**2
        b2 = (v0 - E.E) / (4 * s + 2)
        f0 = x0**s * (1 + b2 * x0**2)
        fp0 = x0 ** (s - 1) * (s + (s + 2) * b2 * x0**2)
        p = cmath.exp(-sigma * 1j * E.kappa * x0)
        x_start, y0 = x0, (f0 * p, fp0 * p)
        record = f"f_l ~ x^{s:g} from x0={x0:g} (c={c:g})"
    gg, hh = _integrate(V, E, g, sigma, x_start, y0, tol)
    return assemble_solution(g, V, E, Kind.LEFT, gg, hh, sigma, record, tol)


def solve_right(V: Potential, E: EnergyPoint, g: Grid, tol: Tolerances = Tolerances()
                ) -> WaveSolution:
    """Right solution: f_r → e^{iκx}, integrated leftward from x_max."""
    _check_domain(V, g)
    if abs(float(V(g.x_max))) > tol.residual_tol:
        warn(f"|V(x_max)| = {abs(float(V(g.x_max))):.3g} for {V.name}: "
             f"window too short for Jost asymptotics")
    sigma = 1
    y0 = (1.0 + 0j, sigma * 1j * E.kappa)
    gg, hh = _integrate(V, E, g, sigma, g.x_max, y0, tol)
    record = f"f_r ~ exp(i kappa x) at x_max={g.x_max:g}"
    return assemble_solution(g, V, E, Kind.RIGHT, gg, hh, sigma, record, tol)


def sample_state(grid: Grid, potential: Potential, energy: EnergyPoint, f: np.ndarray,
                 fp: np.ndarray, kind: Kind = Kind.STATE, record: str = "sampled",
                 tol: Tolerances = Tolerances()) -> WaveSolution:
    """Wrap closed-form samples (f, f′) at the nodes as an unscaled WaveSolution."""
    f = np.asarray(f, dtype=complex)
    fp = np.asarray(fp, dtype=complex)
    if f.shape != grid.nodes.shape or fp.shape != grid.nodes.shape:
        raise GridMismatch("sampled values do not match the grid")
    return assemble_solution(grid, potential, energy, kind, f, fp, 0, record, tol)


def wronskian_profile(fr: WaveSolution, fl: WaveSolution, floor: float = 1e-8
                      ) -> tuple[complex, float]:
    """W = f_r f_l′ − f_r′ f_l at every node: (value at the midpoint, max relative deviation)."""
    if not fr.grid.same_as(fl.grid):
        raise GridMismatch("Wronskian of solutions on different grids")
    if fr.energy.E != fl.energy.E:
        raise GridMismatch(f"Wronskian of solutions at different energies "
                           f"({fr.energy.E} vs {fl.energy.E})")
    raw = fr.g * fl.h - fr.h * fl.g
    s = fr.sigma + fl.sigma
    if s:
        with np.errstate(over="ignore", invalid="ignore"):
            raw = raw * np.exp(s * 1j * fr.energy.kappa * fr.nodes)
    W0 = complex(raw[raw.size // 2])
    if not cmath.isfinite(W0) or abs(W0) < floor * abs(fr.energy.kappa):
        raise DegenerateError(f"|W0| = {abs(W0):.3g} below floor at E={fr.energy.E}: "
                              f"energy is numerically a spectral point")
    with np.errstate(invalid="ignore"):
        dev = np.abs(raw - W0) / abs(W0)
    return W0, float(np.nanmax(dev))
