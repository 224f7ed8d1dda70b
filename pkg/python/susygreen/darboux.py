"""First-order Darboux (SUSY) transformation of h₀ = −d²/dx² + V₀.

A nodeless real solution u of (h₀ − α)u = 0 gives the superpotential
w = u′/u, the intertwiner L = −d/dx + w and the partner h₁ = LL⁺ + α with
V₁ = V₀ − 2w′. Everything is evaluated on the nodes of one shared grid and
w′ comes from the Riccati identity w′ = (V₀ − α) − w², so nothing is
differentiated numerically.

The partner resolvent is assembled from the transformed left/right pair
(Lf_l, Lf_r) with Wronskian (E − α)W₀; at E = α it is either regular (cases
i and iii, see ``green1_at_alpha``) or has a simple pole whose residue is the
new ground state (case ii, see ``residue_at_alpha``).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicHermiteSpline

from susygreen.config import Tolerances
from susygreen.errors import (
    CaseError,
    ConvergenceError,
    DegenerateError,
    DivisionError,
    DomainError,
    GridMismatch,
    NodeError,
    ThresholdError,
)
from susygreen.greenfn import GreenFunction, Label, SolverContext
from susygreen.quadrature import extrapolate_to_zero
from susygreen.schrodinger import (
    Domain,
    EnergyPoint,
    Grid,
    Potential,
    WaveSolution,
    assemble_solution,
    momentum_of,
    solve_left,
    solve_right,
    wronskian_profile,
)
from susygreen.utils import vprint, warn


class Case(enum.Enum):
    REMOVE_GROUND_STATE = "i"
    ADD_GROUND_STATE = "ii"
    ISOSPECTRAL = "iii"

    @property
    def delta(self) -> int:
        """+1 when the transform removes a level, −1 when it adds one, 0 otherwise."""
        return {"i": 1, "ii": -1, "iii": 0}[self.value]


class USpec(enum.Enum):
    """Which real solution at E = α becomes the factorization solution u."""

    LEFT = "left"
    RIGHT = "right"
    EVEN = "even"
    ODD = "odd"
    BOUND = "bound"

    @classmethod
    def parse(cls, text: str) -> "USpec":
        try:
            return cls(text)
        except ValueError:
            names = ", ".join(s.value for s in cls)
            raise CaseError(f"unknown u selector {text!r} (expected one of {names})") from None


@dataclass(frozen=True, eq=False)
class DarbouxData:
    """The transform at α: u stored as mantissa·exp(log_scale), w, w′ and V₁."""

    alpha: float
    grid: Grid
    potential0: Potential
    u_spec: USpec
    mantissa: np.ndarray
    dmantissa: np.ndarray
    log_scale: np.ndarray
    w: np.ndarray
    wp: np.ndarray
    case: Case
    V1: Potential
    v0nodes: np.ndarray
    v1nodes: np.ndarray
    #: Largest Schrödinger residual of the solutions u was built from.
    residual: float = 0.0

    @property
    def a(self) -> float:
        return math.sqrt(-self.alpha)

    @property
    def u(self) -> tuple[np.ndarray, np.ndarray]:
        """(u, u′) at the nodes; may be inf where u outgrows a double."""
        with np.errstate(over="ignore"):
            scale = np.exp(self.log_scale)
        return self.mantissa * scale, self.dmantissa * scale


# MARK: Building the transform
def _check_threshold(V0: Potential, alpha: float) -> None:
    if V0.bound_states:
        E0 = V0.bound_states[0]
        if alpha > E0 + 1e-12 * (1 + abs(E0)):
            raise ThresholdError(f"alpha={alpha} lies above the ground state E0={E0} "
                                 f"of {V0.name}")
    elif not alpha < 0:
        raise ThresholdError(f"alpha={alpha} must be below the continuum threshold 0")


def _real(z: np.ndarray, what: str) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(z.real))))
    if np.max(np.abs(z.imag)) > 1e-8 * scale:
        warn(f"{what} has an imaginary part {np.max(np.abs(z.imag)):.3g} at real alpha")
    return np.ascontiguousarray(z.real)


def _compose_u(V0: Potential, alpha: float, u_spec: USpec, g: Grid, tol: Tolerances):
    """Return (mantissa, derivative mantissa, log-scale, residual) for u."""
    energy = momentum_of(alpha)
    a = energy.kappa.imag
    x = g.nodes
    fl = fr = None
    if u_spec is not USpec.RIGHT:
        fl = solve_left(V0, energy, g, tol)
    if u_spec is not USpec.LEFT:
        fr = solve_right(V0, energy, g, tol)
    if u_spec is USpec.LEFT:
        return _real(fl.g, "u"), _real(fl.h, "u'"), a * x, fl.residual
    if u_spec is USpec.RIGHT:
        return _real(fr.g, "u"), _real(fr.h, "u'"), -a * x, fr.residual
    gl, hl, gr, hr = (_real(v, "u") for v in (fl.g, fl.h, fr.g, fr.h))
    residual = max(fl.residual, fr.residual)
    if u_spec in (USpec.EVEN, USpec.ODD):
        if V0.domain is Domain.HALF_LINE:
            raise CaseError("even/odd combinations are only defined on the full line")
        sign = 1.0 if u_spec is USpec.EVEN else -1.0
        s = a * np.abs(x)
        el, er = np.exp(a * x - s), np.exp(-a * x - s)
        return gl * el + sign * gr * er, hl * el + sign * hr * er, s, residual
    # bound: f_l on the left half, f_r matched to it at the midpoint node on the right
    if not any(abs(alpha - En) <= 1e-10 * (1 + abs(En)) for En in V0.bound_states):
        raise CaseError(f"alpha={alpha} is not a bound-state energy of {V0.name}")
    m = x.size // 2
    wl, wr = hl[m] / gl[m], hr[m] / gr[m]
    if abs(wl - wr) > 1e-6 * (1 + abs(wl)):
        raise CaseError(f"left and right solutions at alpha={alpha} do not match "
                        f"(log-derivatives {wl:.8g} vs {wr:.8g})")
    ratio = gl[m] / gr[m]
    right = slice(m + 1, None)
    mant, dmant = gl.copy(), hl.copy()
    scale = a * x
    mant[right] = math.copysign(1.0, ratio) * gr[right]
    dmant[right] = math.copysign(1.0, ratio) * hr[right]
    scale = scale.copy()
    scale[right] = -a * x[right] + 2 * a * x[m] + math.log(abs(ratio))
    return mant, dmant, scale, residual


def _tail_ratio(x: np.ndarray, logv: np.ndarray, lo: float, mid: float, hi: float) -> float:
    """∫ over [mid, hi] / ∫ over [lo, mid] of exp(logv) (windows ordered outward)."""
    inner = (x >= min(lo, mid)) & (x <= max(lo, mid))
    outer = (x >= min(mid, hi)) & (x <= max(mid, hi))
    if inner.sum() < 2 or outer.sum() < 2:
        raise DomainError("grid too short to judge normalizability")
    top = max(np.max(logv[inner]), np.max(logv[outer]))
    i_in = abs(trapezoid(np.exp(logv[inner] - top), x[inner]))
    i_out = abs(trapezoid(np.exp(logv[outer] - top), x[outer]))
    return math.inf if i_in == 0 else i_out / i_in


def _normalizable(x: np.ndarray, logv: np.ndarray, domain: Domain) -> bool:
    X = x[-1]
    ok = _tail_ratio(x, logv, X / 4, X / 2, X) < 0.5
    if domain is Domain.FULL_LINE:
        Xl = x[0]
        ok = ok and _tail_ratio(x, logv, Xl / 4, Xl / 2, Xl) < 0.5
    return ok


def build_transform(V0: Potential, alpha: float, u_spec: USpec | str, g: Grid,
                    tol: Tolerances = Tolerances(), expect_case: Case | None = None
                    ) -> DarbouxData:
    """Build the transform of ``V0`` at ``alpha`` with the u picked by ``u_spec``.

    The case follows from u: normalizable u is the ground state (i), u nodeless
    with normalizable 1/u adds a level (ii), anything else is isospectral (iii).
    """
    alpha = float(alpha)
    u_spec = USpec.parse(u_spec) if isinstance(u_spec, str) else u_spec
    _check_threshold(V0, alpha)
    half = V0.domain is Domain.HALF_LINE
    if half and expect_case is Case.ADD_GROUND_STATE:
        raise CaseError("a ground state cannot be added on the half line")
    if half and g.x_min <= 0:
        raise DomainError("a half-line transform needs a grid starting at x0 > 0")

    mant, dmant, scale, residual = _compose_u(V0, alpha, u_spec, g, tol)
    x = g.nodes
    if half:
        x0 = g.x_min
        if abs(mant[0]) > 10 * x0 * abs(dmant[0]) + 1e-12:
            raise CaseError(f"u(0) != 0 violates the origin boundary condition "
                            f"(u(x0)/u'(x0) = {mant[0] / dmant[0]:.3g} at x0={x0:g})")
    inner = mant[1:-1]
    signs = np.sign(inner)
    if np.any(signs == 0) or np.any(signs != signs[0]):
        bad = int(np.argmax((signs != signs[0]) | (signs == 0))) + 1
        raise NodeError(f"u changes sign near x={x[bad]:.6g}")

    log_abs = np.log(np.abs(mant)) + scale
    if _normalizable(x, 2 * log_abs, V0.domain):
        case = Case.REMOVE_GROUND_STATE
    elif not half and _normalizable(x, -2 * log_abs, V0.domain):
        case = Case.ADD_GROUND_STATE
    else:
        case = Case.ISOSPECTRAL
    if expect_case is not None and case is not expect_case:
        raise CaseError(f"u selector {u_spec.value!r} at alpha={alpha} gives case "
                        f"({case.value}), expected ({expect_case.value})")

    v0 = V0(x)
    w = dmant / mant
    wp = (v0 - alpha) - w**2
    v1 = -v0 + 2 * alpha + 2 * w**2
    spline = CubicHermiteSpline(x, w, wp)

    def evaluate(xx, _s=spline, _V0=V0, _alpha=alpha):
        return -_V0(xx) + 2 * _alpha + 2 * _s(xx) ** 2

    if case is Case.REMOVE_GROUND_STATE:
        levels = tuple(V0.bound_states[1:])
    elif case is Case.ADD_GROUND_STATE:
        levels = (alpha, *V0.bound_states)
    else:
        levels = tuple(V0.bound_states)
    V1 = Potential(
        name=f"{V0.name}~({u_spec.value}, alpha={alpha:g})",
        domain=V0.domain,
        evaluate=evaluate,
        origin_singularity=(V0.ell + 1) * (V0.ell + 2) if half else None,
        bound_states=levels,
        decay_rate=V0.decay_rate or math.sqrt(-alpha),
    )
    vprint(f"transform of {V0.name} at alpha={alpha:g}: case ({case.value}), "
           f"u residual {residual:.2e}")
    return DarbouxData(alpha=alpha, grid=g, potential0=V0, u_spec=u_spec, mantissa=mant,
                       dmantissa=dmant, log_scale=scale, w=w, wp=wp, case=case, V1=V1,
                       v0nodes=v0, v1nodes=v1, residual=residual)


# MARK: Intertwiner
def _transform_parts(d: DarbouxData, s: WaveSolution) -> tuple[np.ndarray, np.ndarray]:
    if not d.grid.same_as(s.grid):
        raise GridMismatch("solution and transform live on different grids")
    if s.potential is not d.potential0 and not np.allclose(s.vnodes, d.v0nodes):
        raise GridMismatch(f"{s.potential.name} is not the potential {d.potential0.name} "
                           f"the transform was built from")
    E = s.energy.E
    g1 = -s.h + d.w * s.g
    h1 = (E - d.v0nodes + d.wp) * s.g + d.w * s.h
    return g1, h1


def apply_L(d: DarbouxData, s: WaveSolution, tol: Tolerances = Tolerances()) -> WaveSolution:
    """Lf = −f′ + wf with (Lf)′ = (E − V₀ + w′)f + wf′; kind and scaling kept."""
    g1, h1 = _transform_parts(d, s)
    return assemble_solution(d.grid, d.V1, s.energy, s.kind, g1, h1, s.sigma,
                             f"L[{s.boundary_record}]", tol)


def normalize_chi(d: DarbouxData, s: WaveSolution, E_n: float,
                  tol: Tolerances = Tolerances()) -> WaveSolution:
    """(E_n − α)^{−1/2}·Lψ, the normalized partner eigenfunction."""
    if abs(E_n - d.alpha) <= 1e-14 * max(1.0, abs(d.alpha)):
        raise DivisionError(f"E_n = alpha = {d.alpha}: Lψ is not normalizable")
    chi = apply_L(d, s, tol)
    factor = 1 / cmath.sqrt(E_n - d.alpha)
    return replace(chi, g=chi.g * factor, h=chi.h * factor,
                   boundary_record=f"chi[{s.boundary_record}]")


def intertwining_residual(d: DarbouxData, s: WaveSolution) -> float:
    """Schrödinger residual of Lf under h₁."""
    return apply_L(d, s).residual


def factorization_residual(d: DarbouxData, s: WaveSolution) -> float:
    """max|L⁺Lf − (E − α)f| relative to max|(E − α)f|, with L⁺ = d/dx + w."""
    g1, h1 = _transform_parts(d, s)
    target = (s.energy.E - d.alpha) * s.g
    scale = float(np.max(np.abs(target)))
    return float(np.max(np.abs(h1 + d.w * g1 - target)) / max(scale, 1e-300))


# MARK: Partner resolvent
def green1_from_pair(d: DarbouxData, G0: GreenFunction,
                     tol: Tolerances = Tolerances()) -> GreenFunction:
    """G₁ = Lf_l(min)·Lf_r(max)/((E − α)W₀)."""
    E = G0.energy
    W1 = (E.E - d.alpha) * G0.W0
    if abs(W1) < tol.wronskian_floor * abs(E.kappa):
        raise DegenerateError(f"(E - alpha)W0 vanishes at E={E.E} (alpha={d.alpha})")
    fl1 = apply_L(d, G0.fl, tol)
    fr1 = apply_L(d, G0.fr, tol)
    W1_pair, dev = wronskian_profile(fr1, fl1, tol.wronskian_floor)
    gap = abs(W1_pair - W1) / abs(W1)
    if gap > tol.wronskian_tol:
        warn(f"W(Lf_r, Lf_l) = {W1_pair:.10g} differs from (E - alpha)W0 = {W1:.10g} "
             f"by {gap:.2e} at E={E.E:.6g}")
    return GreenFunction(fl=fl1, fr=fr1, W0=W1, energy=E, label=Label.G1, deviation=dev,
                         wronskian_check=gap)


def green1(d: DarbouxData, ctx: SolverContext, energy: EnergyPoint) -> GreenFunction:
    return green1_from_pair(d, ctx.green(energy), ctx.tol)


def _require(d: DarbouxData, allowed: tuple[Case, ...], what: str) -> None:
    if d.case not in allowed:
        raise CaseError(f"{what} is undefined for case ({d.case.value})")


@dataclass(frozen=True, eq=False)
class AlphaKernel:
    """G₁(x, y, α) from ∂_E of the numerator kernel Lf_l·Lf_r/W₀ at E = α."""

    alpha: float
    step: float
    #: Numerator kernels at α + h, α − h, α + 2h, α − 2h.
    numerators: tuple[GreenFunction, GreenFunction, GreenFunction, GreenFunction]

    def __call__(self, x, y):
        np_, nm, n2p, n2m = (N(x, y) for N in self.numerators)
        h = self.step
        d1 = (np_ - nm) / (2 * h)
        d2 = (n2p - n2m) / (4 * h)
        return (4 * d1 - d2) / 3


def green1_at_alpha(d: DarbouxData, ctx: SolverContext, h_E: float = 1e-3) -> AlphaKernel:
    """Evaluator for G₁ at E = α (cases i and iii, where it is regular)."""
    _require(d, (Case.REMOVE_GROUND_STATE, Case.ISOSPECTRAL), "G1 at E = alpha")
    if not ctx.grid.same_as(d.grid):
        raise GridMismatch("solver context and transform live on different grids")
    nums = []
    for delta in (h_E, -h_E, 2 * h_E, -2 * h_E):
        G0 = ctx.green(momentum_of(d.alpha + delta))
        fl1 = apply_L(d, G0.fl, ctx.tol)
        fr1 = apply_L(d, G0.fr, ctx.tol)
        nums.append(GreenFunction(fl=fl1, fr=fr1, W0=G0.W0, energy=G0.energy, label=Label.G1))
    return AlphaKernel(alpha=d.alpha, step=h_E, numerators=tuple(nums))


def default_deltas(alpha: float, n: int = 6) -> list[float]:
    d0 = 0.1 * abs(alpha)
    return [d0 * 0.5**j for j in range(n)]


def green1_limit(d: DarbouxData, ctx: SolverContext, x: float, y: float,
                 deltas=None) -> complex:
    """lim G₁(x, y, E) as E → α from below, by polynomial extrapolation in α − E."""
    _require(d, (Case.REMOVE_GROUND_STATE, Case.ISOSPECTRAL), "the E -> alpha limit of G1")
    deltas = default_deltas(d.alpha) if deltas is None else list(deltas)
    vals = [green1(d, ctx, momentum_of(d.alpha - dl))(x, y) for dl in deltas]
    est, change = extrapolate_to_zero(deltas, vals)
    vprint(f"G1({x:g},{y:g}) -> {est:.10g} as E -> alpha (last change {change:.2e})")
    return est


def residue_at_alpha(d: DarbouxData, ctx: SolverContext, x: float, y: float,
                     deltas=None, tol: float = 1e-6) -> complex:
    """Coefficient of 1/(α − E) in G₁(x, y, E): φ₀(x)φ₀(y) for the added level."""
    _require(d, (Case.ADD_GROUND_STATE,), "the residue at alpha")
    deltas = default_deltas(d.alpha) if deltas is None else list(deltas)
    vals = [dl * green1(d, ctx, momentum_of(d.alpha - dl))(x, y) for dl in deltas]
    est, change = extrapolate_to_zero(deltas, vals)
    if change > tol * (1 + abs(est)):
        raise ConvergenceError(f"residue extrapolation unsettled: last change {change:.3g}")
    return est
