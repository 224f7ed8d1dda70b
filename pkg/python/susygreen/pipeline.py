"""From a model (or parent + α + u selector) to G₀, the transform and G₁ at one energy."""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass

from susygreen.config import DEFAULT_SETTINGS, RunConfig, Settings
from susygreen.darboux import Case, DarbouxData, USpec, build_transform, green1_from_pair
from susygreen.errors import ConfigError
from susygreen.greenfn import GreenFunction, SolverContext
from susygreen.models import ReferenceModel, get_model
from susygreen.schrodinger import Domain, EnergyPoint, Potential, default_x_max, make_grid

#: Parents whose partners obey the closed trace forms.
FREE_PARENTS = ("free-line", "free-half-line")


@dataclass(frozen=True, eq=False)
class Setup:
    """What to compute with: h₀, the optional transform and the closed-form oracles.

    ``model`` is the closed form of the kernel the pipeline ends with (the
    partner when a transform is set, h₀ itself otherwise).
    """

    V0: Potential
    alpha: float | None = None
    u_spec: USpec | None = None
    expect_case: Case | None = None
    model: ReferenceModel | None = None
    parent_model: ReferenceModel | None = None

    @property
    def has_transform(self) -> bool:
        return self.alpha is not None

    @property
    def closed_trace(self) -> bool:
        """Whether the closed trace forms apply: a registry partner model or a free parent."""
        if self.model is not None and self.model.transform is not None:
            return True
        parent = self.parent_model
        return parent is not None and parent.name in FREE_PARENTS


def setup_from_model(model: ReferenceModel) -> Setup:
    t = model.transform
    if t is None:
        return Setup(V0=model.potential(), model=model)
    parent = model.parent()
    return Setup(V0=parent.potential(), alpha=t.alpha, u_spec=t.u_spec, expect_case=t.case,
                  model=model, parent_model=parent)


def setup_from_parent(parent_name: str, a: float, alpha: float, u_spec: str) -> Setup:
    parent = get_model(parent_name)(a=a)
    return Setup(V0=parent.potential(), alpha=float(alpha), u_spec=USpec.parse(u_spec),
                 parent_model=parent)


def setup_from_config(cfg: RunConfig, args: argparse.Namespace | None = None) -> Setup:
    """Resolve the request; with parsed ``args`` the model builds itself via ``from_args``."""
    if cfg.model is not None:
        if cfg.parent is not None:
            raise ConfigError("--model and --parent are mutually exclusive")
        cls = get_model(cfg.model)
        return setup_from_model(cls(a=cfg.a) if args is None else cls.from_args(args))
    if cfg.parent is None:
        raise ConfigError("select a model with --model or a transform with --parent")
    if cfg.alpha is None or cfg.u_spec is None:
        raise ConfigError("--parent needs --alpha and --u-spec")
    return setup_from_parent(cfg.parent, cfg.a, cfg.alpha, cfg.u_spec)


@dataclass(frozen=True, eq=False)
class State:
    setup: Setup
    energy: EnergyPoint
    ctx: SolverContext
    G0: GreenFunction
    d: DarbouxData | None = None
    G1: GreenFunction | None = None


def _extra_rates(setup: Setup) -> list[float]:
    # u decays like e^{−√(−α)|x|}
    return [math.sqrt(-setup.alpha)] if setup.has_transform and setup.alpha < 0 else []


def truncation_bound(setup: Setup, energy: EnergyPoint,
                     settings: Settings = DEFAULT_SETTINGS) -> float:
    """x_max of the grid ``build_state`` uses at ``energy``."""
    return default_x_max(energy, [setup.V0.decay_rate, *_extra_rates(setup)], settings.grid)


def build_state(setup: Setup, energy: EnergyPoint, settings: Settings = DEFAULT_SETTINGS,
                include=()) -> State:
    """Grid, G₀ and (with a transform) DarbouxData and G₁ at ``energy``."""
    V0 = setup.V0
    half = V0.domain is Domain.HALF_LINE
    grid = make_grid(V0, energy, settings=settings.grid, include=include,
                     singular_origin=True if (half and setup.has_transform) else None,
                     extra_rates=_extra_rates(setup))
    ctx = SolverContext(V0, grid, settings.tol)
    G0 = ctx.green(energy)
    if not setup.has_transform:
        return State(setup=setup, energy=energy, ctx=ctx, G0=G0)
    d = build_transform(V0, setup.alpha, setup.u_spec, grid, settings.tol, setup.expect_case)
    G1 = green1_from_pair(d, G0, settings.tol)
    return State(setup=setup, energy=energy, ctx=ctx, G0=G0, d=d, G1=G1)
