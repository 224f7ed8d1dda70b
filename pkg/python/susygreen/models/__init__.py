from __future__ import annotations

from importlib.metadata import entry_points

from susygreen.errors import ConfigError
from susygreen.models.base import ReferenceModel, Transform
from susygreen.models.csch import CschModel
from susygreen.models.free import FreeHalfLine, FreeLine, IsospectralLine
from susygreen.models.soliton import SolitonDeleted, SolitonModel
from susygreen.schrodinger import EnergyPoint, momentum_of

#: Entry-point group out-of-tree packages use to register reference models.
ENTRY_POINT_GROUP = "susygreen.models"

_BUILTINS: dict[str, type[ReferenceModel]] = {
    m.name: m
    for m in (FreeLine, FreeHalfLine, SolitonModel, CschModel, IsospectralLine, SolitonDeleted)
}


def discover_models() -> dict[str, type[ReferenceModel]]:
    """Return all available reference models keyed by name (built-ins + plugins).

    Plugins override built-ins of the same name.
    """
    models: dict[str, type[ReferenceModel]] = dict(_BUILTINS)
    for ep in entry_points(group=ENTRY_POINT_GROUP):
        models[ep.name] = ep.load()
    return models


def get_model(name: str) -> type[ReferenceModel]:
    """Look up a model class by name; ConfigError lists what is available."""
    models = discover_models()
    if name not in models:
        avail = ", ".join(sorted(models)) or "(none)"
        raise ConfigError(f"Unknown model '{name}'. Available: {avail}")
    return models[name]


def reference_green(name: str, x, y, E: complex | EnergyPoint, a: float = 1.0):
    """Closed-form kernel of model ``name`` at (x, y) and energy E."""
    point = E if isinstance(E, EnergyPoint) else momentum_of(E)
    return get_model(name)(a=a).green(x, y, point)


__all__ = [
    "ReferenceModel",
    "Transform",
    "FreeLine",
    "FreeHalfLine",
    "IsospectralLine",
    "SolitonModel",
    "SolitonDeleted",
    "CschModel",
    "ENTRY_POINT_GROUP",
    "discover_models",
    "get_model",
    "reference_green",
]
