from __future__ import annotations

import argparse
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from susygreen.darboux import Case, USpec
from susygreen.errors import ConfigError, DomainError
from susygreen.schrodinger import EnergyPoint, Potential


@dataclass(frozen=True)
class Transform:
    """How a partner model arises: its parent, α, the u selector and the expected case."""

    parent: str
    alpha: float
    u_spec: USpec
    case: Case


class ReferenceModel(ABC):
    """A solvable model with closed-form solutions, kernel and eigenfunctions.

    Partner models (``transform`` set) describe h₁ for a transform of their
    parent; their closed forms are the oracles the numerical pipeline is checked
    against. Models are discovered as plugins via the ``susygreen.models``
    entry-point group, so out-of-tree packages can register more of them.
    """

    #: Short identifier used to select the model on the command line.
    name: str = "base"
    #: 'line' (scattering states for ±k) or 'half' (k > 0 only).
    continuum: str = "line"

    def __init__(self, a: float = 1.0) -> None:
        if not a > 0:
            raise ConfigError(f"model parameter a must be > 0 (got {a!r})")
        self.a = float(a)

    @classmethod
    def add_cli_args(cls, parser: argparse.ArgumentParser) -> None:
        """Register model-specific command-line arguments (optional)."""

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "ReferenceModel":
        return cls(a=getattr(args, "a", 1.0))

    @property
    def transform(self) -> Transform | None:
        return None

    def parent(self) -> "ReferenceModel | None":
        t = self.transform
        if t is None:
            return None
        from susygreen.models import get_model

        return get_model(t.parent)(a=self.a)

    @abstractmethod
    def potential(self) -> Potential:
        raise NotImplementedError

    @abstractmethod
    def left(self, x, E: EnergyPoint) -> tuple[np.ndarray, np.ndarray]:
        """(f_l, f_l′) at x."""
        raise NotImplementedError

    @abstractmethod
    def right(self, x, E: EnergyPoint) -> tuple[np.ndarray, np.ndarray]:
        """(f_r, f_r′) at x."""
        raise NotImplementedError

    @abstractmethod
    def wronskian(self, E: EnergyPoint) -> complex:
        """W = f_r f_l′ − f_r′ f_l."""
        raise NotImplementedError

    @abstractmethod
    def scattering_state(self, k, x) -> np.ndarray:
        """Delta-normalized eigenfunction at momentum k (vectorized over k)."""
        raise NotImplementedError

    def bound_states(self) -> list[tuple[float, object]]:
        """[(E_n, φ_n)] with φ_n a vectorized real callable."""
        return []

    def _check_position(self, x) -> None:
        if self.continuum == "half" and np.any(np.asarray(x) < 0):
            raise DomainError(f"{self.name} lives on x >= 0")

    def green(self, x, y, E: EnergyPoint):
        """Closed-form kernel f_l(min)·f_r(max)/W."""
        self._check_position(x)
        self._check_position(y)
        lo, hi = np.minimum(x, y), np.maximum(x, y)
        out = self.left(lo, E)[0] * self.right(hi, E)[0] / self.wronskian(E)
        return out[()] if np.ndim(out) == 0 else out
