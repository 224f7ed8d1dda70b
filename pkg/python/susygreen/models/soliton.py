"""One-soliton well V = −2a² sech²(ax), partner of the free line at α = −a².

With f_κ(x) = e^{−iκx}(iκ + a tanh ax) the Jost solutions are
f_l = f_κ/(iκ − a) and f_r = f_{−κ}/(a − iκ). The single level −a² has
φ₀ = √(a/2) sech(ax).
"""

from __future__ import annotations

import math

import numpy as np

from susygreen.darboux import Case, USpec
from susygreen.models.base import ReferenceModel, Transform
from susygreen.models.free import FreeLine
from susygreen.schrodinger import Domain, EnergyPoint, Potential


def sech(z):
    z = np.abs(np.asarray(z, dtype=float))
    e = np.exp(-z)
    return 2 * e / (1 + e * e)


def _f(q, a, x):
    """(f_q, f_q′) with f_q = e^{−iqx}(iq + a tanh ax)."""
    x = np.asarray(x, dtype=float)
    ph = np.exp(-1j * q * x)
    t = np.tanh(a * x)
    f = ph * (1j * q + a * t)
    fp = ph * (-1j * q * (1j * q + a * t) + a * a * sech(a * x) ** 2)
    return f, fp


class SolitonModel(ReferenceModel):
    name = "soliton"
    continuum = "line"

    @property
    def transform(self) -> Transform:
        return Transform(parent="free-line", alpha=-self.a**2, u_spec=USpec.EVEN,
                         case=Case.ADD_GROUND_STATE)

    def potential(self) -> Potential:
        a = self.a
        return Potential(name=f"{self.name}(a={a:g})", domain=Domain.FULL_LINE,
                         evaluate=lambda x: -2 * a * a * sech(a * x) ** 2,
                         bound_states=(-a * a,), decay_rate=2 * a)

    def left(self, x, E: EnergyPoint):
        f, fp = _f(E.kappa, self.a, x)
        c = 1j * E.kappa - self.a
        return f / c, fp / c

    def right(self, x, E: EnergyPoint):
        f, fp = _f(-E.kappa, self.a, x)
        c = self.a - 1j * E.kappa
        return f / c, fp / c

    def wronskian(self, E: EnergyPoint) -> complex:
        k, a = E.kappa, self.a
        return 2j * k * (a + 1j * k) / (a - 1j * k)

    def ground_state(self, x):
        return math.sqrt(self.a / 2) * sech(self.a * np.asarray(x, dtype=float))

    def bound_states(self):
        return [(-self.a**2, self.ground_state)]

    def scattering_state(self, k, x):
        k = np.asarray(k, dtype=float)
        a = self.a
        return ((-1j * k + a * np.tanh(a * x)) * np.exp(1j * k * x)
                / np.sqrt(2 * math.pi * (k * k + a * a)))


class SolitonDeleted(FreeLine):
    """The soliton with its bound state deleted (u = φ₀): the free line, case (i)."""

    name = "soliton-deleted"

    @property
    def transform(self) -> Transform:
        return Transform(parent="soliton", alpha=-self.a**2, u_spec=USpec.BOUND,
                         case=Case.REMOVE_GROUND_STATE)
