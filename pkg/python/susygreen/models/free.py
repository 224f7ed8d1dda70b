"""Free particle on the line and on the half line (V = 0)."""

from __future__ import annotations

import math

import numpy as np

from susygreen.darboux import Case, USpec
from susygreen.models.base import ReferenceModel, Transform
from susygreen.schrodinger import Domain, EnergyPoint, Potential


def _zero(x):
    return np.zeros_like(x, dtype=float)


class FreeLine(ReferenceModel):
    """f_l = e^{−iκx}, f_r = e^{iκx}, W = −2iκ, G = (i/2κ)e^{iκ|x−y|}."""

    name = "free-line"
    continuum = "line"

    def potential(self) -> Potential:
        return Potential(name=self.name, domain=Domain.FULL_LINE, evaluate=_zero)

    def left(self, x, E: EnergyPoint):
        f = np.exp(-1j * E.kappa * np.asarray(x, dtype=float))
        return f, -1j * E.kappa * f

    def right(self, x, E: EnergyPoint):
        f = np.exp(1j * E.kappa * np.asarray(x, dtype=float))
        return f, 1j * E.kappa * f

    def wronskian(self, E: EnergyPoint) -> complex:
        return -2j * E.kappa

    def scattering_state(self, k, x):
        return np.exp(1j * np.asarray(k) * x) / math.sqrt(2 * math.pi)


class IsospectralLine(FreeLine):
    """The free line transformed with u = e^{ax}: V₁ = 0 again, case (iii)."""

    name = "iso-line"

    @property
    def transform(self) -> Transform:
        return Transform(parent="free-line", alpha=-self.a**2, u_spec=USpec.LEFT,
                         case=Case.ISOSPECTRAL)


class FreeHalfLine(ReferenceModel):
    """Dirichlet origin: f_l = sin(κx)/κ (f_l′(0) = 1), f_r = e^{iκx}, W = 1."""

    name = "free-half-line"
    continuum = "half"

    def potential(self) -> Potential:
        return Potential(name=self.name, domain=Domain.HALF_LINE, evaluate=_zero)

    def left(self, x, E: EnergyPoint):
        x = np.asarray(x, dtype=float)
        k = E.kappa
        return np.sin(k * x) / k, np.cos(k * x)

    def right(self, x, E: EnergyPoint):
        f = np.exp(1j * E.kappa * np.asarray(x, dtype=float))
        return f, 1j * E.kappa * f

    def wronskian(self, E: EnergyPoint) -> complex:
        return 1.0 + 0j

    def scattering_state(self, k, x):
        return math.sqrt(2 / math.pi) * np.sin(np.asarray(k) * x) + 0j
