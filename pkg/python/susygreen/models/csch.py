"""V = 2a² csch²(ax) on the half line, partner of the free half line with u = sinh(ax).

f_l is normalized to x² at the origin, f_r to e^{iκx} at infinity:

    f_l = 3(−κ cos κx + a coth(ax) sin κx)/(κ(κ² + a²)),
    f_r = (a coth(ax) − iκ)e^{iκx}/(a − iκ),    W = 3/(a − iκ).

The kernel is regular at κ = ia although f_l carries 1/(κ² + a²) there.
"""

from __future__ import annotations

import math

import numpy as np

from susygreen.darboux import Case, USpec
from susygreen.models.base import ReferenceModel, Transform
from susygreen.schrodinger import Domain, EnergyPoint, Potential, momentum_of


def coth_sin(a, q, x):
    """a·coth(ax)·sin(qx), continued by its limit q at x = 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(a * x) < 1e-8
    safe = np.where(small, 1.0, x)
    out = a * np.sin(q * safe) / np.tanh(a * safe)
    return np.where(small, q + 0 * out, out)


def csch2(z):
    z = np.asarray(z, dtype=float)
    with np.errstate(over="ignore", divide="ignore"):
        return 1.0 / np.sinh(z) ** 2


class CschModel(ReferenceModel):
    name = "csch"
    continuum = "half"

    @property
    def transform(self) -> Transform:
        return Transform(parent="free-half-line", alpha=-self.a**2, u_spec=USpec.LEFT,
                         case=Case.ISOSPECTRAL)

    def potential(self) -> Potential:
        a = self.a
        return Potential(name=f"{self.name}(a={a:g})", domain=Domain.HALF_LINE,
                         evaluate=lambda x: 2 * a * a * csch2(a * x),
                         origin_singularity=2.0, decay_rate=2 * a)

    def left(self, x, E: EnergyPoint):
        x = np.asarray(x, dtype=float)
        k, a = E.kappa, self.a
        c = 3 / (k * (k * k + a * a))
        at0 = x == 0
        xs = np.where(at0, 1.0, x)
        f = c * (-k * np.cos(k * x) + coth_sin(a, k, x))
        fp = c * ((k * k - a * a * csch2(a * xs)) * np.sin(k * xs)
                  + a * k * np.cos(k * xs) / np.tanh(a * xs))
        return f, np.where(at0, 0.0, fp)

    def right(self, x, E: EnergyPoint):
        x = np.asarray(x, dtype=float)
        k, a = E.kappa, self.a
        ph = np.exp(1j * k * x) / (a - 1j * k)
        coth = 1.0 / np.tanh(a * x)
        f = (a * coth - 1j * k) * ph
        fp = (-a * a * csch2(a * x) + 1j * k * (a * coth - 1j * k)) * ph
        return f, fp

    def wronskian(self, E: EnergyPoint) -> complex:
        return 3 / (self.a - 1j * E.kappa)

    def green(self, x, y, E: EnergyPoint):
        if abs(E.kappa**2 + self.a**2) < 1e-7 * self.a**2:
            eta = 1e-4 * self.a**2
            return 0.5 * (super().green(x, y, momentum_of(E.E + eta))
                          + super().green(x, y, momentum_of(E.E - eta)))
        return super().green(x, y, E)

    def scattering_state(self, k, x):
        k = np.asarray(k, dtype=float)
        a = self.a
        return (np.sqrt(2 / (math.pi * (k * k + a * a)))
                * (-k * np.cos(k * x) + coth_sin(a, k, x))) + 0j
