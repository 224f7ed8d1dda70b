"""Reference models: registry, closed-form solutions and eigenfunctions.

Each model's (f, f′) must solve −f″ + Vf = Ef, reproduce its Wronskian and
give a symmetric kernel; bound states must be normalized.
"""

import math

import numpy as np
from scipy.integrate import quad

from susygreen.darboux import Case
from susygreen.errors import ConfigError, DomainError
from susygreen.models import (
    ENTRY_POINT_GROUP,
    CschModel,
    FreeHalfLine,
    FreeLine,
    IsospectralLine,
    SolitonModel,
    discover_models,
    get_model,
    reference_green,
)
from susygreen.schrodinger import momentum_of

ALL = ("free-line", "free-half-line", "soliton", "csch", "iso-line", "soliton-deleted")


def _raises(exc, fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except exc:
        return True
    return False


def test_registry():
    models = discover_models()
    for name in ALL:
        assert name in models, f"built-in model {name!r} missing"
        assert models[name].name == name
    assert ENTRY_POINT_GROUP == "susygreen.models"
    assert _raises(ConfigError, get_model, "harmonic")
    assert _raises(ConfigError, SolitonModel, 0.0)
    assert _raises(ConfigError, CschModel, -1.0)


def test_transforms():
    assert FreeLine().transform is None and FreeLine().parent() is None
    t = SolitonModel(2.0).transform
    assert t.parent == "free-line" and t.alpha == -4.0 and t.case is Case.ADD_GROUND_STATE
    assert CschModel(1.0).transform.case is Case.ISOSPECTRAL
    assert IsospectralLine(1.0).transform.case is Case.ISOSPECTRAL
    deleted = get_model("soliton-deleted")(1.5)
    assert deleted.transform.case is Case.REMOVE_GROUND_STATE
    parent = deleted.parent()
    assert isinstance(parent, SolitonModel) and parent.a == 1.5


def _ode_residual(model, branch, x, E):
    h = 1e-3

    def f(s):
        return branch(np.asarray(s, dtype=float), E)[0]

    fpp = (f(x + h) - 2 * f(x) + f(x - h)) / h**2
    return np.max(np.abs(-fpp + (model.potential()(x) - E.E) * f(x)) / (1 + np.abs(f(x))))


def test_closed_form_solutions():
    for model in (FreeLine(), FreeHalfLine(), SolitonModel(1.0), CschModel(1.3)):
        E = momentum_of(-2 + 1j)
        half = model.continuum == "half"
        x = np.array([0.4, 1.1, 2.5]) if half else np.array([-1.5, 0.2, 2.0])
        for branch in (model.left, model.right):
            r = _ode_residual(model, branch, x, E)
            assert r < 1e-4, f"{model.name} {branch.__name__}: ODE residual {r:.2e}"
            f, fp = branch(x, E)
            h = 1e-6
            fd = (branch(x + h, E)[0] - branch(x - h, E)[0]) / (2 * h)
            assert np.max(np.abs(fd - fp)) < 1e-6 * (1 + np.max(np.abs(fp)))
        fl, flp = model.left(x, E)
        fr, frp = model.right(x, E)
        W = fr * flp - frp * fl
        assert np.allclose(W, model.wronskian(E), rtol=1e-10), f"{model.name} Wronskian {W}"


def test_kernels():
    for model, pts in ((SolitonModel(1.0), [(0.3, -1.0)]), (CschModel(1.0), [(0.5, 2.0)])):
        E = momentum_of(1 + 2j)
        for x, y in pts:
            assert model.green(x, y, E) == model.green(y, x, E)
    csch = CschModel(1.0)
    at_pole = csch.green(1.0, 2.0, momentum_of(-1.0))
    near = csch.green(1.0, 2.0, momentum_of(-1.0 + 1e-3))
    assert np.isfinite(at_pole) and abs(at_pole - near) < 1e-2, "csch kernel is regular at ia"
    f, fp = csch.left(np.array([0.0]), momentum_of(-4))
    assert abs(f[0]) < 1e-12 and fp[0] == 0
    assert _raises(DomainError, csch.green, -1.0, 1.0, momentum_of(-4))
    assert abs(reference_green("free-line", 0.0, 0.0, -4) - 0.25) < 1e-14
    assert abs(reference_green("soliton", 0.0, 0.0, -4) - 1 / 3) < 1e-12
    assert np.isfinite(reference_green("csch", 0.5, 1.5, -1.0))
    assert _raises(ConfigError, reference_green, "nope", 0.0, 0.0, -4)


def test_eigenfunctions():
    model = SolitonModel(1.0)
    (E0, phi), = model.bound_states()
    assert E0 == -1.0
    norm, _ = quad(lambda x: phi(x) ** 2, -40, 40, epsabs=1e-13, limit=200)
    assert abs(norm - 1) < 1e-10, f"ground state norm {norm}"
    # scattering states are orthogonal to the bound state
    k = 0.8
    overlap, _ = quad(lambda x: (phi(x) * model.scattering_state(k, x)).real, -40, 40,
                      epsabs=1e-13, limit=400)
    assert abs(overlap) < 1e-8
    # plane-wave normalization: |ψ_k|² → 1/(2π) far away
    for m in (FreeLine(), model):
        v = abs(m.scattering_state(k, 30.0)) ** 2
        assert abs(v - 1 / (2 * math.pi)) < 1e-10, f"{m.name}: |psi_k|^2 = {v}"
    v = CschModel(1.0).scattering_state(k, np.linspace(30, 40, 2001))
    assert abs(np.max(np.abs(v)) - math.sqrt(2 / math.pi)) < 1e-3


def run():
    test_registry()
    test_transforms()
    test_closed_form_solutions()
    test_kernels()
    test_eigenfunctions()
    print("test_models: OK")


if __name__ == "__main__":
    run()
