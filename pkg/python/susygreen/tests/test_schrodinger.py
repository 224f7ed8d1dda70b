"""Jost solutions, Wronskians and grids against closed forms.

Covers the momentum branch, the free line and half line, the soliton well and
the c/x² start of the csch potential. Energies stay well inside the upper
half plane so the tolerances below are comfortable.
"""

import numpy as np

from susygreen.config import GridSettings, Tolerances
from susygreen.errors import (
    BranchError,
    DegenerateError,
    DomainError,
    GridMismatch,
    SolutionOverflowError,
)
from susygreen.models import CschModel, FreeHalfLine, FreeLine, SolitonModel
from susygreen.schrodinger import (
    Domain,
    EnergyPoint,
    Grid,
    Kind,
    Potential,
    make_grid,
    momentum_of,
    sample_state,
    solve_left,
    solve_right,
    wronskian_profile,
)


def _raises(exc, fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except exc:
        return True
    return False


def test_momentum_branch():
    e = momentum_of(-4)
    assert abs(e.kappa - 2j) < 1e-14, f"kappa of -4 should be 2i, got {e.kappa}"
    e = momentum_of(1 + 2j)
    assert e.kappa.imag > 0 and abs(e.kappa**2 - (1 + 2j)) < 1e-13
    e = momentum_of(1 - 2j)
    assert e.kappa.imag > 0, f"lower half plane must still give Im kappa > 0: {e.kappa}"
    assert _raises(BranchError, momentum_of, 4.0), "positive real E has no Im kappa > 0 root"
    assert _raises(BranchError, momentum_of, 0.0)
    shifted = momentum_of(4.0, 1e-3)
    assert shifted.E == complex(4.0, 1e-3) and shifted.kappa.imag > 0
    assert _raises(BranchError, momentum_of, 4.0, -1.0)
    assert EnergyPoint.scattering(1.5).on_shell


def test_grid():
    V = FreeLine().potential()
    g = make_grid(V, momentum_of(-4))
    assert g.x_min < 0 < g.x_max and abs(g.x_min + g.x_max) < 1e-12
    assert np.any(g.nodes == 0.0), "the full-line grid keeps 0 as a node"
    g = make_grid(V, momentum_of(-4), include=[0.123])
    assert np.any(np.abs(g.nodes - 0.123) < 1e-15), "include points become nodes"
    assert _raises(DomainError, make_grid, V, momentum_of(-4), include=[1e6])
    assert _raises(DomainError, Grid, np.array([0.0, 1.0]))
    assert _raises(DomainError, Grid, np.array([0.0, 2.0, 1.0]))

    half = CschModel(1.0).potential()
    g = make_grid(half, momentum_of(-4))
    assert g.x_min == GridSettings().origin_offset, "singular origin starts at x0 > 0"
    g = make_grid(FreeHalfLine().potential(), momentum_of(-4))
    assert g.x_min == 0.0
    g = make_grid(V, momentum_of(-4), settings=GridSettings(x_max=5.0))
    assert g.x_max == 5.0


def test_free_line():
    model = FreeLine()
    V = model.potential()
    E = momentum_of(-4)
    g = make_grid(V, E)
    fl, fr = solve_left(V, E, g), solve_right(V, E, g)
    assert fl.kind is Kind.LEFT and fr.kind is Kind.RIGHT
    xs = np.array([-3.0, -0.5, 0.0, 1.25, 4.0])
    for s, closed in ((fl, model.left), (fr, model.right)):
        f, fp = s.at(xs)
        cf, cfp = closed(xs, E)
        err = np.max(np.abs(f - cf) / np.abs(cf))
        assert err < 1e-8, f"{s.kind.value} solution off by {err:.2e}"
        err = np.max(np.abs(fp - cfp) / np.abs(cfp))
        assert err < 1e-8, f"{s.kind.value} derivative off by {err:.2e}"
    W0, dev = wronskian_profile(fr, fl)
    assert abs(W0 - 4) < 1e-9, f"free-line Wronskian at E=-4 should be 4, got {W0}"
    assert dev < 1e-8, f"Wronskian not constant: {dev:.2e}"


def test_free_half_line():
    model = FreeHalfLine()
    V = model.potential()
    E = momentum_of(-2 + 1j)
    g = make_grid(V, E)
    fl, fr = solve_left(V, E, g), solve_right(V, E, g)
    W0, _ = wronskian_profile(fr, fl)
    assert abs(W0 - 1) < 1e-9, f"half-line Wronskian should be f_l'(0) = 1, got {W0}"
    f, _ = fl.at([0.0, 0.7, 2.0])
    cf, _ = model.left(np.array([0.0, 0.7, 2.0]), E)
    assert np.max(np.abs(f - cf)) < 1e-9


def test_soliton_wronskian():
    model = SolitonModel(1.0)
    V = model.potential()
    for Ez in (-4, 1 + 2j, -0.5 - 0.5j):
        E = momentum_of(Ez)
        g = make_grid(V, E)
        fl, fr = solve_left(V, E, g), solve_right(V, E, g)
        W0, dev = wronskian_profile(fr, fl)
        W = model.wronskian(E)
        assert abs(W0 - W) / abs(W) < 1e-8, f"soliton W at E={Ez}: {W0} vs {W}"
        assert dev < 1e-7
        assert fl.residual < Tolerances().residual_tol


def test_singular_origin():
    model = CschModel(1.0)
    V = model.potential()
    assert abs(V.ell - 1.0) < 1e-14, "c = 2 means l = 1"
    assert np.allclose(V.singularity_profile(), 2.0, atol=1e-3)
    E = momentum_of(-4)
    g = make_grid(V, E)
    fl, fr = solve_left(V, E, g), solve_right(V, E, g)
    xs = np.array([0.05, 0.5, 1.0, 3.0])
    f, _ = fl.at(xs)
    cf, _ = model.left(xs, E)
    err = np.max(np.abs(f - cf) / np.abs(cf))
    assert err < 1e-6, f"Frobenius start off by {err:.2e}"
    W0, _ = wronskian_profile(fr, fl)
    assert abs(W0 - model.wronskian(E)) < 1e-7, f"csch W: {W0} vs {model.wronskian(E)}"
    # [0, x0) is reached from the first nodes: f_l ~ x², f_r ~ 1/x
    near = np.array([0.0, 5e-5])
    f, fp = fl.at(near)
    assert f[0] == 0 and fp[0] == 0
    cf, cfp = model.left(near[1:], E)
    assert abs(f[1] - cf[0]) < 1e-5 * abs(cf[0]) and abs(fp[1] - cfp[0]) < 1e-5 * abs(cfp[0])
    f, _ = fr.at(near[1:])
    cf, _ = model.right(near[1:], E)
    assert abs(f[0] - cf[0]) < 1e-5 * abs(cf[0]), f"f_r(5e-5) = {f[0]} vs {cf[0]}"
    assert _raises(DomainError, fl.at, [-1e-3])
    assert _raises(DomainError, solve_left, V, E, make_grid(FreeHalfLine().potential(), E))


def test_truncation_stability():
    model = SolitonModel(1.0)
    V = model.potential()
    E = momentum_of(-4)
    W = []
    for X in (20.0, 40.0):
        g = make_grid(V, E, settings=GridSettings(x_max=X))
        W.append(wronskian_profile(solve_right(V, E, g), solve_left(V, E, g))[0])
    assert abs(W[1] - W[0]) < 1e-10, f"W0 moves by {abs(W[1] - W[0]):.2e} when x_max doubles"


def test_overflow():
    V = FreeLine().potential()
    E = momentum_of(-4)
    g = make_grid(V, E)
    tight = Tolerances(magnitude_cap=0.5)
    assert _raises(SolutionOverflowError, solve_left, V, E, g, tight)
    assert _raises(SolutionOverflowError, solve_right, V, E, g, tight)
    solve_left(V, E, g)


def test_errors():
    V = FreeLine().potential()
    E = momentum_of(-4)
    g = make_grid(V, E)
    half = make_grid(FreeHalfLine().potential(), E)
    assert _raises(DomainError, solve_left, V, E, half), "full-line V on a half-line grid"
    fl = solve_left(V, E, g)
    fr = solve_right(V, momentum_of(-2), g)
    assert _raises(GridMismatch, wronskian_profile, fr, fl)
    assert _raises(DomainError, fl.at, [g.x_max + 1.0])
    assert _raises(GridMismatch, sample_state, g, V, E, np.ones(3), np.ones(3))
    # two left solutions are linearly dependent
    assert _raises(DegenerateError, wronskian_profile, fl, fl)
    assert _raises(DomainError, Potential, "bad", Domain.FULL_LINE, lambda x: 0 * x,
                   origin_singularity=2.0)


def run():
    test_momentum_branch()
    test_grid()
    test_free_line()
    test_free_half_line()
    test_soliton_wronskian()
    test_singular_origin()
    test_truncation_stability()
    test_overflow()
    test_errors()
    print("test_schrodinger: OK")


if __name__ == "__main__":
    run()
