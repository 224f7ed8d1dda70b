"""The Darboux transform: case classification, partner potentials and G₁.

The free line with u = cosh(ax) gives the soliton (a level is added), the
soliton with u = φ₀ gives back the free line (its level is removed) and
u = e^{ax} leaves the free line unchanged.
"""

import math

import numpy as np

from susygreen.config import Tolerances
from susygreen.darboux import (
    Case,
    USpec,
    apply_L,
    build_transform,
    factorization_residual,
    green1,
    green1_at_alpha,
    green1_limit,
    intertwining_residual,
    normalize_chi,
    residue_at_alpha,
)
from susygreen.errors import CaseError, DivisionError, NodeError, ThresholdError
from susygreen.greenfn import Label, SolverContext
from susygreen.models import CschModel, FreeHalfLine, FreeLine, SolitonModel
from susygreen.schrodinger import make_grid, momentum_of


def _raises(exc, fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except exc:
        return True
    return False


def _ctx(V, Ez, alpha=-1.0):
    E = momentum_of(Ez)
    half = V.domain.value == "half-line"
    g = make_grid(V, E, singular_origin=True if half else None,
                  extra_rates=[math.sqrt(-alpha)])
    return SolverContext(V, g, Tolerances()), E


def test_cases():
    V = FreeLine().potential()
    ctx, _ = _ctx(V, -4)
    assert build_transform(V, -1.0, "even", ctx.grid).case is Case.ADD_GROUND_STATE
    assert build_transform(V, -1.0, USpec.LEFT, ctx.grid).case is Case.ISOSPECTRAL
    assert build_transform(V, -1.0, USpec.RIGHT, ctx.grid).case is Case.ISOSPECTRAL
    assert _raises(NodeError, build_transform, V, -1.0, USpec.ODD, ctx.grid), "sinh has a node"
    assert _raises(ThresholdError, build_transform, V, 0.5, USpec.LEFT, ctx.grid)
    assert _raises(CaseError, build_transform, V, -1.0, "sideways", ctx.grid)
    assert _raises(CaseError, build_transform, V, -1.0, USpec.BOUND, ctx.grid), \
        "the free line has no level to delete"
    assert _raises(CaseError, build_transform, V, -1.0, USpec.LEFT, ctx.grid,
                   expect_case=Case.ADD_GROUND_STATE)

    S = SolitonModel(1.0).potential()
    ctx, _ = _ctx(S, -4)
    d = build_transform(S, -1.0, USpec.BOUND, ctx.grid)
    assert d.case is Case.REMOVE_GROUND_STATE
    assert d.V1.bound_states == (), f"deleted level still listed: {d.V1.bound_states}"
    assert _raises(ThresholdError, build_transform, S, -0.5, USpec.LEFT, ctx.grid), \
        "alpha above the ground state"

    H = FreeHalfLine().potential()
    ctx, _ = _ctx(H, -4)
    d = build_transform(H, -1.0, USpec.LEFT, ctx.grid)
    assert d.case is Case.ISOSPECTRAL
    assert d.V1.origin_singularity == 2.0, "the partner of a regular origin has c = 2"
    assert _raises(CaseError, build_transform, H, -1.0, USpec.EVEN, ctx.grid)
    assert _raises(CaseError, build_transform, H, -1.0, USpec.RIGHT, ctx.grid), \
        "e^{-ax} does not vanish at the origin"


def test_partner_potentials():
    V = FreeLine().potential()
    ctx, _ = _ctx(V, -4)
    d = build_transform(V, -1.0, USpec.EVEN, ctx.grid)
    xs = np.array([-3.0, -0.4, 0.0, 0.9, 5.0])
    want = SolitonModel(1.0).potential()(xs)
    assert np.max(np.abs(d.V1(xs) - want)) < 1e-8, "V1 of cosh should be the soliton well"
    assert abs(d.a - 1.0) < 1e-15
    assert d.V1.bound_states == (-1.0,)
    i = ctx.grid.index(0.0)
    assert np.max(np.abs(d.v1nodes - SolitonModel(1.0).potential()(ctx.grid.nodes))) < 1e-8
    assert abs(d.w[i]) < 1e-10, "w = tanh x vanishes at 0"

    H = FreeHalfLine().potential()
    ctx, _ = _ctx(H, -4)
    d = build_transform(H, -1.0, USpec.LEFT, ctx.grid)
    xs = np.array([0.3, 1.0, 4.0])
    want = CschModel(1.0).potential()(xs)
    assert np.max(np.abs(d.V1(xs) - want) / want) < 1e-7, "V1 of sinh should be 2 csch^2"


def test_green1():
    for parent, u, model, pts in (
        (FreeLine(), USpec.EVEN, SolitonModel(1.0), [(0.0, 0.0), (0.5, -1.0), (3.0, 1.0)]),
        (FreeHalfLine(), USpec.LEFT, CschModel(1.0), [(0.5, 0.5), (1.0, 2.5)]),
    ):
        V = parent.potential()
        ctx, E = _ctx(V, 1 + 2j)
        d = build_transform(V, -1.0, u, ctx.grid)
        G1 = green1(d, ctx, E)
        assert G1.label is Label.G1
        assert G1.wronskian_check < 1e-8, f"W1 gap {G1.wronskian_check:.2e}"
        for x, y in pts:
            want = model.green(x, y, E)
            err = abs(G1(x, y) - want) / abs(want)
            assert err < 1e-6, f"{model.name} G1({x},{y}): rel error {err:.2e}"


def test_intertwining():
    V = FreeLine().potential()
    ctx, E = _ctx(V, -4)
    d = build_transform(V, -1.0, USpec.EVEN, ctx.grid)
    fl, fr = ctx.pair(E)
    for s in (fl, fr):
        assert intertwining_residual(d, s) < 1e-6
        assert factorization_residual(d, s) < 1e-6
    Lf = apply_L(d, fl)
    assert Lf.kind is fl.kind and Lf.sigma == fl.sigma
    # L e^{-iκx} = (iκ + tanh x)e^{-iκx}
    x = 0.7
    want = (1j * E.kappa + math.tanh(x)) * np.exp(-1j * E.kappa * x)
    assert abs(Lf.at(x)[0] - want) < 1e-8


def test_normalize_chi():
    S = SolitonModel(1.0)
    V = S.potential()
    ctx, _ = _ctx(V, -4)
    d = build_transform(V, -1.0, USpec.BOUND, ctx.grid)
    phi = ctx.pair(momentum_of(-1.0))[0]
    assert _raises(DivisionError, normalize_chi, d, phi, -1.0)


def test_alpha_limits():
    S = SolitonModel(1.0)
    ctx, _ = _ctx(S.potential(), -1.1)
    d = build_transform(S.potential(), -1.0, USpec.BOUND, ctx.grid)
    direct = green1_at_alpha(d, ctx)(0.0, 0.5)
    limit = green1_limit(d, ctx, 0.0, 0.5)
    # the partner is the free line: G1(0, 0.5, -1) = e^{-0.5}/2
    want = math.exp(-0.5) / 2
    assert abs(limit - want) < 1e-5, f"G1 limit {limit} vs {want}"
    assert abs(direct - want) < 1e-5, f"G1 at alpha {direct} vs {want}"

    V = FreeLine().potential()
    ctx, _ = _ctx(V, -1.1)
    d = build_transform(V, -1.0, USpec.EVEN, ctx.grid)
    assert _raises(CaseError, green1_at_alpha, d, ctx), "case (ii) has a pole at alpha"
    res = residue_at_alpha(d, ctx, 0.0, 1.0)
    want = 0.5 / math.cosh(1.0)
    assert abs(res - want) < 1e-5, f"residue {res} vs phi0(0)phi0(1) = {want}"
    d3 = build_transform(V, -1.0, USpec.LEFT, ctx.grid)
    assert _raises(CaseError, residue_at_alpha, d3, ctx, 0.0, 0.0)


def run():
    test_cases()
    test_partner_potentials()
    test_green1()
    test_intertwining()
    test_normalize_chi()
    test_alpha_limits()
    print("test_darboux: OK")


if __name__ == "__main__":
    run()
