"""Spectral-density differences and their Stieltjes transforms.

Full line (soliton vs free line): P(k) = a/(π(k² + a²)) transforms to
−1/(κ² + iaκ). Half line (csch vs free): P(k, A) on the window [0, A] is
checked against brute-force quadrature, and its windowed Stieltjes transform
settles on −1/(2(κ² + iaκ)), not on the printed 1/(2(iaκ − κ²)).
"""

import math

from susygreen.density import (
    density_report,
    p_lambda_analytic,
    pk_fullline,
    pkA_bruteforce,
    pkA_halfline,
    r_fullline,
    r_windowed,
    r_windowed_numeric,
    stieltjes_forward,
    stieltjes_invert,
    stieltjes_windowed_limit,
    window_norm,
)
from susygreen.errors import ConvergenceError, DomainError, OscillationError
from susygreen.models import CschModel, FreeLine, SolitonModel, get_model
from susygreen.schrodinger import momentum_of


def _raises(exc, fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except exc:
        return True
    return False


def test_fullline_density():
    model = SolitonModel(1.0)
    for k in (0.0, 0.5, 2.0, 5.0):
        got = pk_fullline(model, k)
        want = p_lambda_analytic(1.0, k)
        assert abs(got - want) < 1e-8, f"P({k}) = {got}, want {want}"
    for k in (0.5, 1.3, 3.0):
        assert abs(pk_fullline(model, -k) - pk_fullline(model, k)) < 1e-9, f"P(-{k}) != P({k})"
    r = density_report(model, 1.0)
    assert r.window_A is None and abs(r.numeric_value - r.analytic_value) < 1e-8
    # removing the level flips the sign
    r = density_report(get_model("soliton-deleted")(1.0), 1.0)
    assert abs(r.numeric_value + p_lambda_analytic(1.0, 1.0)) < 1e-8
    assert abs(r.analytic_value - r.numeric_value) < 1e-8


def test_stieltjes_pair():
    E = momentum_of(-4)
    assert abs(r_fullline(1.0, E) - 1 / 6) < 1e-14
    got = stieltjes_forward(lambda k: p_lambda_analytic(1.0, k), E)
    assert abs(got - 1 / 6) < 1e-8, f"forward transform {got}"
    assert _raises(ConvergenceError, stieltjes_forward, lambda k: p_lambda_analytic(1.0, k), E,
                   tol=1e-30)
    E = momentum_of(-1 + 3j)
    got = stieltjes_forward(lambda k: p_lambda_analytic(1.0, k), E)
    want = r_fullline(1.0, E)
    assert abs(got - want) < 1e-6 * abs(want)
    for lam in (0.25, 1.0, 4.0):
        back = stieltjes_invert(lambda e: r_fullline(1.0, e), lam)
        want = p_lambda_analytic(1.0, math.sqrt(lam))
        assert abs(back - want) < 1e-5, f"inversion at lambda={lam}: {back} vs {want}"
    assert _raises(DomainError, stieltjes_invert, lambda e: r_fullline(1.0, e), -1.0)


def test_halfline_window():
    model = CschModel(1.0)
    for k, A in ((0.3, 2.0), (1.7, 10.0), (4.0, 0.5)):
        exact = pkA_halfline(1.0, k, A)
        brute = pkA_bruteforce(model, k, A)
        assert abs(exact - brute) < 1e-8, f"P({k}, {A}): {exact} vs brute force {brute}"
    r = density_report(model, 1.0, 5.0)
    assert r.window_A == 5.0 and abs(r.numeric_value - r.analytic_value) < 1e-8
    assert _raises(DomainError, density_report, model, 1.0)
    assert _raises(DomainError, pkA_halfline, 1.0, 1.0, 0.0)
    # the window norm of χ_k grows linearly in X
    n1, n2 = window_norm(model, 1.0, 20.0), window_norm(model, 1.0, 40.0)
    assert 1.5 < n2 / n1 < 2.5


def test_windowed_limit():
    E = momentum_of(-4)
    assert abs(r_windowed(1.0, E) - 1 / 4) < 1e-14
    assert abs(r_windowed_numeric(1.0, E) - 1 / 12) < 1e-14
    lim = stieltjes_windowed_limit(1.0, E, 50.0)
    assert abs(lim.value - 1 / 12) < 5e-3, f"windowed limit at A=50: {lim.value}"
    assert abs(lim.cesaro - 1 / 12) < 5e-3
    assert lim.doubling_change < 1e-2
    assert _raises(OscillationError, stieltjes_windowed_limit, 1.0, E, 50.0, panel=1.0)


def test_not_a_partner():
    assert _raises(DomainError, density_report, FreeLine(), 1.0)
    assert _raises(DomainError, pk_fullline, FreeLine(), 1.0)
    assert _raises(DomainError, pk_fullline, CschModel(1.0), 1.0)


def run():
    test_fullline_density()
    test_stieltjes_pair()
    test_halfline_window()
    test_windowed_limit()
    test_not_a_partner()
    print("test_density: OK")


if __name__ == "__main__":
    run()
