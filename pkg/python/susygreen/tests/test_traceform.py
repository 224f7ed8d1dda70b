"""Relative traces: numeric integral, boundary forms Q1..Q4 and closed forms.

At E = −4 with a = 1: the soliton (one level added to the free line) has
trace −1/6 split as 1/3 + (−1/2); the csch partner of the free half line
has trace 1/12; the isospectral free-line transform has trace 0.
"""

import numpy as np

from susygreen.config import DEFAULT_SETTINGS, Tolerances
from susygreen.darboux import Case
from susygreen.errors import CaseError, GridMismatch
from susygreen.models import CschModel, IsospectralLine, SolitonModel, get_model
from susygreen.pipeline import build_state, setup_from_model, setup_from_parent
from susygreen.schrodinger import momentum_of
from susygreen.traceform import (
    HALFLINE_SWAP,
    cross_identity_check,
    q_boundary,
    split_trace,
    trace_closed_fullline,
    trace_closed_halfline,
    trace_closed_halfline_swapped,
    trace_numeric,
    trace_report,
)


def _raises(exc, fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except exc:
        return True
    return False


def _state(model, Ez):
    return build_state(setup_from_model(model), momentum_of(Ez), DEFAULT_SETTINGS)


def test_closed_forms():
    E = momentum_of(-4)
    assert abs(trace_closed_fullline(E, 1.0, Case.ADD_GROUND_STATE) + 1 / 6) < 1e-14
    assert abs(trace_closed_fullline(E, 1.0, Case.REMOVE_GROUND_STATE) - 1 / 6) < 1e-14
    assert trace_closed_fullline(E, 1.0, Case.ISOSPECTRAL) == 0
    assert abs(trace_closed_halfline(E, 1.0, Case.ISOSPECTRAL) - 1 / 4) < 1e-14
    assert abs(trace_closed_halfline_swapped(E, 1.0, Case.ISOSPECTRAL) - 1 / 12) < 1e-14
    assert _raises(CaseError, trace_closed_halfline, E, 1.0, Case.ADD_GROUND_STATE)


def test_soliton_trace():
    s = _state(SolitonModel(1.0), -4)
    t = trace_numeric(s.G0, s.G1)
    assert abs(t + 1 / 6) < 1e-7, f"soliton trace at E=-4: {t}"
    prods = q_boundary(s.G0.fl, s.G0.fr, s.G1.fl, s.G1.fr, s.G0.W0, Tolerances())
    Q = prods.variants
    want_q = t * s.G0.W0 * (s.energy.E - s.d.alpha)
    for i, q in enumerate(Q, start=1):
        assert abs(q - want_q) < 1e-6 * abs(want_q), f"Q{i} = {q}, want {want_q}"
    discrete, continuum = split_trace(s.energy, s.d.alpha, prods)
    assert abs(discrete - 1 / 3) < 1e-12
    assert abs(continuum + 1 / 2) < 1e-7, f"continuum part {continuum}"
    gap = cross_identity_check(s.G0.fl, s.G0.fr, s.G1.fl, s.G1.fr, s.G0.W0)
    assert gap < 1e-8, f"f_l0 f_r1 - f_r0 f_l1 differs from W0 by {gap:.2e}"


def test_reports():
    r = trace_report(*_triple(SolitonModel(1.0), 1 + 2j))
    assert r.flags == ()
    assert r.max_disc < 1e-6, f"soliton discrepancies {r.discrepancies}"
    assert r.case is Case.ADD_GROUND_STATE

    r = trace_report(*_triple(IsospectralLine(1.0), -2))
    assert abs(r.numeric_trace) < 1e-7, f"isospectral trace {r.numeric_trace}"
    assert r.max_disc < 1e-6

    r = trace_report(*_triple(get_model("soliton-deleted")(1.0), -4))
    assert abs(r.numeric_trace - 1 / 6) < 1e-7, f"level removal trace {r.numeric_trace}"


def test_halfline_flag():
    r = trace_report(*_triple(CschModel(1.0), -4))
    assert abs(r.numeric_trace - 1 / 12) < 1e-6, f"csch trace at E=-4: {r.numeric_trace}"
    assert HALFLINE_SWAP in r.flags, "printed half-line form should be flagged"
    assert abs(r.closed_form - 1 / 4) < 1e-12, "the report keeps the printed value"
    assert r.discrepancies["closed"] < 1e-6
    assert r.discrepancies["q_spread"] < 1e-7


def test_without_closed_form():
    setup = setup_from_parent("free-line", 1.0, -2.0, "even")
    assert setup.closed_trace
    s = build_state(setup, momentum_of(-4))
    r = trace_report(s.G0, s.G1, s.d, closed=False)
    assert r.closed_form is None and "closed" not in r.discrepancies
    # a = √2 soliton: δ = −1
    want = trace_closed_fullline(s.energy, np.sqrt(2.0), Case.ADD_GROUND_STATE)
    assert abs(r.numeric_trace - want) < 1e-6


def test_mismatch():
    a = _state(SolitonModel(1.0), -4)
    b = _state(SolitonModel(1.0), -2)
    assert _raises(GridMismatch, trace_numeric, a.G0, b.G1)


def _triple(model, Ez):
    s = _state(model, Ez)
    return s.G0, s.G1, s.d, Tolerances()


def run():
    test_closed_forms()
    test_soliton_trace()
    test_reports()
    test_halfline_flag()
    test_without_closed_form()
    test_mismatch()
    print("test_traceform: OK")


if __name__ == "__main__":
    run()
