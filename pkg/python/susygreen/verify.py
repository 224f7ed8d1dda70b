"""The verification suite behind ``python -m susygreen verify``.

Each check runs the numerical pipeline on a reference model and compares it
with a closed form. A check reports PASS, FAIL, or FLAG; FLAG marks a
printed closed form that the numbers contradict in a known, recorded way and
does not fail the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from susygreen.config import Settings, parse_energies
from susygreen.darboux import (
    factorization_residual,
    green1_at_alpha,
    green1_limit,
    intertwining_residual,
    residue_at_alpha,
)
from susygreen.density import (
    WINDOWED_R_SIGN,
    p_lambda_analytic,
    pk_fullline,
    pkA_bruteforce,
    pkA_halfline,
    r_fullline,
    r_windowed,
    r_windowed_numeric,
    stieltjes_forward,
    stieltjes_windowed_limit,
)
from susygreen.greenfn import (
    cut_jump,
    cut_jump_expected,
    jump_check,
    offdiag_residual,
    spectral_reconstruct,
)
from susygreen.models import CschModel, FreeLine, SolitonModel, get_model
from susygreen.pipeline import Setup, State, build_state, setup_from_model
from susygreen.report import TRACE_FIELDS, render, trace_row
from susygreen.schrodinger import momentum_of
from susygreen.traceform import HALFLINE_SWAP, TraceReport, trace_report

PASS, FAIL, FLAG = "PASS", "FAIL", "FLAG"


@dataclass(frozen=True)
class CheckResult:
    check: str
    status: str
    value: float | str
    expected: float | str
    deviation: float
    note: str = ""

    def as_row(self) -> dict:
        return {"check": self.check, "status": self.status, "value": self.value,
                "expected": self.expected, "deviation": self.deviation, "note": self.note}


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(1e-300, abs(b))


def _verdict(dev: float, tol: float) -> str:
    return PASS if dev <= tol else FAIL


def _state(name: str, E: complex, settings: Settings) -> State:
    return build_state(setup_from_model(get_model(name)(a=1.0)), momentum_of(E), settings)


def _trace(setup: Setup, E: complex, settings: Settings) -> TraceReport:
    s = build_state(setup, momentum_of(E), settings)
    return trace_report(s.G0, s.G1, s.d, settings.tol, closed=setup.closed_trace)


def _random_energies(n: int, seed: int, alpha: float, sector: float = 1e-3) -> list[complex]:
    return [e for e in parse_energies(f"random:{n}:{seed}", sector) if abs(e - alpha) > 1e-2]


# MARK: Traces
def check_trace_fullline(settings: Settings) -> CheckResult:
    setup = setup_from_model(SolitonModel(1.0))
    r = _trace(setup, -4, settings)
    worst = _rel(r.numeric_trace, -1 / 6)
    for E in _random_energies(20, 11, -1.0):
        worst = max(worst, _trace(setup, E, settings).discrepancies["closed"])
    verdict = _verdict(worst, settings.tol.verify_tol)
    return CheckResult("trace-fullline-ii", verdict, r.numeric_trace.real, -1 / 6, worst,
                       "soliton a=1, E=-4 and 20 random E")


def check_trace_halfline(settings: Settings) -> CheckResult:
    r = _trace(setup_from_model(CschModel(1.0)), -4, settings)
    dev = r.discrepancies["closed"]
    if HALFLINE_SWAP in r.flags:
        return CheckResult("trace-halfline-iii", FLAG if dev <= settings.tol.verify_tol else FAIL,
                           r.numeric_trace.real, r.closed_form.real, dev,
                           f"{HALFLINE_SWAP}: numeric trace matches the closed form with "
                           "the case (i)/(iii) deltas exchanged")
    return CheckResult("trace-halfline-iii", _verdict(dev, settings.tol.verify_tol),
                       r.numeric_trace.real, r.closed_form.real, dev, "csch a=1, E=-4")


def check_case_i_roundtrip(settings: Settings) -> CheckResult:
    setup = setup_from_model(get_model("soliton-deleted")(a=1.0))
    s = build_state(setup, momentum_of(-4), settings)
    free = FreeLine()
    pts = [(0.0, 0.0), (0.5, -1.0), (2.0, 2.0), (-3.0, 1.0)]
    dev = max(_rel(s.G1(x, y), free.green(x, y, s.energy)) for x, y in pts)
    r = trace_report(s.G0, s.G1, s.d, settings.tol, closed=True)
    worst = max(dev, r.discrepancies["closed"])
    return CheckResult("case-i-roundtrip", _verdict(worst, 1e-7), r.numeric_trace.real,
                       1 / 6, worst, f"G1 vs free line {dev:.2e}")


def check_q_agreement(settings: Settings) -> CheckResult:
    worst_q, worst_x = 0.0, 0.0
    for name in ("soliton", "csch", "soliton-deleted", "iso-line"):
        for E in (-4, 1 + 2j):
            r = _trace(setup_from_model(get_model(name)(a=1.0)), E, settings)
            worst_q = max(worst_q, r.discrepancies["q_spread"])
            worst_x = max(worst_x, r.cross_identity)
    worst = max(worst_q, worst_x)
    return CheckResult("q-agreement", _verdict(worst, 1e-8), worst_q, 0.0, worst,
                       f"cross identity {worst_x:.2e}")


# MARK: Kernels
def check_kernel(settings: Settings) -> CheckResult:
    worst = 0.0
    notes = []
    for name, ys in (("soliton", (0.0, 0.7)), ("csch", (0.8, 2.5))):
        s = _state(name, -4, settings)
        for G in (s.G0, s.G1):
            for y in ys:
                x = y + 0.5
                if G(x, y) != G(y, x):
                    notes.append(f"{name}: asymmetric at ({x},{y})")
                    worst = math.inf
                worst = max(worst, abs(jump_check(G, y) + 1))
                worst = max(worst, offdiag_residual(G, x + 0.5, y))
        worst = max(worst, s.G1.wronskian_check)
    return CheckResult("kernel", _verdict(worst, 1e-6), worst, 0.0, worst,
                       "; ".join(notes) or "symmetry, jump, residual, W1 = (E-alpha)W0")


def check_residue(settings: Settings) -> CheckResult:
    s = _state("soliton", -1.1, settings)
    val = residue_at_alpha(s.d, s.ctx, 0.0, 0.0)
    dev = abs(val - 0.5)
    off = residue_at_alpha(s.d, s.ctx, 0.0, 1.0)
    dev_off = abs(off - 0.5 / math.cosh(1.0))
    worst = max(dev, dev_off)
    return CheckResult("residue-ii", _verdict(worst, 1e-5), val.real, 0.5, worst,
                       f"(0,1): {off.real:.8f}")


def check_regular_point(settings: Settings) -> CheckResult:
    worst = 0.0
    for name, pt in (("csch", (1.0, 1.0)), ("iso-line", (0.3, -0.4)),
                     ("soliton-deleted", (0.0, 0.5))):
        s = _state(name, -1.1, settings)
        direct = green1_at_alpha(s.d, s.ctx, 1e-4 if name == "csch" else 1e-3)(*pt)
        limit = green1_limit(s.d, s.ctx, *pt)
        worst = max(worst, _rel(direct, limit))
    return CheckResult("regular-at-alpha", _verdict(worst, 1e-5), worst, 0.0, worst,
                       "csch, iso-line, soliton-deleted")


# MARK: Densities
def check_density_fullline(settings: Settings) -> CheckResult:
    model = SolitonModel(1.0)
    dev_p = max(abs(pk_fullline(model, k) - p_lambda_analytic(1.0, k))
                for k in (0.0, 0.5, 1.0, 2.0, 5.0))
    dev_r = 0.0
    for E in parse_energies("random:10:5", 0.2):
        ep = momentum_of(E)
        val = stieltjes_forward(lambda k: p_lambda_analytic(1.0, k), ep,
                                tol=settings.tol.quad_tol)
        dev_r = max(dev_r, _rel(val, r_fullline(1.0, ep)))
    ok = dev_p <= 1e-8 and dev_r <= 1e-6
    return CheckResult("density-fullline", PASS if ok else FAIL, dev_p, 0.0, max(dev_p, dev_r),
                       f"Stieltjes transform {dev_r:.2e}")


def check_density_halfline(settings: Settings) -> CheckResult:
    model = CschModel(1.0)
    rng = np.random.default_rng(3)
    dev_b = 0.0
    for k, A in zip(rng.uniform(0.1, 5.0, 10), rng.uniform(0.5, 20.0, 10)):
        dev_b = max(dev_b, abs(pkA_halfline(1.0, k, A) - pkA_bruteforce(model, k, A)))
    E = momentum_of(-4)
    numeric_trace = _trace(setup_from_model(model), -4, settings).numeric_trace
    dev_w = 0.0
    value = 0j
    for A in (50.0, 100.0):
        value = stieltjes_windowed_limit(1.0, E, A).value
        dev_w = max(dev_w, abs(value - numeric_trace))
    printed = r_windowed(1.0, E)
    ok = dev_b <= 1e-8 and dev_w <= 5e-3
    note = f"brute force {dev_b:.2e}, windowed vs trace {dev_w:.2e}"
    status = PASS if ok else FAIL
    if ok and abs(value - printed) > 5e-3 and abs(value - r_windowed_numeric(1.0, E)) <= 5e-3:
        status = FLAG
        note += f"; {WINDOWED_R_SIGN}: printed R(E) = {printed.real:.6g}"
    return CheckResult("density-halfline", status, value.real, numeric_trace.real,
                       max(dev_b, dev_w), note)


def check_spectral(settings: Settings) -> CheckResult:
    triples = [(0.0, 0.0, -4.0), (0.5, -0.3, -2 + 1j), (1.0, 1.0, -1 + 3j),
               (-0.7, 0.2, 2 + 2j), (0.0, 1.5, -0.5 - 1j)]
    worst = 0.0
    for model in (FreeLine(), SolitonModel(1.0)):
        for x, y, E in triples:
            ep = momentum_of(E)
            worst = max(worst, abs(spectral_reconstruct(model, x, y, ep) - model.green(x, y, ep)))
    return CheckResult("spectral", _verdict(worst, 1e-3), worst, 0.0, worst,
                       "free line and soliton, 5 (x, y, E)")


# MARK: Properties
def check_properties(settings: Settings) -> CheckResult:
    model = SolitonModel(1.0)
    dev_cut = max(abs(cut_jump(model, x, y, k) - cut_jump_expected(model, x, y, k))
                  for x, y, k in ((0, 0, 1), (0.5, -0.5, 0.7), (1, 2, 1.5), (-1, 0.3, 2.5),
                                  (0.2, 0.2, 0.4)))
    s = _state("soliton", -4, settings)
    dev_int = max(intertwining_residual(s.d, s.G0.fl), intertwining_residual(s.d, s.G0.fr))
    dev_fac = max(factorization_residual(s.d, s.G0.fl), factorization_residual(s.d, s.G0.fr))
    setup = setup_from_model(model)
    rows = [render([trace_row(_trace(setup, E, settings))], TRACE_FIELDS, "csv")
            for E in (-2, -2)]
    deterministic = rows[0] == rows[1]
    worst = max(dev_cut / 1e-5, dev_int / 1e-6, dev_fac / 1e-6)
    ok = worst <= 1 and deterministic
    return CheckResult("properties", PASS if ok else FAIL, dev_cut, 0.0, worst,
                       f"intertwining {dev_int:.2e}, factorization {dev_fac:.2e}, "
                       f"deterministic={deterministic}")


CHECKS: list[Callable[[Settings], CheckResult]] = [
    check_trace_fullline,
    check_trace_halfline,
    check_case_i_roundtrip,
    check_q_agreement,
    check_kernel,
    check_residue,
    check_regular_point,
    check_density_fullline,
    check_density_halfline,
    check_spectral,
    check_properties,
]
