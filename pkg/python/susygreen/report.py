"""Row assembly and CSV/JSON emission for the CLI tables, plus the results stream."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable

from susygreen.density import DensityReport
from susygreen.traceform import TraceReport

GREEN_FIELDS = ["kernel", "x", "y", "re", "im"]

TRACE_FIELDS = [
    "E_re", "E_im", "trace_re", "trace_im",
    "Q1_re", "Q1_im", "Q2_re", "Q2_im", "Q3_re", "Q3_im", "Q4_re", "Q4_im",
    "closed_re", "closed_im", "flag", "max_disc",
]

DENSITY_LINE_FIELDS = ["k", "numeric", "analytic"]
DENSITY_HALF_FIELDS = ["k", "A", "P", "brute"]

VERIFY_FIELDS = ["check", "status", "value", "expected", "deviation", "note"]


# MARK: results stream
def append_result(path: str, rec: dict) -> None:
    """Write one verification record to the --results file, one JSON object per line.

    Records land in completion order, not CHECKS order; each carries its check name.
    """
    line = json.dumps({k: _clean(v) for k, v in rec.items()})
    with open(path, "a") as f:
        print(line, file=f, flush=True)


# MARK: rows
def green_row(kernel: str, x: float, y: float, value: complex) -> dict:
    return {"kernel": kernel, "x": x, "y": y, "re": value.real, "im": value.imag}


def trace_row(r: TraceReport) -> dict:
    row = {"E_re": r.E.E.real, "E_im": r.E.E.imag,
           "trace_re": r.numeric_trace.real, "trace_im": r.numeric_trace.imag}
    for i, q in enumerate(r.Q_variants, start=1):
        row[f"Q{i}_re"], row[f"Q{i}_im"] = q.real, q.imag
    c = r.closed_form
    row["closed_re"] = None if c is None else c.real
    row["closed_im"] = None if c is None else c.imag
    row["flag"] = ";".join(r.flags)
    row["max_disc"] = r.max_disc
    return row


def density_row(r: DensityReport) -> dict:
    if r.window_A is None:
        return {"k": r.k_or_lambda, "numeric": r.numeric_value, "analytic": r.analytic_value}
    return {"k": r.k_or_lambda, "A": r.window_A, "P": r.numeric_value,
            "brute": r.analytic_value}


# MARK: emission
def _clean(v):
    # -0.0 and 0.0 print alike
    return v + 0.0 if isinstance(v, float) else v


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return format(_clean(v), ".15g")
    return str(v)


def render(rows: Iterable[dict], fields: list[str], fmt: str) -> str:
    """Render rows as CSV (header first) or a JSON array of objects."""
    rows = list(rows)
    if fmt == "json":
        table = [{k: _clean(row.get(k)) for k in fields} for row in rows]
        return json.dumps(table, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for row in rows:
        w.writerow([_cell(row.get(k)) for k in fields])
    return buf.getvalue()
