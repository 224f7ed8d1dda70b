# python/susygreen/__init__.py

from susygreen.darboux import Case, DarbouxData, USpec, build_transform, green1, green1_limit
from susygreen.density import density_report, pk_fullline, pkA_halfline, stieltjes_forward
from susygreen.greenfn import GreenFunction, SolverContext, assemble_green
from susygreen.models import ReferenceModel, discover_models, get_model, reference_green
from susygreen.pipeline import Setup, State, build_state, setup_from_model, setup_from_parent
from susygreen.schrodinger import EnergyPoint, Potential, momentum_of, solve_left, solve_right
from susygreen.traceform import TraceReport, trace_numeric, trace_report

__version__ = "0.1.0"

__all__ = [
    "Case",
    "DarbouxData",
    "USpec",
    "build_transform",
    "green1",
    "green1_limit",
    "density_report",
    "pk_fullline",
    "pkA_halfline",
    "stieltjes_forward",
    "GreenFunction",
    "SolverContext",
    "assemble_green",
    "ReferenceModel",
    "discover_models",
    "get_model",
    "reference_green",
    "Setup",
    "State",
    "build_state",
    "setup_from_model",
    "setup_from_parent",
    "EnergyPoint",
    "Potential",
    "momentum_of",
    "solve_left",
    "solve_right",
    "TraceReport",
    "trace_numeric",
    "trace_report",
]
