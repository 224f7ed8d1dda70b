from __future__ import annotations

import argparse
import asyncio
import sys
import time
from typing import Callable, TypeVar

from susygreen.config import (
    DEFAULT_SETTINGS,
    SECTOR_EXCLUSION,
    RunConfig,
    check_energies,
    load_config_file,
    max_workers,
    parse_energies,
    parse_points,
    parse_range,
)
from susygreen.darboux import Case
from susygreen.density import density_report
from susygreen.errors import BranchError, ConfigError, DomainError, SusyGreenError
from susygreen.models import discover_models, get_model
from susygreen.pipeline import Setup, build_state, setup_from_config, truncation_bound
from susygreen.report import (
    DENSITY_HALF_FIELDS,
    DENSITY_LINE_FIELDS,
    GREEN_FIELDS,
    TRACE_FIELDS,
    VERIFY_FIELDS,
    append_result,
    density_row,
    green_row,
    render,
    trace_row,
)
from susygreen.schrodinger import Domain, momentum_of
from susygreen.traceform import trace_report
from susygreen.utils import set_verbose, status
from susygreen.verify import CHECKS, FAIL, CheckResult

T = TypeVar("T")
R = TypeVar("R")


# MARK: Argument parsing
def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv",
                        help="Output table format (default: csv)")
    common.add_argument("--tol", type=float, default=None,
                        help="Verification tolerance (default: 1e-6)")
    common.add_argument("--xmax", type=float, default=None,
                        help="Truncation bound; default picks it from the decay rates")
    common.add_argument("--config", default=None, metavar="FILE",
                        help="JSON file of flag defaults (keys are long flag names)")
    common.add_argument("-j", "--max-jobs", type=int, default=4,
                        help="Maximum number of energies/checks computed in parallel "
                        "(default: 4; capped by SUSYGREEN_MAX_THREADS)")
    common.add_argument("--verbose", action="store_true",
                        help="Print solver debug output (off by default)")
    common.add_argument("--model", default=None, choices=sorted(discover_models()),
                        help="Reference model (partner models carry their own transform)")
    common.add_argument("--a", type=float, default=1.0, help="Model parameter a (default: 1)")
    common.add_argument("--parent", default=None,
                        help="Model whose potential is transformed (with --alpha, --u-spec)")
    common.add_argument("--alpha", type=float, default=None, help="Factorization constant")
    common.add_argument("--u-spec", default=None,
                        help="Factorization solution: left, right, even, odd or bound")

    parser = argparse.ArgumentParser(
        prog="python -m susygreen",
        description="Green functions and trace formulas for SUSY (Darboux) partner "
        "Hamiltonians.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {}

    p = commands["green"] = sub.add_parser("green", parents=[common],
                                           help="Evaluate G0 and G1 at points")
    p.add_argument("--energy", default="-4",
                   help="Complex energy (write --energy=-4 for negative values)")
    p.add_argument("--epsilon", type=float, default=None,
                   help="Shift the energy to E + i*epsilon (reaches the real axis)")
    p.add_argument("--points", default="0,0", help="Evaluation points x,y[;x,y...]")

    p = commands["trace-sweep"] = sub.add_parser(
        "trace-sweep", parents=[common],
        help="Numeric trace, boundary forms and closed form per energy")
    p.add_argument("--energy", default="-4,-2,-0.5",
                   help="Energy list or random:N[:seed] (write --energy=... for negatives)")
    p.add_argument("--epsilon", type=float, default=None)

    p = commands["density"] = sub.add_parser("density", parents=[common],
                                             help="Spectral density differences")
    p.add_argument("--k", default="0:5:0.5", help="Momenta a:b:step or k1,k2,...")
    p.add_argument("--window", type=float, default=None,
                   help="Half-line window A (required for half-line models)")

    p = commands["verify"] = sub.add_parser("verify", parents=[common],
                                            help="Run the verification suite")
    p.add_argument("--results", default=None, metavar="FILE",
                   help="Append one JSON line per finished check to FILE")
    return parser, commands


def parse_args(argv: list[str] | None) -> argparse.Namespace:
    """Two-phase parse: apply --config as defaults and let the model add its arguments."""
    parser, commands = build_parser()
    args, _ = parser.parse_known_args(argv)
    subparser = commands[args.command]
    if args.config:
        subparser.set_defaults(**load_config_file(args.config))
    args, _ = parser.parse_known_args(argv)
    if args.model:
        get_model(args.model).add_cli_args(subparser)
    return parser.parse_args(argv)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    settings = DEFAULT_SETTINGS.with_overrides(verify_tol=args.tol, x_max=args.xmax)
    kwargs = dict(command=args.command, model=args.model, a=args.a, parent=args.parent,
                  alpha=args.alpha, u_spec=args.u_spec, fmt=args.fmt,
                  max_jobs=max_workers(args.max_jobs), settings=settings)
    if args.command in ("green", "trace-sweep"):
        energies = parse_energies(str(args.energy))
        if args.epsilon is not None:
            energies = [momentum_of(e, args.epsilon).E for e in energies]
        kwargs["energies"] = tuple(energies)
    if args.command == "green":
        kwargs["points"] = tuple(parse_points(args.points))
    if args.command == "density":
        kwargs["ks"] = tuple(parse_range(str(args.k)))
        kwargs["window"] = args.window
    return RunConfig(**kwargs)


def validate(cfg: RunConfig, setup: Setup | None, shifted: bool = False) -> None:
    """Reject requests that cannot be computed; ``shifted`` energies may sit near the axis."""
    if setup is None:
        return
    # a --parent transform only learns its case when built; exclude the pole disc
    pole = setup.has_transform and setup.expect_case in (Case.ADD_GROUND_STATE, None)
    sector = 0.0 if shifted else SECTOR_EXCLUSION
    check_energies(list(cfg.energies), alpha=setup.alpha, pole=pole, sector=sector)
    if setup.has_transform:
        floor = cfg.settings.tol.wronskian_floor * max(1.0, abs(setup.alpha))
        for e in cfg.energies:
            if abs(e - setup.alpha) < floor:
                raise ConfigError(f"energy {e} equals alpha={setup.alpha}: (E - alpha)W0 "
                                  f"vanishes there")
    if cfg.command == "green" and len(cfg.energies) != 1:
        raise ConfigError("green takes exactly one energy")
    for e in cfg.energies:
        momentum_of(e)
    if cfg.command == "green":
        X = truncation_bound(setup, momentum_of(cfg.energies[0]), cfg.settings)
        lo = 0.0 if setup.V0.domain is Domain.HALF_LINE else -X
        for v in (p for pt in cfg.points for p in pt):
            if not lo <= v <= X:
                raise ConfigError(f"point {v} outside the truncation window [{lo:g}, {X:g}]")
    if cfg.command == "trace-sweep" and not setup.has_transform:
        raise ConfigError(f"{setup.V0.name} has no transform: pick a partner model or --parent")
    if cfg.command == "density":
        if setup.model is None or setup.model.transform is None:
            raise ConfigError("density needs a partner reference model (--model)")
        if setup.V0.domain is Domain.HALF_LINE and cfg.window is None:
            raise ConfigError("half-line densities need --window A")


# MARK: Parallel map
async def gather_limited(fn: Callable[[T], R], items: list[T], max_jobs: int,
                         label: str) -> list[R]:
    """Run fn over items in worker threads, at most max_jobs at once, in input order."""
    semaphore = asyncio.Semaphore(max_jobs)
    total = len(items)
    done = 0

    async def run_with_limit(item: T) -> R:
        nonlocal done
        async with semaphore:
            out = await asyncio.to_thread(fn, item)
        done += 1
        status(f"{label} {done}/{total}")
        return out

    return await asyncio.gather(*(run_with_limit(it) for it in items))


# MARK: Commands
async def cmd_green(cfg: RunConfig, setup: Setup) -> int:
    xs = [p for pt in cfg.points for p in pt]
    E = momentum_of(cfg.energies[0])
    # points in [0, x0) of a half-line grid are reached by continuation, not as nodes
    full = setup.V0.domain is Domain.FULL_LINE
    x0 = cfg.settings.grid.origin_offset
    s = build_state(setup, E, cfg.settings, include=[v for v in xs if full or v >= x0])
    rows = []
    for x, y in sorted(cfg.points):
        rows.append(green_row("G0", x, y, complex(s.G0(x, y))))
        if s.G1 is not None:
            rows.append(green_row("G1", x, y, complex(s.G1(x, y))))
    rows.sort(key=lambda r: (r["kernel"], r["x"], r["y"]))
    sys.stdout.write(render(rows, GREEN_FIELDS, cfg.fmt))
    return 0


async def cmd_trace_sweep(cfg: RunConfig, setup: Setup) -> int:
    def one(E: complex):
        s = build_state(setup, momentum_of(E), cfg.settings)
        return trace_report(s.G0, s.G1, s.d, cfg.settings.tol, closed=setup.closed_trace)

    reports = await gather_limited(one, list(cfg.energies), cfg.max_jobs, "trace")
    sys.stdout.write(render([trace_row(r) for r in reports], TRACE_FIELDS, cfg.fmt))
    bad = [r for r in reports if r.max_disc > cfg.settings.tol.verify_tol]
    if bad:
        status(f"{len(bad)}/{len(reports)} energies exceed tolerance "
               f"{cfg.settings.tol.verify_tol:g}")
        return 1
    return 0


async def cmd_density(cfg: RunConfig, setup: Setup) -> int:
    model = setup.model
    reports = await gather_limited(lambda k: density_report(model, k, cfg.window),
                                   list(cfg.ks), cfg.max_jobs, "density")
    fields = DENSITY_LINE_FIELDS if cfg.window is None or model.continuum == "line" \
        else DENSITY_HALF_FIELDS
    sys.stdout.write(render([density_row(r) for r in reports], fields, cfg.fmt))
    tol = 1e-8 if model.continuum == "line" else 1e-8 * (1 + (cfg.window or 0))
    bad = [r for r in reports if abs(r.numeric_value - r.analytic_value) > tol]
    return 1 if bad else 0


async def cmd_verify(cfg: RunConfig, results: str | None) -> int:
    def one(check):
        t0 = time.time()
        try:
            res = check(cfg.settings)
        except SusyGreenError as e:
            res = CheckResult(check.__name__.removeprefix("check_"), FAIL, "", "",
                              float("inf"), f"{type(e).__name__}: {e}")
        if results:
            append_result(results, {"ts": time.time(), **res.as_row(),
                                    "elapsed": round(time.time() - t0, 3)})
        return res

    out = await gather_limited(one, CHECKS, cfg.max_jobs, "check")
    sys.stdout.write(render([r.as_row() for r in out], VERIFY_FIELDS, cfg.fmt))
    return 1 if any(r.status == FAIL for r in out) else 0


async def main(argv: list[str] | None = None) -> int:
    # Configuration problems exit 2, failures while computing exit 1.
    try:
        args = parse_args(argv)
        set_verbose(args.verbose)
        cfg = config_from_args(args)
        setup = None if cfg.command == "verify" else setup_from_config(cfg, args)
        validate(cfg, setup, shifted=getattr(args, "epsilon", None) is not None)
    except (ConfigError, BranchError, DomainError) as e:
        print(f"FATAL: {e}", file=sys.stderr)
        return 2
    try:
        if cfg.command == "green":
            return await cmd_green(cfg, setup)
        if cfg.command == "trace-sweep":
            return await cmd_trace_sweep(cfg, setup)
        if cfg.command == "density":
            return await cmd_density(cfg, setup)
        return await cmd_verify(cfg, args.results)
    except SusyGreenError as e:
        print(f"FATAL: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(asyncio.run(main()))


if __name__ == "__main__":
    entry()
