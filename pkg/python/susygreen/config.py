"""Run configuration: tolerances, grid settings and the parsed CLI request.

Defaults live on the dataclasses. The CLI layers a JSON file (``--config``) and
explicit flags on top; ``SUSYGREEN_MAX_THREADS`` caps the worker count.
"""

from __future__ import annotations

import cmath
import json
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from susygreen.errors import ConfigError

#: Environment variable honored as an upper bound on sweep workers.
THREADS_ENV = "SUSYGREEN_MAX_THREADS"

#: Half-width (radians) of the excluded sector around the positive real E axis.
SECTOR_EXCLUSION = 1e-3

#: Radius of the excluded disc around α when the transform adds a ground state.
POLE_EXCLUSION = 1e-3


# MARK: Tolerances
@dataclass(frozen=True)
class Tolerances:
    ode_rtol: float = 1e-10
    ode_atol: float = 1e-13
    #: Schrödinger residual threshold, relative to 1 + max|f|.
    residual_tol: float = 1e-6
    #: |W0| below wronskian_floor·|κ| is treated as a spectral point.
    wronskian_floor: float = 1e-8
    #: Relative agreement required between W(Lf_r, Lf_l) and (E − α)W0.
    wronskian_tol: float = 1e-8
    #: Boundary products must agree between x_max and x_max/2 to this level.
    asymptotic_tol: float = 1e-7
    #: Summed quad error estimate allowed for a Stieltjes transform.
    quad_tol: float = 1e-9
    #: Comparison tolerance for verification against closed forms.
    verify_tol: float = 1e-6
    magnitude_cap: float = 1e200

    def __post_init__(self) -> None:
        for name, value in vars(self).items():
            if not value > 0:
                raise ConfigError(f"tolerance {name} must be > 0 (got {value!r})")


@dataclass(frozen=True)
class GridSettings:
    #: Truncation bound; None picks max(decay_factor/Im κ, decay_factor/a_pot).
    x_max: float | None = None
    #: Node spacing; None picks min(0.01, 0.05/|κ|).
    step: float | None = None
    #: First node on a half line whose potential (or partner) is singular at 0.
    origin_offset: float = 1e-4
    #: Upper bound applied to the automatic x_max.
    window_cap: float = 200.0
    decay_factor: float = 40.0

    def __post_init__(self) -> None:
        if self.x_max is not None and not self.x_max > 0:
            raise ConfigError(f"x_max must be > 0 (got {self.x_max!r})")
        if self.step is not None and not self.step > 0:
            raise ConfigError(f"step must be > 0 (got {self.step!r})")
        if not 0 < self.origin_offset < 1:
            raise ConfigError(f"origin_offset must lie in (0, 1) (got {self.origin_offset!r})")


@dataclass(frozen=True)
class Settings:
    """Everything numerical a computation needs besides its inputs."""

    tol: Tolerances = field(default_factory=Tolerances)
    grid: GridSettings = field(default_factory=GridSettings)

    def with_overrides(self, *, verify_tol: float | None = None,
                       x_max: float | None = None) -> "Settings":
        tol, grid = self.tol, self.grid
        if verify_tol is not None:
            tol = replace(tol, verify_tol=verify_tol)
        if x_max is not None:
            grid = replace(grid, x_max=x_max)
        return Settings(tol=tol, grid=grid)


DEFAULT_SETTINGS = Settings()


# MARK: Parsers
def parse_energies(text: str, sector: float = SECTOR_EXCLUSION) -> list[complex]:
    """Parse an energy list: ``-4,-2,1+2j`` or ``random:N[:seed]``.

    Random energies have |E| log-uniform in [0.5, 50] and arg E uniform in
    (sector, 2π − sector), so they never touch the continuous spectrum.
    """
    text = text.strip()
    if not text:
        raise ConfigError("empty energy list")
    if text.startswith("random:"):
        parts = text.split(":")
        try:
            n = int(parts[1])
            seed = int(parts[2]) if len(parts) > 2 else 0
        except (IndexError, ValueError):
            raise ConfigError(f"malformed random energy list {text!r}") from None
        if n < 1:
            raise ConfigError(f"random energy count must be >= 1 (got {n})")
        rng = np.random.default_rng(seed)
        mags = np.exp(rng.uniform(math.log(0.5), math.log(50.0), n))
        args = rng.uniform(sector, 2 * math.pi - sector, n)
        return [complex(cmath.rect(m, t)) for m, t in zip(mags, args)]
    out = []
    for item in text.split(","):
        try:
            out.append(complex(item.strip().replace("i", "j")))
        except ValueError:
            raise ConfigError(f"cannot parse energy {item!r}") from None
    return out


def check_energies(energies: list[complex], alpha: float | None = None,
                   pole: bool = False, sector: float = SECTOR_EXCLUSION) -> None:
    """Reject energies on the continuous spectrum sector or at the case (ii) pole."""
    for e in energies:
        if e == 0 or (e.real > 0 and abs(math.atan2(e.imag, e.real)) < sector):
            raise ConfigError(f"energy {e} on continuous spectrum")
        if pole and alpha is not None and abs(e - alpha) < POLE_EXCLUSION:
            raise ConfigError(f"energy {e} within {POLE_EXCLUSION} of the pole at alpha={alpha}")


def parse_range(text: str) -> list[float]:
    """Parse ``a:b:step`` (inclusive of b when it lands on the grid) or ``v1,v2,...``."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise ValueError
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(n)]
        values = [float(p) for p in text.split(",") if p.strip()]
        if not values:
            raise ValueError
        return values
    except ValueError:
        raise ConfigError(f"malformed range {text!r} (expected a:b:step or v1,v2,...)") from None


def parse_points(text: str) -> list[tuple[float, float]]:
    """Parse ``x,y[;x,y...]`` evaluation points."""
    pts = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        try:
            x, y = (float(v) for v in item.split(","))
        except ValueError:
            raise ConfigError(f"malformed point {item!r} (expected x,y)") from None
        pts.append((x, y))
    if not pts:
        raise ConfigError("no evaluation points given")
    return pts


# MARK: Config file and worker cap
def load_config_file(path: str) -> dict:
    """Read a JSON config whose keys are long flag names (``-`` or ``_``)."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def max_workers(requested: int) -> int:
    """Clamp the requested job count by ``SUSYGREEN_MAX_THREADS`` (if set)."""
    if requested < 1:
        raise ConfigError(f"--max-jobs must be >= 1 (got {requested})")
    cap = os.environ.get(THREADS_ENV)
    if cap is None:
        return requested
    try:
        cap_n = int(cap)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer (got {cap!r})") from None
    return max(1, min(requested, cap_n))


# MARK: Run request
@dataclass(frozen=True)
class RunConfig:
    """A fully parsed CLI request."""

    command: str
    model: str | None = None
    a: float = 1.0
    parent: str | None = None
    alpha: float | None = None
    u_spec: str | None = None
    energies: tuple[complex, ...] = ()
    points: tuple[tuple[float, float], ...] = ()
    ks: tuple[float, ...] = ()
    window: float | None = None
    fmt: str = "csv"
    max_jobs: int = 4
    settings: Settings = DEFAULT_SETTINGS

    def __post_init__(self) -> None:
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.fmt!r}")
        if self.window is not None and not self.window > 0:
            raise ConfigError(f"--window must be > 0 (got {self.window!r})")
        if not self.a > 0:
            raise ConfigError(f"--a must be > 0 (got {self.a!r})")
