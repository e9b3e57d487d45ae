"""Plain-text key=value experiment configuration.

Grammar: one ``key = value`` pair per line; blank lines and lines starting
with ``#`` are ignored; unknown keys are errors.  Grids are either
comma-separated explicit values or ``start:stop:count`` (linear) /
``start:stop:count:log`` (log-spaced).  A window is ``lo:hi``.

Recognized keys:
  model      jxy, jz, field (radial | uniform_z | uniform_x), b, temperature
  grids      b_grid, t_grid, ratios (anisotropy values J_xy/J_z), b_window
  optimizer  restarts, seed, max_iterations, cardinality_offset,
             gradient_step, convergence_tol, line_search_tol
  output     out
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .convexroof import OptimizerOptions
from .spinring import RADIAL, UNIFORM_X, UNIFORM_Z, FieldKind

_FIELD_KINDS = {"radial": RADIAL, "uniform_z": UNIFORM_Z, "uniform_x": UNIFORM_X}

_MODEL_KEYS = {"jxy", "jz", "field", "b", "temperature"}
_GRID_KEYS = {"b_grid", "t_grid", "ratios", "b_window"}
_OPTIMIZER_KEYS = {
    "restarts",
    "seed",
    "max_iterations",
    "cardinality_offset",
    "gradient_step",
    "convergence_tol",
    "line_search_tol",
}
_OUTPUT_KEYS = {"out"}
KNOWN_KEYS = _MODEL_KEYS | _GRID_KEYS | _OPTIMIZER_KEYS | _OUTPUT_KEYS

_INT_OPTIMIZER_KEYS = {"restarts", "seed", "max_iterations", "cardinality_offset"}


class ConfigError(ValueError):
    """Malformed configuration file or inconsistent values."""


@dataclass(frozen=True)
class SweepConfig:
    """Model template, grids, optimizer settings and output path."""

    jxy: float = 1.0
    jz: float = 1.0
    field: FieldKind = RADIAL
    b: float = 0.0
    temperature: float = 0.0
    b_grid: np.ndarray | None = None
    t_grid: np.ndarray | None = None
    ratios: np.ndarray | None = None
    b_window: tuple[float, float] | None = None
    optimizer: OptimizerOptions = OptimizerOptions()
    output_path: str | None = None

    def __post_init__(self):
        for name in ("b_grid", "t_grid", "ratios"):
            grid = getattr(self, name)
            if grid is None:
                continue
            grid = np.asarray(grid, dtype=float)
            if grid.size == 0:
                raise ConfigError(f"{name} is empty")
            if grid.size > 1 and not np.all(np.diff(grid) > 0):
                raise ConfigError(f"{name} must be strictly increasing")
            object.__setattr__(self, name, grid)
        if self.ratios is not None:
            # anisotropic sweeps target J_z > 0, -2 J_z < J_xy <= J_z
            if np.any(self.ratios <= -2.0) or np.any(self.ratios > 1.0):
                raise ConfigError("ratios must lie in (-2, 1]")
        if self.b_window is not None:
            lo, hi = self.b_window
            if not 0.0 < lo < hi:
                raise ConfigError(f"b_window ({lo}, {hi}) must satisfy 0 < lo < hi")


def parse_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:count[:log]' or a comma-separated list of floats."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) == 4 and parts[3].strip() == "log":
                log = True
            elif len(parts) == 3:
                log = False
            else:
                raise ConfigError(f"grid {text!r} is not start:stop:count[:log]")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ConfigError(f"grid {text!r} has count < 1")
            if log:
                if start <= 0 or stop <= 0:
                    raise ConfigError(f"log grid {text!r} needs positive endpoints")
                return np.logspace(np.log10(start), np.log10(stop), count)
            return np.linspace(start, stop, count)
        return np.array([float(v) for v in text.split(",")])
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse grid {text!r}: {exc}") from exc


def _parse_window(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ConfigError(f"window {text!r} is not lo:hi")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"cannot parse window {text!r}: {exc}") from exc


def parse_config_text(text: str) -> SweepConfig:
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value

    kwargs: dict = {}
    opt_kwargs: dict = {}
    try:
        for key, value in pairs.items():
            if key == "field":
                if value not in _FIELD_KINDS:
                    raise ConfigError(
                        f"field {value!r} is not one of {sorted(_FIELD_KINDS)}"
                    )
                kwargs["field"] = _FIELD_KINDS[value]
            elif key in ("jxy", "jz", "b", "temperature"):
                kwargs[key] = float(value)
            elif key in ("b_grid", "t_grid", "ratios"):
                kwargs[key] = parse_grid(value)
            elif key == "b_window":
                kwargs["b_window"] = _parse_window(value)
            elif key == "out":
                kwargs["output_path"] = value
            else:
                cast = int if key in _INT_OPTIMIZER_KEYS else float
                opt_kwargs[key] = cast(value)
        kwargs["optimizer"] = OptimizerOptions(**opt_kwargs)
        return SweepConfig(**kwargs)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> SweepConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config_text(text)
