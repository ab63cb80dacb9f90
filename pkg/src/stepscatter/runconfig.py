"""Run configuration: flat key-value config files plus command-line overrides.

The config format is one `key = value` pair per line with dotted section
prefixes (e.g. ``packet.l0 = 50.0``), ``#`` comments and blank lines.
Command-line flags override file values, which override the defaults.  The
defaults describe the reference scenario kappa0 = 1, a = 500/kappa0,
l0 = 50/kappa0, k_bar = 1.5*kappa0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .core import PhysicalConfig, StepPotential
from .errors import ConfigError
from .packet import SpatialGrid, SpectralProfile


@dataclass
class RunConfig:
    v0: float = 0.5
    a: float = 500.0
    hbar: float = 1.0
    mass: float = 1.0
    k: float | None = None
    k_min: float = 0.05
    k_max: float = 5.0
    k_count: int = 100
    k_scale: str = "linear"
    l0: float = 50.0
    k_bar: float = 1.5
    window_sigmas: float = 8.0
    nodes: int = 513
    x_min: float | None = None
    x_max: float | None = None
    n_points: int | None = None
    t_min: float = 0.0
    t_max: float = 880.0
    t_count: int = 45
    interval_l: float | None = None
    output: str | None = None
    format: str = "csv"
    threads: int = 1

    def validate(self) -> None:
        if self.v0 == 0.0:
            raise ConfigError("v0 must be nonzero")
        if not (self.a > 0.0):
            raise ConfigError(f"a must be positive, got {self.a}")
        if not (self.hbar > 0.0 and self.mass > 0.0):
            raise ConfigError("hbar and mass must be positive")
        if self.k is not None and not (self.k > 0.0):
            raise ConfigError(f"k must be positive, got {self.k}")
        if self.k_scale not in ("linear", "log"):
            raise ConfigError(f"k.scale must be linear or log, got {self.k_scale!r}")
        if self.k_count < 1:
            raise ConfigError(f"k.count must be at least 1, got {self.k_count}")
        if not (self.k_min > 0.0 and self.k_max >= self.k_min):
            raise ConfigError(
                f"need 0 < k.min <= k.max, got [{self.k_min}, {self.k_max}]"
            )
        if not (self.l0 > 0.0):
            raise ConfigError(f"packet.l0 must be positive, got {self.l0}")
        if not (self.k_bar > 0.0):
            raise ConfigError(f"packet.kbar must be positive, got {self.k_bar}")
        if not (self.window_sigmas > 0.0):
            raise ConfigError(
                f"packet.window_sigmas must be positive, got {self.window_sigmas}"
            )
        if self.nodes < 2:
            raise ConfigError(f"packet.nodes must be at least 2, got {self.nodes}")
        if self.n_points is not None and self.n_points < 2:
            raise ConfigError(f"grid.npoints must be at least 2, got {self.n_points}")
        if (self.x_min is None) != (self.x_max is None):
            raise ConfigError("grid.xmin and grid.xmax must be given together")
        if self.x_min is not None and not (self.x_min < self.x_max):
            raise ConfigError(f"need grid.xmin < grid.xmax, got [{self.x_min}, {self.x_max}]")
        if self.t_count < 1:
            raise ConfigError(f"times.count must be at least 1, got {self.t_count}")
        if not (self.t_max >= self.t_min):
            raise ConfigError(f"need times.tmin <= times.tmax, got [{self.t_min}, {self.t_max}]")
        if self.interval_l is not None and not (self.interval_l > 0.0):
            raise ConfigError(f"interval_l must be positive, got {self.interval_l}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"output.format must be csv or json, got {self.format!r}")
        if self.threads < 0:
            raise ConfigError(f"threads must be >= 0, got {self.threads}")
        # reject degenerate k values up front: every module diverges at k = kappa0
        step = self.step()
        if step.beta == 1:
            for kk in self.k_values():
                if kk == step.kappa0:
                    raise ConfigError(
                        "k grid contains k = kappa0 exactly; the repulsive step is "
                        "degenerate there (choose a grid avoiding it)"
                    )

    def physical(self) -> PhysicalConfig:
        return PhysicalConfig(self.hbar, self.mass)

    def step(self) -> StepPotential:
        return StepPotential(self.v0, self.a, self.physical())

    def k_values(self) -> np.ndarray:
        if self.k is not None:
            return np.array([self.k])
        if self.k_count == 1:
            return np.array([self.k_min])
        if self.k_scale == "log":
            return np.geomspace(self.k_min, self.k_max, self.k_count)
        return np.linspace(self.k_min, self.k_max, self.k_count)

    def profile(self) -> SpectralProfile:
        window = self.window_sigmas / (2.0 * self.l0)
        return SpectralProfile(self.l0, self.k_bar, window, self.nodes)

    def times(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_count)

    def observation_length(self) -> float:
        return self.interval_l if self.interval_l is not None else self.a

    def grid(self) -> SpatialGrid:
        """Spatial grid; derived from packet kinematics when not configured."""
        profile = self.profile()
        if self.x_min is not None:
            x_min, x_max = self.x_min, self.x_max
        else:
            cfg = self.physical()
            v_k = cfg.hbar * self.k_bar / cfg.mass
            spread_max = self.l0 * math.sqrt(
                1.0 + (cfg.hbar * self.t_max / (2.0 * cfg.mass * self.l0**2)) ** 2
            )
            x_min = min(0.0, 2.0 * self.a - v_k * self.t_max) - 10.0 * spread_max
            x_max = self.a + v_k * self.t_max + 10.0 * spread_max
        if self.n_points is not None:
            n_points = self.n_points
        else:
            spacing = 0.9 * math.pi / (4.0 * (profile.k_bar + profile.window))
            n_points = int(math.ceil((x_max - x_min) / spacing)) + 1
        return SpatialGrid(x_min, x_max, n_points)


_FILE_KEYS = {
    "v0": ("v0", float),
    "a": ("a", float),
    "hbar": ("hbar", float),
    "mass": ("mass", float),
    "k": ("k", float),
    "k.min": ("k_min", float),
    "k.max": ("k_max", float),
    "k.count": ("k_count", int),
    "k.scale": ("k_scale", str),
    "packet.l0": ("l0", float),
    "packet.kbar": ("k_bar", float),
    "packet.window_sigmas": ("window_sigmas", float),
    "packet.nodes": ("nodes", int),
    "grid.xmin": ("x_min", float),
    "grid.xmax": ("x_max", float),
    "grid.npoints": ("n_points", int),
    "times.tmin": ("t_min", float),
    "times.tmax": ("t_max", float),
    "times.count": ("t_count", int),
    "interval_l": ("interval_l", float),
    "output.path": ("output", str),
    "output.format": ("format", str),
    "threads": ("threads", int),
}


def parse_config_file(path: str | Path) -> dict[str, object]:
    """Parse a key-value config file into RunConfig attribute overrides."""
    overrides: dict[str, object] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _FILE_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        attr, typ = _FILE_KEYS[key]
        try:
            overrides[attr] = typ(value)
        except ValueError as exc:
            raise ConfigError(
                f"{path}:{lineno}: field {key!r}: cannot parse {value!r} as {typ.__name__}"
            ) from exc
    return overrides


def build_config(
    file_path: str | None, flag_overrides: dict[str, object]
) -> RunConfig:
    """Defaults, then config file values, then command-line flag overrides."""
    values: dict[str, object] = {}
    if file_path is not None:
        values.update(parse_config_file(file_path))
    values.update({k: v for k, v in flag_overrides.items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    config = RunConfig(**values)
    config.validate()
    return config
