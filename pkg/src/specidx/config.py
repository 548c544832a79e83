"""Run configuration shared by the command-line subcommands."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields

from .errors import ConfigError
from .potentials import BUILTINS, PotentialSpec, from_name

SCHEMA_VERSION = 1

DEFAULT_PARAMS = {
    "square_well": {"depth": 6.0, "width": 2.0},
    "gaussian": {"depth": 8.0, "width": 1.0},
    "poschl_teller": {"strength": 2.0, "width": 1.0},
    "exponential": {"depth": 3.0, "decay": 1.0},
    "custom-table": {"x": [-2.0, -1.0, 0.0, 1.0, 2.0], "v": [0.0, -3.0, -5.0, -3.0, 0.0]},
    "gaussian_mixture": {"depths": [6.0, -3.0], "centers": [-1.0, 1.5], "widths": [0.8, 1.0]},
    "zero": {},
}


@dataclass
class RunConfig:
    potential: str = "gaussian"
    params: dict = field(default_factory=dict)
    lam_min: float = 0.05
    lam_max: float = 25.0
    npoints: int = 40
    nquad: int | None = None
    ode_tol: float = 1e-10
    tol_index: float = 1e-6
    tol_gap: float = 1e-3
    tol_sing: float | None = None
    bracket_width: float = 1e-4
    theta: float = math.pi
    output: str = "specidx_out"
    seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self, essential: bool = True):
        if self.potential not in BUILTINS:
            raise ConfigError(f"unknown potential {self.potential!r}; "
                              f"choose from {', '.join(sorted(BUILTINS))}")
        if not isinstance(self.params, dict):
            raise ConfigError("params must be a mapping")
        if self.npoints < 2:
            raise ConfigError("npoints must be at least 2")
        if not self.lam_max > self.lam_min:
            raise ConfigError("lam_max must exceed lam_min")
        if essential and not self.lam_min > 0:
            raise ConfigError("lam_min must be positive on the essential spectrum")
        if self.nquad is not None and self.nquad < 32:
            raise ConfigError("nquad must be at least 32")
        for name in ("ode_tol", "tol_index", "tol_gap", "bracket_width"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.tol_sing is not None and not self.tol_sing > 0:
            raise ConfigError("tol_sing must be positive")
        if not self.tol_index < self.tol_gap < 1:
            raise ConfigError("need tol_index < tol_gap < 1")
        if not 0 < self.theta < 2 * math.pi:
            raise ConfigError("theta must lie in (0, 2 pi)")

    def build_potential(self) -> PotentialSpec:
        params = {**DEFAULT_PARAMS.get(self.potential, {}), **self.params}
        try:
            return from_name(self.potential, **params)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad parameters for {self.potential}: {exc}") from None

    def lam_grid(self):
        import numpy as np
        return np.linspace(self.lam_min, self.lam_max, self.npoints)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config JSON must be an object")
        return cls.from_dict(data)
