"""Scenario configuration shared by the CLI and the experiment scripts."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .noise import R_DEFAULT, System
from .oracle import McConfig


@dataclass(frozen=True)
class EtaGrid:
    min: float = 0.0
    max: float = 0.5
    steps: int = 501

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("eta grid needs at least 2 steps")
        if not (0 <= self.min < self.max < 1):
            raise ValueError("need 0 <= eta_min < eta_max < 1")


@dataclass(frozen=True)
class OptimizerConfig:
    tolerance: float = 1e-7
    max_iters: int = 200
    grid_points: int = 1000

    def __post_init__(self):
        if self.tolerance <= 0 or self.max_iters < 1 or self.grid_points < 3:
            raise ValueError("invalid optimizer settings")


@dataclass(frozen=True)
class ScenarioConfig:
    system: System = System.RB87
    rho0: float = 100.0
    eta_grid: EtaGrid = field(default_factory=EtaGrid)
    r_ratio: float = R_DEFAULT
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    mc: McConfig | None = None
    line_data: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "system", System.parse(self.system))
        if self.rho0 <= 0:
            raise ValueError("rho0 must be positive")
        if self.r_ratio <= 0:
            raise ValueError("r_ratio must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        d = dict(d)
        if "eta_grid" in d:
            d["eta_grid"] = EtaGrid(**d["eta_grid"])
        if "optimizer" in d:
            d["optimizer"] = OptimizerConfig(**d["optimizer"])
        if d.get("mc") is not None:
            d["mc"] = McConfig(**d["mc"])
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> "ScenarioConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["system"] = self.system.value
        if d["mc"] is not None:
            d["mc"].pop("noise", None)
        return d
