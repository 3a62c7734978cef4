"""Experiment configuration: one flat JSON object, overridable from flags."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .curves import QuadratureRule
from .geodesic import OptimizerConfig
from .metric import METRICS, MetricSpec
from .sequence import vector

INITS = ("straight", "perturbed", "detour")


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    dim: int = 60
    p: list[float] = field(default_factory=list)
    q: list[float] = field(default_factory=lambda: [1.0])
    metric: str = "weak"
    n_max: int = 50
    segments: int = 12
    seed: int = 0
    out: str | None = None
    quad_nodes: int = 16
    quad_panels: int = 8
    quad_rtol: float = 1e-10
    quad_max_panels: int = 2**10
    max_iters: int = 5000
    grad_tol: float = 1e-8
    step: float = 1.0
    init: str = "detour"
    detour_n: int = 3
    perturb: float = 0.1

    def validate(self) -> "ExperimentConfig":
        for f in fields(self):
            value = getattr(self, f.name)
            if f.type in ("int", "float") and (isinstance(value, bool) or not isinstance(value, (int, float))):
                raise ConfigError(f.name, f"expected a number, got {value!r}")
            if f.type == "int" and int(value) != value:
                raise ConfigError(f.name, f"expected an integer, got {value!r}")
            if isinstance(value, float) and not math.isfinite(value):
                raise ConfigError(f.name, "must be finite")
        for name in ("dim", "n_max", "segments", "quad_nodes", "quad_panels", "quad_max_panels", "detour_n"):
            if getattr(self, name) < 1:
                raise ConfigError(name, "must be a positive integer")
        for name in ("p", "q"):
            coords = getattr(self, name)
            if not isinstance(coords, list) or not all(
                isinstance(c, (int, float)) and not isinstance(c, bool) for c in coords
            ):
                raise ConfigError(name, "expected a list of numbers")
            if len(coords) > self.dim:
                raise ConfigError(name, f"{len(coords)} coordinates exceed dim={self.dim}")
            if not all(math.isfinite(c) for c in coords):
                raise ConfigError(name, "coordinates must be finite")
        if self.metric not in METRICS:
            raise ConfigError("metric", f"expected one of {sorted(METRICS)}, got {self.metric!r}")
        if self.n_max > self.dim:
            raise ConfigError("n_max", f"n_max={self.n_max} exceeds dim={self.dim}")
        if self.init not in INITS:
            raise ConfigError("init", f"expected one of {INITS}, got {self.init!r}")
        if self.init == "detour" and self.detour_n > self.dim:
            raise ConfigError("detour_n", f"detour_n={self.detour_n} exceeds dim={self.dim}")
        if self.quad_nodes < 2:
            raise ConfigError("quad_nodes", "need at least 2 nodes per panel")
        if self.quad_panels > self.quad_max_panels:
            raise ConfigError("quad_panels", "exceeds quad_max_panels")
        if self.max_iters < 0:
            raise ConfigError("max_iters", "must be non-negative")
        for name in ("grad_tol", "step", "quad_rtol"):
            if not getattr(self, name) > 0:
                raise ConfigError(name, "must be positive")
        if self.perturb < 0:
            raise ConfigError("perturb", "must be non-negative")
        return self

    # -- derived objects

    @property
    def p_vec(self) -> np.ndarray:
        return vector(self.p, self.dim)

    @property
    def q_vec(self) -> np.ndarray:
        return vector(self.q, self.dim)

    @property
    def metric_spec(self) -> MetricSpec:
        return METRICS[self.metric]

    @property
    def quadrature(self) -> QuadratureRule:
        return QuadratureRule(self.quad_nodes, self.quad_panels, self.quad_rtol, self.quad_max_panels)

    @property
    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(
            max_iters=self.max_iters, grad_tol=self.grad_tol, step=self.step, rng_seed=self.seed
        )

    # -- serialization

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config", "expected a JSON object")
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown configuration key")
        data = dict(data)
        for name in ("p", "q"):
            if name in data and isinstance(data[name], tuple):
                data[name] = list(data[name])
        return cls(**data).validate()

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str | Path, overrides: dict | None = None) -> "ExperimentConfig":
        """Read ``path`` (if given) and apply ``overrides`` on top."""
        data = {}
        if path is not None:
            try:
                text = Path(path).read_text()
            except OSError as exc:
                raise ConfigError("config", f"cannot read {path}: {exc}") from None
            data = cls.from_json(text).to_dict()
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_dict(data)
