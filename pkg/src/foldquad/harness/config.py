"""Scenario configuration: YAML file -> ScenarioConfig.

Every physical quantity is SI. Angles are radians unless the key carries a
``_deg`` suffix, in which case the value is converted and stored under the
key without the suffix.
"""

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np
import yaml

from ..control import AttitudeGains, PositionGains
from ..environment import C_WALL, K_WALL
from ..morphology import MorphParams


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class AdmittanceConfig:
    enabled: bool = True
    M: float = 0.01
    D: float = 0.2
    K: float = 1.0


@dataclass(frozen=True)
class IntegrationConfig:
    dt: float = 1e-3
    duration: float = 10.0
    control_rate: float = 1000.0   # Hz, position + attitude + allocation
    outer_rate: float = 120.0      # Hz, yaw admittance
    include_inertia_rate: bool = False
    divergence_bound: float = 1e6
    det_eps: float = 1e-6


@dataclass(frozen=True)
class InitialConfig:
    x: tuple = (0.0, 0.0, 0.0)
    v: tuple = (0.0, 0.0, 0.0)
    yaw: float = 0.0
    Omega: tuple = (0.0, 0.0, 0.0)
    beta1: float = np.pi / 2
    beta2: float = np.pi / 2


@dataclass(frozen=True)
class SetpointConfig:
    x_d: tuple = (0.0, 0.0, 0.0)
    yaw_d: float = 0.0


@dataclass(frozen=True)
class EnvironmentConfig:
    kind: str = "open"
    dims: dict = field(default_factory=dict)
    k_wall: float = K_WALL
    c_wall: float = C_WALL

    def __post_init__(self):
        if self.kind not in ("open", "gap", "passageway"):
            raise ValueError(f"unknown environment kind {self.kind!r}")
        if self.k_wall <= 0 or self.c_wall < 0:
            raise ValueError("wall stiffness must be positive and damping non-negative")


@dataclass(frozen=True)
class SweepConfig:
    beta1_range: tuple = (np.radians(-30.0), np.radians(210.0))
    beta2_range: tuple = (np.radians(-30.0), np.radians(210.0))
    n1: int = 49
    n2: int = 49


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "scenario"
    controller: str = "adaptive"     # adaptive | baseline
    lock_hinges: bool = False
    morph: MorphParams = field(default_factory=MorphParams)
    attitude: AttitudeGains = field(default_factory=AttitudeGains)
    position: PositionGains = field(default_factory=PositionGains)
    admittance: AdmittanceConfig = field(default_factory=AdmittanceConfig)
    integration: IntegrationConfig = field(default_factory=IntegrationConfig)
    initial: InitialConfig = field(default_factory=InitialConfig)
    setpoint: SetpointConfig = field(default_factory=SetpointConfig)
    environment: EnvironmentConfig = field(default_factory=EnvironmentConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    out_dir: str = "out"

    def __post_init__(self):
        if self.controller not in ("adaptive", "baseline"):
            raise ConfigError(f"controller must be 'adaptive' or 'baseline', not {self.controller!r}")
        it = self.integration
        if it.duration <= 0 or it.dt <= 0:
            raise ConfigError("duration and dt must be positive")
        if it.control_rate <= 0 or it.outer_rate <= 0:
            raise ConfigError("loop rates must be positive")

    def with_controller(self, controller):
        return replace(self, controller=controller)


_SECTIONS = {
    "morph": MorphParams,
    "attitude": AttitudeGains,
    "position": PositionGains,
    "admittance": AdmittanceConfig,
    "integration": IntegrationConfig,
    "initial": InitialConfig,
    "setpoint": SetpointConfig,
    "environment": EnvironmentConfig,
    "sweep": SweepConfig,
}


def _convert_deg(d):
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            v = _convert_deg(v)
        if k.endswith("_deg"):
            k = k[:-4]
            v = np.radians(v).tolist() if isinstance(v, list) else float(np.radians(v))
        if k in out:
            raise ConfigError(f"key {k!r} given both in degrees and radians")
        out[k] = v
    return out


def _build(cls, data, where):
    if not isinstance(data, dict):
        raise ConfigError(f"section {where!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in {where!r}: {sorted(unknown)}")
    kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in data.items()}
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def config_from_dict(data):
    data = _convert_deg(data or {})
    kwargs = {}
    for key, value in data.items():
        if key in _SECTIONS:
            kwargs[key] = _build(_SECTIONS[key], value, key)
        elif key in ("name", "controller", "lock_hinges", "out_dir"):
            kwargs[key] = value
        else:
            raise ConfigError(f"unknown top-level key {key!r}")
    try:
        return ScenarioConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return config_from_dict(data)
