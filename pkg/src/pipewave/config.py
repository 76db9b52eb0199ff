"""Line-oriented ``key = value`` run configuration.

Dotted keys group related settings (``pipe.length_m = 2000``); ``#`` starts a
comment.  Unknown keys, duplicates and missing required keys are rejected
with the offending key and line number.  :func:`emit_config` is the inverse
serializer: ``parse_config(emit_config(cfg))`` reproduces an equal config.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .core import (FrictionParams, LinearAltitude, PhysicalConstants,
                   PipeGeometry, effective_wave_speed, sound_speed)
from .scenarios import PrescribedDischarge, ReservoirHead, Scenario, ValveClosure


class ConfigError(ValueError):
    """Malformed or invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    solver: str = "kinetic"
    output_dir: str = "out"
    cfl: float = 0.8
    snapshot_stride: int = 0      # 0: initial and final snapshots only

    def __post_init__(self):
        if self.solver not in ("kinetic", "moc", "both"):
            raise ConfigError(f"run.solver must be kinetic|moc|both, got {self.solver!r}")
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"run.cfl must lie in (0, 1], got {self.cfl}")
        if self.snapshot_stride < 0:
            raise ConfigError("output.snapshot_stride must be >= 0")


def _parse_bool(key, raw):
    lowered = raw.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"key {key}: expected a boolean, got {raw!r}")


def _parse_float(key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"key {key}: expected a number, got {raw!r}") from None


def _parse_int(key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"key {key}: expected an integer, got {raw!r}") from None


def _parse_floats(key, raw):
    try:
        return tuple(float(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"key {key}: expected comma-separated numbers, got {raw!r}") from None


def _parse_str(key, raw):
    return raw


# key -> (parser, default); _REQUIRED marks keys without a default
_REQUIRED = object()
_SCHEMA = {
    "pipe.length_m": (_parse_float, _REQUIRED),
    "pipe.section_m2": (_parse_float, _REQUIRED),
    "pipe.wall_thickness_m": (_parse_float, _REQUIRED),
    "pipe.young_modulus_pa": (_parse_float, _REQUIRED),
    "pipe.upstream_altitude_m": (_parse_float, _REQUIRED),
    "pipe.slope_deg": (_parse_float, _REQUIRED),
    "fluid.gravity_m_s2": (_parse_float, 9.81),
    "fluid.compressibility_per_pa": (_parse_float, _REQUIRED),
    "fluid.density_kg_m3": (_parse_float, _REQUIRED),
    "fluid.wave_speed_m_s": (_parse_float, None),   # None: derive from the elastic pipe
    "friction.enabled": (_parse_bool, False),
    "friction.strickler": (_parse_float, 0.0),
    "boundary.upstream_head_m": (_parse_float, _REQUIRED),
    "boundary.closure_duration_s": (_parse_float, _REQUIRED),
    "boundary.closure_law": (_parse_str, "linear"),
    "flow.initial_discharge_m3s": (_parse_float, _REQUIRED),
    "run.t_end_s": (_parse_float, _REQUIRED),
    "run.cells": (_parse_int, _REQUIRED),
    "run.cfl": (_parse_float, 0.8),
    "run.solver": (_parse_str, "kinetic"),
    "output.dir": (_parse_str, "out"),
    "output.stride": (_parse_int, 20),
    "output.snapshot_stride": (_parse_int, 0),
    "output.probes_m": (_parse_floats, None),       # None: mid-pipe
}


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a configuration document."""
    raw = {}
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.rstrip()!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"duplicate key {key!r} on lines {lines[key]} and {lineno}")
        if not value:
            raise ConfigError(f"line {lineno}: key {key!r} has an empty value")
        raw[key] = value
        lines[key] = lineno

    missing = [key for key, (_, default) in _SCHEMA.items()
               if default is _REQUIRED and key not in raw]
    if missing:
        raise ConfigError("missing required keys: " + ", ".join(sorted(missing)))

    values = {}
    for key, (parser, default) in _SCHEMA.items():
        values[key] = parser(key, raw[key]) if key in raw else default

    return _build(values)


def _build(v) -> RunConfig:
    def positive(key):
        if v[key] is not None and v[key] <= 0:
            raise ConfigError(f"key {key}: must be positive, got {v[key]}")

    for key in ("pipe.length_m", "pipe.section_m2", "pipe.wall_thickness_m",
                "pipe.young_modulus_pa", "fluid.gravity_m_s2",
                "fluid.compressibility_per_pa", "fluid.density_kg_m3",
                "fluid.wave_speed_m_s", "boundary.closure_duration_s",
                "run.cells"):
        positive(key)
    if v["run.t_end_s"] < 0:
        raise ConfigError("key run.t_end_s: must be non-negative")
    if v["friction.enabled"] and v["friction.strickler"] <= 0:
        raise ConfigError("key friction.strickler: must be positive when friction is enabled")

    altitude = LinearAltitude(upstream_z=v["pipe.upstream_altitude_m"],
                              angle_deg=v["pipe.slope_deg"])
    try:
        geometry = PipeGeometry.circular(
            length=v["pipe.length_m"], section=v["pipe.section_m2"],
            wall_thickness=v["pipe.wall_thickness_m"],
            young_modulus=v["pipe.young_modulus_pa"], altitude=altitude)
        c = v["fluid.wave_speed_m_s"]
        if c is None:
            c = effective_wave_speed(
                sound_speed(v["fluid.compressibility_per_pa"], v["fluid.density_kg_m3"]),
                geometry.diameter, geometry.wall_thickness, geometry.young_modulus,
                v["fluid.compressibility_per_pa"])
        constants = PhysicalConstants(g=v["fluid.gravity_m_s2"],
                                      beta=v["fluid.compressibility_per_pa"],
                                      rho0=v["fluid.density_kg_m3"], c=c)
        friction = FrictionParams(enabled=v["friction.enabled"],
                                  strickler=v["friction.strickler"])
        closure = ValveClosure(q0=v["flow.initial_discharge_m3s"],
                               t_close=v["boundary.closure_duration_s"],
                               kind=v["boundary.closure_law"])
        probes = v["output.probes_m"]
        if probes is None:
            probes = (v["pipe.length_m"] / 2.0,)
        scenario = Scenario(
            geometry=geometry, constants=constants, friction=friction,
            mesh_cells=v["run.cells"],
            upstream=ReservoirHead(total_head=v["boundary.upstream_head_m"]),
            downstream=PrescribedDischarge(law=closure),
            initial_discharge=v["flow.initial_discharge_m3s"],
            t_end=v["run.t_end_s"], output_stride=v["output.stride"],
            probes=probes)
        return RunConfig(scenario=scenario, solver=v["run.solver"],
                         output_dir=v["output.dir"], cfl=v["run.cfl"],
                         snapshot_stride=v["output.snapshot_stride"])
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def emit_config(config: RunConfig) -> str:
    """Serialize a RunConfig back to the key=value format."""
    scenario = config.scenario
    geometry = scenario.geometry
    closure = scenario.downstream.law
    if not isinstance(closure, ValveClosure):
        raise ConfigError("only valve-closure discharge laws can be serialized")
    pairs = [
        ("pipe.length_m", geometry.length),
        ("pipe.section_m2", geometry.section),
        ("pipe.wall_thickness_m", geometry.wall_thickness),
        ("pipe.young_modulus_pa", geometry.young_modulus),
        ("pipe.upstream_altitude_m", geometry.altitude.upstream_z),
        ("pipe.slope_deg", geometry.altitude.angle_deg),
        ("fluid.gravity_m_s2", scenario.constants.g),
        ("fluid.compressibility_per_pa", scenario.constants.beta),
        ("fluid.density_kg_m3", scenario.constants.rho0),
        ("fluid.wave_speed_m_s", scenario.constants.c),
        ("friction.enabled", scenario.friction.enabled),
        ("friction.strickler", scenario.friction.strickler),
        ("boundary.upstream_head_m", scenario.upstream.total_head),
        ("boundary.closure_duration_s", closure.t_close),
        ("boundary.closure_law", closure.kind),
        ("flow.initial_discharge_m3s", scenario.initial_discharge),
        ("run.t_end_s", scenario.t_end),
        ("run.cells", scenario.mesh_cells),
        ("run.cfl", config.cfl),
        ("run.solver", config.solver),
        ("output.dir", config.output_dir),
        ("output.stride", scenario.output_stride),
        ("output.snapshot_stride", config.snapshot_stride),
        ("output.probes_m", ",".join(repr(x) for x in scenario.probes)),
    ]

    def fmt(value):
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return repr(value)
        return str(value)

    return "\n".join(f"{key} = {fmt(value)}" for key, value in pairs) + "\n"


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text())
