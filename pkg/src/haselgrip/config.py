"""Project configuration: designs, material defaults, calibration, mission.

A config is a TOML file whose dimensional values carry unit suffixes
(``"10 mm"``, ``"8 kV"``). Parsing is strict: unknown keys and unresolved
design references are errors. A user file is merged over the built-in
design library in ``data/designs.toml``.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .actuator import DielectricSpec, PouchGeometry
from .composition import FingerConfig, ScorpionUnit, Unit
from .errors import ValidationError
from .explorer import theta_max_for_width
from .hinge import DEFAULT_MIN_ZIP_ANGLE, HingeUnit
from .mission import ActuationDynamics, CommandTimeline, SwoopTrajectory, TimedCommand
from .frames import encode_frame
from .units import parse_quantity

TOP_KEYS = {"materials", "drive", "calibration", "designs", "mission", "fixture_dir"}
MATERIAL_KEYS = {"film_thickness", "relative_permittivity", "dielectric"}
DRIVE_KEYS = {"voltage"}
CALIBRATION_KEYS = {"theta_max"}
COMMON_UNIT_KEYS = {"kind", "link_length", "film_thickness", "relative_permittivity", "dielectric",
                    "electrode_gain", "min_zip_angle", "electrode_length"}
HINGE_KEYS = COMMON_UNIT_KEYS | {"electrode_width", "pouch_width", "theta_max", "lever_arm", "prestress"}
SCORPION_KEYS = COMMON_UNIT_KEYS | {"base_electrode_height", "pouch_widths", "channel_width", "pouch_theta_max"}
FINGER_KEYS = {"kind", "units", "link_lengths"}
MISSION_KEYS = {
    "approach_speed", "min_altitude", "object_x", "object_z", "grasp_radius", "start_distance",
    "start_altitude", "closure_time", "supply", "slowdown", "latency", "jitter", "seed", "dt", "commands",
}
MISSION_REQUIRED = {"closure_time", "slowdown", "latency"}
COMMAND_KEYS = {"t", "command", "duty"}


def _reject_unknown(table: dict, allowed: set[str], where: str) -> None:
    extra = sorted(set(table) - allowed)
    if extra:
        raise ValidationError(f"unknown key(s) in {where}: {', '.join(extra)}", code="config-key")


def _builtin() -> dict:
    text = resources.files("haselgrip").joinpath("data", "designs.toml").read_text(encoding="utf-8")
    return tomllib.loads(text)


def _merge(base: dict, over: dict) -> dict:
    out = dict(base)
    for key, value in over.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict) and key != "mission":
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


@dataclass
class ProjectConfig:
    film_thickness: float
    relative_permittivity: float
    dielectric: str
    voltage: float
    theta_max_table: dict[float, float]
    designs: dict[str, dict[str, Any]]
    mission: dict[str, Any] | None = None
    fixture_dir: Path | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def diel(self) -> DielectricSpec:
        return DielectricSpec(self.relative_permittivity, self.dielectric)

    def _raw(self, name: str) -> dict:
        if name not in self.designs:
            raise ValidationError(f"unknown design {name!r}; known: {', '.join(sorted(self.designs))}",
                                  code="unknown-design")
        return self.designs[name]

    def unit(self, name: str) -> Unit:
        raw = self._raw(name)
        kind = raw.get("kind")
        where = f"designs.{name}"
        t = parse_quantity(raw["film_thickness"], "length") if "film_thickness" in raw else self.film_thickness
        diel = DielectricSpec(
            float(raw.get("relative_permittivity", self.relative_permittivity)),
            raw.get("dielectric", self.dielectric),
        )
        gain = float(raw.get("electrode_gain", 1.0))
        a0 = parse_quantity(raw["min_zip_angle"], "angle") if "min_zip_angle" in raw else DEFAULT_MIN_ZIP_ANGLE
        try:
            width = parse_quantity(raw["electrode_length"], "length")
            if kind == "hinge":
                _reject_unknown(raw, HINGE_KEYS, where)
                free = parse_quantity(raw["pouch_width"], "length")
                geom = PouchGeometry(parse_quantity(raw["electrode_width"], "length"), free, width, t)
                theta_max = (parse_quantity(raw["theta_max"], "angle") if "theta_max" in raw
                             else theta_max_for_width(free, self.theta_max_table))
                lever = parse_quantity(raw["lever_arm"], "length") if "lever_arm" in raw else None
                prestress = parse_quantity(raw["prestress"], "torque") if "prestress" in raw else 0.0
                return HingeUnit(geom, theta_max, diel, lever, prestress, gain, a0, label=name)
            if kind == "scorpion":
                _reject_unknown(raw, SCORPION_KEYS, where)
                return ScorpionUnit(
                    base_electrode_height=parse_quantity(raw["base_electrode_height"], "length"),
                    pouch_widths=tuple(parse_quantity(w, "length") for w in raw["pouch_widths"]),
                    channel_width=parse_quantity(raw["channel_width"], "length"),
                    actuator_width=width,
                    pouch_theta_max=tuple(parse_quantity(a, "angle") for a in raw["pouch_theta_max"]),
                    film_thickness=t,
                    diel=diel,
                    electrode_gain=gain,
                    min_zip_angle=a0,
                    label=name,
                )
        except KeyError as exc:
            raise ValidationError(f"{where} is missing {exc.args[0]!r}", code="config-key") from None
        raise ValidationError(f"{where}: kind {kind!r} is not a hinge or scorpion unit", code="config-kind")

    def finger(self, name: str) -> FingerConfig:
        """Any design as a finger; single units use their own ``link_length``."""
        raw = self._raw(name)
        if raw.get("kind") == "finger":
            _reject_unknown(raw, FINGER_KEYS, f"designs.{name}")
            try:
                units = tuple(self.unit(u) for u in raw["units"])
                links = tuple(parse_quantity(x, "length") for x in raw["link_lengths"])
            except KeyError as exc:
                raise ValidationError(f"designs.{name} is missing {exc.args[0]!r}", code="config-key") from None
            return FingerConfig(units, links, name)
        unit = self.unit(name)
        if "link_length" not in raw:
            raise ValidationError(f"designs.{name} needs link_length to act as a finger", code="config-key")
        return FingerConfig((unit,), (parse_quantity(raw["link_length"], "length"),), name)

    def validate(self) -> None:
        """Build every design once so bad references surface at load time."""
        for name in self.designs:
            self.finger(name) if self.designs[name].get("kind") == "finger" else self.unit(name)

    # mission ---------------------------------------------------------------

    def mission_setup(self, overrides: dict[str, Any] | None = None):
        """(trajectory, timeline, dynamics, dt) from ``[mission]`` plus overrides."""
        raw = dict(self.mission or {})
        raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
        _reject_unknown(raw, MISSION_KEYS, "mission")
        missing = sorted(MISSION_REQUIRED - set(raw))
        if missing:
            raise ValidationError(f"mission needs explicit {', '.join(missing)}", code="config-key")
        q = parse_quantity
        traj = SwoopTrajectory(
            approach_speed=q(raw.get("approach_speed", "2 m/s"), "speed"),
            min_altitude=q(raw.get("min_altitude", "30 mm"), "length"),
            object_position=(q(raw.get("object_x", "0 m"), "length"), q(raw.get("object_z", "0 m"), "length")),
            grasp_radius=q(raw.get("grasp_radius", "50 mm"), "length"),
            start_distance=q(raw.get("start_distance", "2 m"), "length"),
            start_altitude=q(raw.get("start_altitude", "1 m"), "length"),
        )
        dyn = ActuationDynamics(
            closure_time_constant=q(raw["closure_time"], "time"),
            supply=raw.get("supply", "lab-supply"),
            untethered_slowdown_factor=float(raw["slowdown"]),
        )
        commands = []
        for i, c in enumerate(raw.get("commands", [])):
            _reject_unknown(c, COMMAND_KEYS, f"mission.commands[{i}]")
            commands.append(TimedCommand(q(c["t"], "time"), encode_frame(c["command"], int(c.get("duty", 255)))))
        timeline = CommandTimeline(
            tuple(commands),
            link_latency=q(raw["latency"], "time"),
            jitter_bound=q(raw.get("jitter", "0 ms"), "time"),
            seed=int(raw.get("seed", 0)),
        )
        return traj, timeline, dyn, q(raw.get("dt", "1 ms"), "time")


def _from_dict(data: dict) -> ProjectConfig:
    _reject_unknown(data, TOP_KEYS, "config")
    materials = data.get("materials", {})
    _reject_unknown(materials, MATERIAL_KEYS, "materials")
    drive = data.get("drive", {})
    _reject_unknown(drive, DRIVE_KEYS, "drive")
    calibration = data.get("calibration", {})
    _reject_unknown(calibration, CALIBRATION_KEYS, "calibration")
    if "mission" in data:
        _reject_unknown(data["mission"], MISSION_KEYS, "mission")
    table = {
        parse_quantity(k, "length"): parse_quantity(v, "angle")
        for k, v in calibration.get("theta_max", {}).items()
    }
    if not table:
        raise ValidationError("calibration.theta_max must not be empty", code="config-key")
    cfg = ProjectConfig(
        film_thickness=parse_quantity(materials.get("film_thickness", "18 um"), "length"),
        relative_permittivity=float(materials.get("relative_permittivity", 3.2)),
        dielectric=str(materials.get("dielectric", "Envirotemp FR3")),
        voltage=parse_quantity(drive.get("voltage", "8 kV"), "voltage"),
        theta_max_table=table,
        designs=dict(data.get("designs", {})),
        mission=data.get("mission"),
        fixture_dir=Path(data["fixture_dir"]) if "fixture_dir" in data else None,
    )
    cfg.validate()
    return cfg


def load_config(path: str | Path | None = None) -> ProjectConfig:
    """Built-in library, optionally overlaid with the TOML file at ``path``."""
    data = _builtin()
    if path is not None:
        path = Path(path)
        try:
            user = tomllib.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ValidationError(f"no such config file: {path}", code="missing-file") from None
        except tomllib.TOMLDecodeError as exc:
            raise ValidationError(f"{path}: {exc}", code="config-syntax") from None
        data = _merge(data, user)
    return _from_dict(data)
