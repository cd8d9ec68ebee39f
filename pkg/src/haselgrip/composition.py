"""Finger architectures built from hinge units.

A finger is an ordered base-to-tip list of units. A classic
:class:`~haselgrip.hinge.HingeUnit` is one joint; a :class:`ScorpionUnit`
(one base electrode feeding several adjacent pouches through a fluid
channel) expands into one joint per pouch, all sharing the unit's
position along the finger.

Deflection is shared across joints in proportion to each joint's free
deflection, and the finger's tip force is limited by its weakest joint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .actuator import DEFAULT_FILM_THICKNESS, FR3, DielectricSpec, PouchGeometry
from .errors import ComputationError, DegenerateOverlapError, ValidationError
from .hinge import (
    DEFAULT_MIN_ZIP_ANGLE,
    HingeUnit,
    TorqueAngleCurve,
    free_deflection,
    hinge_torque,
)

CHANNEL_MIN = 4e-3  # m, dielectric no longer flows below this
CHANNEL_RECOMMENDED = 5e-3  # m


@dataclass(frozen=True)
class ScorpionUnit:
    """Base electrode driving ``len(pouch_widths)`` adjacent pouches.

    The displaced volume set by the base electrode is split equally, so
    each pouch behaves as a hinge whose electrode length is
    ``base_electrode_height / n``. ``pouch_theta_max`` holds the calibrated
    maximum deflection of each pouch joint [rad].
    """

    base_electrode_height: float
    pouch_widths: tuple[float, ...]
    channel_width: float
    actuator_width: float
    pouch_theta_max: tuple[float, ...]
    film_thickness: float = DEFAULT_FILM_THICKNESS
    diel: DielectricSpec = FR3
    electrode_gain: float = 1.0
    min_zip_angle: float = DEFAULT_MIN_ZIP_ANGLE
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pouch_widths", tuple(float(w) for w in self.pouch_widths))
        object.__setattr__(self, "pouch_theta_max", tuple(float(t) for t in self.pouch_theta_max))
        if not self.pouch_widths:
            raise ValidationError("a Scorpion unit needs at least one pouch", code="scorpion")
        if len(self.pouch_theta_max) != len(self.pouch_widths):
            raise ValidationError("one theta_max per pouch is required", code="scorpion")
        if not self.base_electrode_height > 0:
            raise ValidationError("base_electrode_height must be > 0", code="scorpion")
        if not self.channel_width > 0:
            raise ValidationError("channel_width must be > 0", code="scorpion")

    def hinges(self) -> list[HingeUnit]:
        le = self.base_electrode_height / len(self.pouch_widths)
        return [
            HingeUnit(
                PouchGeometry(le, width, self.actuator_width, self.film_thickness),
                theta_max=tmax,
                diel=self.diel,
                electrode_gain=self.electrode_gain,
                min_zip_angle=self.min_zip_angle,
                label=f"{self.label}[{i}]",
            )
            for i, (width, tmax) in enumerate(zip(self.pouch_widths, self.pouch_theta_max))
        ]


Unit = Union[HingeUnit, ScorpionUnit]


@dataclass(frozen=True)
class ValidationReport:
    entries: tuple[tuple[str, str], ...] = ()  # (level, message)

    @property
    def ok(self) -> bool:
        return not any(level == "error" for level, _ in self.entries)

    @property
    def warnings(self) -> list[str]:
        return [m for level, m in self.entries if level == "warning"]

    @property
    def errors(self) -> list[str]:
        return [m for level, m in self.entries if level == "error"]


def validate_channel(unit: ScorpionUnit) -> ValidationReport:
    w = unit.channel_width
    if w < CHANNEL_MIN:
        return ValidationReport(
            (("error", f"channel width {w * 1e3:g} mm is below {CHANNEL_MIN * 1e3:g} mm; dielectric will not flow"),)
        )
    if w < CHANNEL_RECOMMENDED:
        return ValidationReport(
            (("warning", f"channel width {w * 1e3:g} mm is below the recommended {CHANNEL_RECOMMENDED * 1e3:g} mm"),)
        )
    return ValidationReport()


@dataclass(frozen=True)
class FingerConfig:
    """Base-to-tip units with the distance from each unit to the next joint [m].

    The last link length is the distance from the last joint to the tip.
    """

    units: tuple[Unit, ...]
    link_lengths: tuple[float, ...]
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "link_lengths", tuple(float(x) for x in self.link_lengths))
        if not self.units:
            raise ValidationError("a finger needs at least one unit", code="finger")
        if len(self.link_lengths) != len(self.units):
            raise ValidationError("one link length per unit is required", code="finger")
        if any(not (math.isfinite(x) and x > 0) for x in self.link_lengths):
            raise ValidationError("link lengths must be > 0", code="finger")

    def joints(self) -> list[tuple[HingeUnit, float]]:
        """Every joint with its joint-to-tip distance, base to tip."""
        out = []
        for i, unit in enumerate(self.units):
            radius = math.fsum(self.link_lengths[i:])
            hinges = unit.hinges() if isinstance(unit, ScorpionUnit) else [unit]
            out.extend((h, radius) for h in hinges)
        return out


def single_hinge_finger(unit: HingeUnit, link_length: float, label: str = "") -> FingerConfig:
    return FingerConfig((unit,), (link_length,), label or unit.label)


def chain_free_deflection(cfg: FingerConfig, voltage: float) -> float:
    """Sum of the joints' free deflections [rad] (linear stacking)."""
    return math.fsum(free_deflection(h, voltage) for h, _ in cfg.joints())


def _allocation(cfg: FingerConfig, voltage: float):
    joints = cfg.joints()
    free = [free_deflection(h, voltage) for h, _ in joints]
    total = math.fsum(free)
    return joints, free, total


def chain_tip_force(cfg: FingerConfig, voltage: float, theta_total):
    """Tip force [N] at total deflection ``theta_total`` [rad], vectorised.

    Beyond the finger's free deflection the tip force is zero.
    """
    joints, free, total = _allocation(cfg, voltage)
    theta = np.asarray(theta_total, dtype=float)
    if total <= 0:
        return np.zeros_like(theta) if theta.ndim else 0.0
    clipped = np.clip(theta, 0.0, total)
    force = None
    for (hinge, radius), f in zip(joints, free):
        share = f / total
        tau = np.asarray(hinge_torque(hinge, voltage, np.minimum(clipped * share, hinge.theta_max)))
        joint_force = tau / radius
        force = joint_force if force is None else np.minimum(force, joint_force)
    force = np.where(theta > total, 0.0, force)
    return float(force) if force.ndim == 0 else force


def chain_tip_force_curve(cfg: FingerConfig, voltage: float, n_samples: int = 91) -> TorqueAngleCurve:
    """Tip force sampled uniformly on ``[0, chain free deflection]``."""
    if n_samples < 3:
        raise ValidationError("n_samples must be >= 3", code="samples")
    total = chain_free_deflection(cfg, voltage)
    if total <= 0:
        raise ComputationError("finger has no free deflection at this voltage", code="no-deflection")
    theta = np.linspace(0.0, total, n_samples)
    force = chain_tip_force(cfg, voltage, theta)
    radius = cfg.joints()[0][1] if len(cfg.joints()) == 1 else None
    return TorqueAngleCurve(np.degrees(theta), force, "analytic-sampled", "tip-force", lever=radius, label=cfg.label)


def _common_domain(a: TorqueAngleCurve, b: TorqueAngleCurve) -> tuple[float, float]:
    if a.force_mode != b.force_mode:
        raise ValidationError(f"cannot compare {a.force_mode} with {b.force_mode}", code="mode-mismatch")
    lo = max(a.domain[0], b.domain[0])
    hi = min(a.domain[1], b.domain[1])
    if not lo < hi:
        raise ValidationError("curves have no overlapping theta range", code="disjoint-domain")
    return lo, hi


def crossover(
    a: TorqueAngleCurve, b: TorqueAngleCurve, resolution: float = 1e-4
) -> list[tuple[float, float]]:
    """Intersections ``(theta_deg, value)`` of two curves, ordered by theta.

    Both curves are read as piecewise-linear interpolants. Each sign change
    of ``a - b`` on the common domain is bracketed on the merged sample grid
    and refined by bisection to ``resolution`` degrees. Touching without a
    sign change is not reported.
    """
    lo, hi = _common_domain(a, b)
    grid = np.union1d(a.theta_deg, b.theta_deg)
    grid = np.union1d(grid[(grid > lo) & (grid < hi)], [lo, hi])
    diff = a(grid) - b(grid)
    scale = max(np.max(np.abs(a(grid))), np.max(np.abs(b(grid))), 1e-300)
    if np.all(np.abs(diff) <= 1e-14 * scale):
        raise DegenerateOverlapError("curves coincide on their common domain")

    points = []
    nonzero = [i for i in range(grid.size) if diff[i] != 0.0]
    for i, j in zip(nonzero, nonzero[1:]):
        if np.sign(diff[i]) == np.sign(diff[j]):
            continue
        if j > i + 1:
            # exact zeros on the grid between the two signs
            root = float(grid[i + 1])
        else:
            left, right = float(grid[i]), float(grid[j])
            d_left, slope = float(diff[i]), float(diff[j] - diff[i]) / (right - left)
            s_left = np.sign(d_left)
            # both interpolants are linear between adjacent merged-grid samples
            while right - left > resolution:
                mid = 0.5 * (left + right)
                if np.sign(d_left + slope * (mid - float(grid[i]))) == s_left:
                    left = mid
                else:
                    right = mid
            root = 0.5 * (left + right)
        points.append((root, float(a(root))))
    return points
