"""Pouch-motor hinge: maps one pouch onto a rotary joint.

The pouch force from :func:`haselgrip.actuator.peano_force` acts at a
constant effective lever arm about the hinge axis. Joint deflection is
tied to the zip angle by an affine schedule that sends the minimum zip
angle to zero deflection and the fully wrapped pouch (a = pi/2) to the
calibrated maximum deflection ``theta_max``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .actuator import (
    FR3,
    MAX_VOLTAGE,
    DielectricSpec,
    PouchGeometry,
    angle_factor_complement,
    force_prefactor,
)
from .errors import DomainError, ValidationError

DEFAULT_MIN_ZIP_ANGLE = math.radians(1.0)

KINDS = ("analytic-sampled", "measured", "fitted")
FORCE_MODES = ("torque", "tip-force")


@dataclass(frozen=True, eq=False)
class TorqueAngleCurve:
    """Torque or tip force sampled against joint deflection in degrees."""

    theta_deg: np.ndarray
    values: np.ndarray
    kind: str = "analytic-sampled"
    force_mode: str = "torque"
    lever: float | None = None  # tip-force radius [m], when known
    label: str = ""

    def __post_init__(self) -> None:
        theta = np.array(self.theta_deg, dtype=float)
        values = np.array(self.values, dtype=float)
        object.__setattr__(self, "theta_deg", theta)
        object.__setattr__(self, "values", values)
        if theta.ndim != 1 or theta.shape != values.shape:
            raise ValidationError("theta and values must be 1-D and the same length", code="curve-shape")
        if theta.size < 3:
            raise ValidationError("a curve needs at least 3 samples", code="too-few-rows")
        if not np.all(np.isfinite(theta)) or not np.all(np.isfinite(values)):
            raise ValidationError("curve samples must be finite", code="non-finite")
        if np.any(np.diff(theta) <= 0):
            raise ValidationError("curve thetas must be strictly increasing", code="non-increasing")
        if theta[0] < 0 or theta[-1] > 180:
            raise ValidationError("curve thetas must lie in [0, 180] deg", code="curve-range")
        if self.kind not in KINDS:
            raise ValidationError(f"unknown curve kind {self.kind!r}", code="curve-kind")
        if self.force_mode not in FORCE_MODES:
            raise ValidationError(f"unknown force mode {self.force_mode!r}", code="mode")

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.theta_deg[0]), float(self.theta_deg[-1])

    def __len__(self) -> int:
        return self.theta_deg.size

    def __call__(self, theta_deg):
        """Piecewise-linear interpolation; extrapolation is an error."""
        t = np.asarray(theta_deg, dtype=float)
        lo, hi = self.domain
        if np.any(t < lo) or np.any(t > hi):
            raise DomainError(f"theta outside curve domain [{lo:g}, {hi:g}] deg")
        out = np.interp(t, self.theta_deg, self.values)
        return float(out) if out.ndim == 0 else out

    def scaled(self, factor: float) -> TorqueAngleCurve:
        return replace(self, values=self.values * factor)

    def to_csv(self) -> str:
        lines = ["theta_deg,value"]
        lines += [f"{t:.6f},{v:.9g}" for t, v in zip(self.theta_deg, self.values)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class HingeUnit:
    """One pouch motor across a flexible hinge.

    Lengths in m, angles in rad, torques in N*m. ``prestress_torque`` is a
    constant bias added to the actuator torque: zero for a classic hinge,
    negative for the inverse (prestressed) gripper. ``electrode_gain``
    scales the pouch force for electrode materials other than the baseline.
    """

    geom: PouchGeometry
    theta_max: float
    diel: DielectricSpec = FR3
    lever_arm: float | None = None
    prestress_torque: float = 0.0
    electrode_gain: float = 1.0
    min_zip_angle: float = DEFAULT_MIN_ZIP_ANGLE
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.lever_arm is None:
            object.__setattr__(self, "lever_arm", self.geom.total_length / 2.0)
        if not (math.isfinite(self.lever_arm) and self.lever_arm > 0):
            raise ValidationError("lever_arm must be > 0", code="hinge")
        if not (math.isfinite(self.theta_max) and 0 < self.theta_max <= math.pi):
            raise ValidationError("theta_max must lie in (0, pi]", code="hinge")
        if not (math.isfinite(self.electrode_gain) and self.electrode_gain > 0):
            raise ValidationError("electrode_gain must be > 0", code="hinge")
        if not math.isfinite(self.prestress_torque):
            raise ValidationError("prestress_torque must be finite", code="hinge")
        if not 0 < self.min_zip_angle < math.pi / 2:
            raise ValidationError("min_zip_angle must lie in (0, pi/2)", code="hinge")


ALPHA_MAX = math.pi / 2


def theta_from_alpha(unit: HingeUnit, alpha: float) -> float:
    """Joint deflection [rad] produced by zip angle ``alpha``.

    Zero up to the minimum zip angle, then linear up to ``theta_max``
    at the fully wrapped pouch.
    """
    if not (math.isfinite(alpha) and 0 <= alpha <= ALPHA_MAX):
        raise DomainError("zip angle must lie in [0, pi/2]")
    a0 = unit.min_zip_angle
    if alpha <= a0:
        return 0.0
    return unit.theta_max * (alpha - a0) / (ALPHA_MAX - a0)


def alpha_from_theta(unit: HingeUnit, theta):
    """Inverse of :func:`theta_from_alpha` on ``[0, theta_max]``, vectorised."""
    t = np.asarray(theta, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0) or np.any(t > unit.theta_max * (1 + 1e-12)):
        raise DomainError("deflection must lie in [0, theta_max]")
    frac = np.minimum(t / unit.theta_max, 1.0)
    a0 = unit.min_zip_angle
    return a0 + (ALPHA_MAX - a0) * frac


def _check_voltage(voltage: float) -> None:
    if not (math.isfinite(voltage) and 0 <= voltage <= MAX_VOLTAGE):
        raise ValidationError(f"voltage must lie in [0, {MAX_VOLTAGE:g}] V", code="voltage")


def _torque_scalar(unit: HingeUnit, voltage: float, theta: float) -> float:
    if not (math.isfinite(theta) and 0 <= theta <= unit.theta_max * (1 + 1e-12)):
        raise DomainError("deflection must lie in [0, theta_max]")
    beta = (ALPHA_MAX - unit.min_zip_angle) * (1.0 - min(theta / unit.theta_max, 1.0))
    s = math.sin(beta)
    force = force_prefactor(unit.geom, unit.diel, voltage) * (s / (1.0 - s))
    return unit.electrode_gain * force * unit.lever_arm + unit.prestress_torque


def hinge_torque(unit: HingeUnit, voltage: float, theta):
    """Net joint torque [N*m] at deflection ``theta`` [rad], vectorised."""
    _check_voltage(voltage)
    if isinstance(theta, (float, int)):
        return _torque_scalar(unit, voltage, float(theta))
    t = np.asarray(theta, dtype=float)
    # same schedule as alpha_from_theta, kept in the complementary angle so
    # theta_max lands exactly on zero force
    if np.any(~np.isfinite(t)) or np.any(t < 0) or np.any(t > unit.theta_max * (1 + 1e-12)):
        raise DomainError("deflection must lie in [0, theta_max]")
    frac = np.minimum(t / unit.theta_max, 1.0)
    beta = (ALPHA_MAX - unit.min_zip_angle) * (1.0 - frac)
    force = force_prefactor(unit.geom, unit.diel, voltage) * angle_factor_complement(beta)
    tau = unit.electrode_gain * force * unit.lever_arm + unit.prestress_torque
    return float(tau) if tau.ndim == 0 else tau


def hinge_torque_curve(unit: HingeUnit, voltage: float, n_samples: int = 91) -> TorqueAngleCurve:
    """Torque sampled uniformly on ``[0, theta_max]``."""
    if n_samples < 3:
        raise ValidationError("n_samples must be >= 3", code="samples")
    theta = np.linspace(0.0, unit.theta_max, n_samples)
    tau = hinge_torque(unit, voltage, theta)
    return TorqueAngleCurve(np.degrees(theta), tau, "analytic-sampled", "torque", label=unit.label)


def free_deflection(unit: HingeUnit, voltage: float) -> float:
    """Largest deflection [rad] at which the net torque is still >= 0.

    With torque ``k * s/(1 - s) + p`` in ``s = sin(beta)``, the zero sits at
    ``s = 1/(1 + k/(-p))``; the schedule then maps ``beta`` back
    to a deflection.
    """
    if hinge_torque(unit, voltage, unit.theta_max) >= 0:
        return unit.theta_max
    k = unit.electrode_gain * force_prefactor(unit.geom, unit.diel, voltage) * unit.lever_arm
    beta_span = ALPHA_MAX - unit.min_zip_angle
    # prestress < 0 here; this form stays finite when k underflows to zero
    beta = math.asin(1.0 / (1.0 + k / -unit.prestress_torque))
    if beta >= beta_span:
        return 0.0
    theta = unit.theta_max * (1.0 - beta / beta_span)
    # step back across the root if rounding left us just past it
    while theta > 0 and hinge_torque(unit, voltage, theta) < 0:
        theta = math.nextafter(theta, 0.0)
    return theta


def peak_output_torque(unit: HingeUnit, voltage: float) -> float:
    """Largest torque the hinge delivers to the toe over its stroke.

    For a classic hinge this is the actuator torque at zero deflection.
    On the inverse gripper the prestressing cord also bears on the toe, so
    its magnitude is added to the actuator's own peak.
    """
    actuator_peak = hinge_torque(replace(unit, prestress_torque=0.0), voltage, 0.0)
    return actuator_peak + abs(min(unit.prestress_torque, 0.0))
