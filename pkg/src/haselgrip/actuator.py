"""Quasi-static model of a single Peano-HASEL pouch.

Force-voltage law, electrode coverage and circular-arc contraction
kinematics. All quantities are SI (m, V, rad, N). Every type here is an
immutable value and every function is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError

VACUUM_PERMITTIVITY = 8.8541878128e-12  # F/m

MAX_VOLTAGE = 20e3  # V
DEFAULT_FILM_THICKNESS = 18e-6  # m, thin Mylar
DEFAULT_RELATIVE_PERMITTIVITY = 3.2


def _check_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValidationError(f"{name} must be finite, got {value!r}", code="non-finite")


@dataclass(frozen=True)
class PhysicalConstants:
    vacuum_permittivity: float = VACUUM_PERMITTIVITY


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class PouchGeometry:
    """Pouch and electrode dimensions, all in metres.

    ``electrode_length`` and ``pouch_free_length`` run along the pouch axis
    (the direction of contraction); ``actuator_width`` runs along the hinge
    axis and is the ``w`` of the force law.
    """

    electrode_length: float
    pouch_free_length: float
    actuator_width: float
    film_thickness: float = DEFAULT_FILM_THICKNESS

    def __post_init__(self) -> None:
        _check_finite(
            electrode_length=self.electrode_length,
            pouch_free_length=self.pouch_free_length,
            actuator_width=self.actuator_width,
            film_thickness=self.film_thickness,
        )
        for name in ("electrode_length", "pouch_free_length", "actuator_width", "film_thickness"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be > 0", code="geometry")
        if self.film_thickness >= 1e-3:
            raise ValidationError("film_thickness must be below 1 mm", code="geometry")
        if self.electrode_length >= 1.0 or self.pouch_free_length >= 1.0:
            raise ValidationError("pouch dimensions must be below 1 m", code="geometry")

    @property
    def total_length(self) -> float:
        """Electroded plus free pouch dimension along the pouch axis."""
        return self.electrode_length + self.pouch_free_length


@dataclass(frozen=True)
class DielectricSpec:
    relative_permittivity: float = DEFAULT_RELATIVE_PERMITTIVITY
    name: str = "Envirotemp FR3"

    def __post_init__(self) -> None:
        _check_finite(relative_permittivity=self.relative_permittivity)
        if self.relative_permittivity < 1:
            raise ValidationError("relative permittivity must be >= 1", code="dielectric")


FR3 = DielectricSpec(DEFAULT_RELATIVE_PERMITTIVITY, "Envirotemp FR3")


@dataclass(frozen=True)
class DriveState:
    voltage: float
    zip_angle: float

    def __post_init__(self) -> None:
        _check_finite(voltage=self.voltage, zip_angle=self.zip_angle)
        if not 0 <= self.voltage <= MAX_VOLTAGE:
            raise ValidationError(f"voltage must lie in [0, {MAX_VOLTAGE:g}] V", code="voltage")
        if not 0 < self.zip_angle < math.pi / 2:
            raise DomainError("zip angle must lie in (0, pi/2)")


def electrode_coverage(geom: PouchGeometry) -> float:
    """Fraction of the total pouch dimension covered by electrode."""
    return geom.electrode_length / geom.total_length


def force_prefactor(geom: PouchGeometry, diel: DielectricSpec, voltage: float) -> float:
    """Angle-independent part of the force law, ``w/(4t) eps0 eps_r V^2`` [N]."""
    return (
        geom.actuator_width
        / (4.0 * geom.film_thickness)
        * CONSTANTS.vacuum_permittivity
        * diel.relative_permittivity
        * voltage**2
    )


def angle_factor(alpha):
    """``cos(a) / (1 - cos(a))``, vectorised."""
    return angle_factor_complement(np.pi / 2 - np.asarray(alpha, dtype=float))


def angle_factor_complement(beta):
    """The angle factor written in ``b = pi/2 - a``; exactly zero at b = 0."""
    s = np.sin(np.asarray(beta, dtype=float))
    return s / (1.0 - s)


def peano_force(geom: PouchGeometry, diel: DielectricSpec, drive: DriveState) -> float:
    """Quasi-static Peano-HASEL force [N] at the given zip angle and voltage."""
    cos_a = math.cos(drive.zip_angle)
    return force_prefactor(geom, diel, drive.voltage) * cos_a / (1.0 - cos_a)


def contraction_fraction(alpha: float) -> float:
    """Fractional shortening ``1 - sin(a)/a`` of a circular-arc pouch wall."""
    _check_finite(alpha=alpha)
    if not 0 < alpha <= math.pi / 2:
        raise DomainError("zip angle must lie in (0, pi/2]")
    if alpha < 1e-4:
        # series form avoids cancellation
        return alpha**2 / 6.0 - alpha**4 / 120.0
    return 1.0 - math.sin(alpha) / alpha
