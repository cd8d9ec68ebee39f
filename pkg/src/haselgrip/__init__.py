"""Quasi-static design toolkit for Peano-HASEL pouch-motor grippers.

Force law and pouch kinematics (:mod:`haselgrip.actuator`), hinge torque
curves (:mod:`haselgrip.hinge`), multi-joint fingers and crossovers
(:mod:`haselgrip.composition`), measured-curve analysis
(:mod:`haselgrip.empirics`), design sweeps and grasp checks
(:mod:`haselgrip.explorer`) and a swooping-grasp timing simulator
(:mod:`haselgrip.mission`).
"""

from .actuator import (
    DielectricSpec,
    DriveState,
    PouchGeometry,
    contraction_fraction,
    electrode_coverage,
    peano_force,
)
from .composition import (
    FingerConfig,
    ScorpionUnit,
    chain_free_deflection,
    chain_tip_force,
    chain_tip_force_curve,
    crossover,
    validate_channel,
)
from .empirics import (
    MeasurementSeries,
    QuadraticFit,
    crossover_from_fits,
    fit_quadratic,
    load_series,
    parse_series,
    ratio_report,
)
from .errors import ComputationError, DegenerateOverlapError, HaselError, ValidationError
from .explorer import GraspCase, Objective, SweepSpec, grasp_feasibility, optimize, run_sweep
from .frames import decode_frame, encode_frame
from .hinge import HingeUnit, TorqueAngleCurve, free_deflection, hinge_torque, hinge_torque_curve
from .mission import ActuationDynamics, CommandTimeline, SwoopTrajectory, TimedCommand, simulate

__version__ = "0.1.0"

__all__ = [
    "ActuationDynamics",
    "CommandTimeline",
    "ComputationError",
    "DegenerateOverlapError",
    "DielectricSpec",
    "DriveState",
    "FingerConfig",
    "GraspCase",
    "HaselError",
    "HingeUnit",
    "MeasurementSeries",
    "Objective",
    "PouchGeometry",
    "QuadraticFit",
    "ScorpionUnit",
    "SweepSpec",
    "SwoopTrajectory",
    "TimedCommand",
    "TorqueAngleCurve",
    "ValidationError",
    "chain_free_deflection",
    "chain_tip_force",
    "chain_tip_force_curve",
    "contraction_fraction",
    "crossover",
    "crossover_from_fits",
    "decode_frame",
    "electrode_coverage",
    "encode_frame",
    "fit_quadratic",
    "free_deflection",
    "grasp_feasibility",
    "hinge_torque",
    "hinge_torque_curve",
    "load_series",
    "optimize",
    "parse_series",
    "peano_force",
    "ratio_report",
    "run_sweep",
    "simulate",
    "validate_channel",
]
