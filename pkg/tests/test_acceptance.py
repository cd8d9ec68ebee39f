"""Acceptance criteria 1 to 8, one recorded line each.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary gains an
"acceptance criteria" section with a PASS or FAIL line per criterion.
"""

import contextlib
import dataclasses
import math
import subprocess
import sys

import numpy as np
import pytest

import property_suites
from conftest import record_acceptance
from haselgrip.actuator import DielectricSpec, DriveState, PouchGeometry, electrode_coverage, peano_force
from haselgrip.composition import crossover
from haselgrip.config import load_config
from haselgrip.empirics import crossover_from_fits, fit_quadratic
from haselgrip.explorer import THETA_MAX_TABLE, GraspCase, grasp_feasibility, plt_linearity_report
from haselgrip.fixtures import load_fixture
from haselgrip.frames import COMMANDS, decode_frame, encode_frame
from haselgrip.hinge import peak_output_torque
from haselgrip.mission import (
    ActuationDynamics,
    CommandTimeline,
    SwoopTrajectory,
    TimedCommand,
    boundary_command_time,
    scan_command_times,
    simulate,
)

V = 8e3


@contextlib.contextmanager
def criterion(number, detail):
    """Record the enclosed check as PASS, or as FAIL before re-raising."""
    try:
        yield
    except Exception as exc:
        record_acceptance(number, False, f"{detail} -> {type(exc).__name__}: {exc}".splitlines()[0])
        raise
    record_acceptance(number, True, detail)


def reference_force(voltage=V):
    geom = PouchGeometry(10e-3, 10e-3, 40e-3, 18e-6)
    return peano_force(geom, DielectricSpec(3.2), DriveState(voltage, math.radians(60)))


def test_criterion_1_force_law():
    f = reference_force()
    ratio = reference_force(2 * V) / f
    with criterion(1, f"F = {f:.4f} N at 8 kV, 60 deg; F(2V)/F(V) = {ratio:.12f}"):
        assert f == pytest.approx(1.007, abs=1e-3)
        assert ratio == pytest.approx(4.0, rel=1e-12)


def test_criterion_2_electrode_coverage():
    got = [electrode_coverage(PouchGeometry(10e-3, mm * 1e-3, 40e-3)) for mm in (6, 12, 14)]
    with criterion(2, "coverage " + ", ".join(f"{c:.4f}" for c in got) + " for 6, 12, 14 mm pouches"):
        assert got == pytest.approx([0.625, 0.4545, 0.4167], abs=1e-3)


def test_criterion_3_plt_linearity(capsys):
    ratio, text = plt_linearity_report(load_config().finger("pwt10"), V)
    with capsys.disabled():
        print("\n" + text)
    with criterion(3, f"PLT-30/PLT-40 model ratio {ratio:.9f}; measured loss of roughly -40 % is a documented gap"):
        assert ratio == pytest.approx(0.750, abs=1e-9)
        assert "-40 %" in text


def test_criterion_4_fixture_recovery():
    scorpion, pwt10 = load_fixture("scorpion"), load_fixture("pwt10")
    hybrid, triple = fit_quadratic(load_fixture("hybrid")), fit_quadratic(load_fixture("triple"))
    (cross_sp, _), = crossover(scorpion.to_curve(), pwt10.to_curve())
    meetings = crossover_from_fits(hybrid, triple)
    first, late = meetings[0], min(meetings, key=lambda p: abs(p[0] - 56.0))
    fit_sp = fit_quadratic(scorpion)
    roots = [r.real for r in np.roots(fit_sp.coefficients[::-1]) if abs(r.imag) < 1e-12 and r.real > 0]
    free_sp, force_20 = min(roots), float(fit_sp(20.0))
    detail = (f"Scorpion/PWT-10 at {cross_sp:.2f} deg; Hybrid/Triple at {first[0]:.2f} deg and "
              f"{late[0]:.2f} deg ({late[1]:.4f} N); Scorpion free {free_sp:.1f} deg, {force_20:.3f} N at 20 deg")
    with criterion(4, detail):
        assert cross_sp == pytest.approx(19.0, abs=2.0)
        assert first[0] == pytest.approx(26.0, abs=3.0)
        assert late[0] == pytest.approx(56.0, abs=3.0)
        assert late[1] == pytest.approx(0.025, abs=0.01)
        assert free_sp > 50.0
        assert force_20 == pytest.approx(0.2, abs=0.02)


def test_criterion_5_grasp_reference_case():
    report = grasp_feasibility(GraspCase(0.076, 4, 0.2, 1.0))
    payload_g = report.max_payload_kg * 1e3
    with criterion(5, f"required mu {report.required_mu:.4f}, max payload {payload_g:.2f} g"):
        assert report.required_mu == pytest.approx(0.932, abs=1e-3)
        assert payload_g == pytest.approx(81.5, abs=0.1)
        assert report.holds


PROPERTY_SUITES = sorted(name for name in dir(property_suites) if name.startswith("test_"))


@pytest.mark.parametrize("suite", PROPERTY_SUITES)
def test_criterion_6_property_suites(suite):
    with criterion(6, f"{len(PROPERTY_SUITES)} randomised property suites"):
        getattr(property_suites, suite)()


TRAJ = SwoopTrajectory(approach_speed=2.0, min_altitude=0.02, start_distance=0.5, start_altitude=0.5)
LAB = ActuationDynamics(0.15, "lab-supply", 1.5)
HVPS = ActuationDynamics(0.15, "untethered-hvps", 1.5)
DT = 1e-3


def test_criterion_7_mission_properties():
    outcomes = scan_command_times(TRAJ, LAB, DT, np.arange(0.0, TRAJ.duration, DT))
    grasped = np.array([o == "grasped" for o in outcomes])
    lab, hvps = boundary_command_time(TRAJ, LAB, DT), boundary_command_time(TRAJ, HVPS, DT)
    timeline = CommandTimeline((TimedCommand.close(0.05), TimedCommand.open(0.3)), 0.02, 0.01, seed=42)
    traces = [simulate(TRAJ, timeline, LAB, DT).to_csv() for _ in range(2)]
    frames = {encode_frame(c, d) for c in COMMANDS for d in range(256)}
    detail = (f"window of {int(grasped.sum())} command times; boundary {lab:.3f} s lab vs {hvps:.3f} s "
              f"untethered; seeded traces identical; {len(frames)} frames round-trip")
    with criterion(7, detail):
        assert grasped.any()
        assert len(np.flatnonzero(np.diff(grasped.astype(int)))) <= 2
        assert hvps < lab - 0.01
        assert traces[0] == traces[1]
        assert len(frames) == 512
        assert all(decode_frame(encode_frame(c, d)) == (c, d) for c in COMMANDS for d in range(256))


def test_criterion_8_calibrated_not_predicted(capsys):
    cfg = load_config()
    tip = cfg.unit("triple_hinge")
    plain = dataclasses.replace(tip, electrode_gain=1.0)
    silver_pct = 100 * (peak_output_torque(tip, V) / peak_output_torque(plain, V) - 1)
    inverse_pct = 100 * (peak_output_torque(cfg.unit("inverse6"), V) / peak_output_torque(cfg.unit("pwt6"), V) - 1)
    peak_mm = 1e3 * max(THETA_MAX_TABLE, key=THETA_MAX_TABLE.get)
    statement = (
        "Neither the in-flight perching demonstration nor the bench-only effects can be derived from the analytic "
        "model, so those effects enter as calibration inputs. "
        f"Silver electrodes add {silver_pct:+.1f} % through the electrode gain and the inverse cord bias adds "
        f"{inverse_pct:+.1f} % through the tuned prestress. The free-deflection peak at {peak_mm:g} mm comes from "
        "the theta_max table. These values are reproduced, not predicted."
    )
    with capsys.disabled():
        print("\n" + statement)
    with criterion(8, f"calibrated, not predicted: {silver_pct:+.1f} %, {inverse_pct:+.1f} %, peak at {peak_mm:g} mm"):
        assert silver_pct == pytest.approx(26.5, abs=1e-9)
        assert inverse_pct == pytest.approx(14.2, abs=1e-6)
        assert peak_mm == pytest.approx(12.0)


if __name__ == "__main__":
    # a fresh interpreter, so pytest sees hypothesis before this module imports it
    raise SystemExit(subprocess.call([sys.executable, "-m", "pytest", __file__, "-q"]))
