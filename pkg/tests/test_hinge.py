import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haselgrip.actuator import PouchGeometry
from haselgrip.config import load_config
from haselgrip.errors import DomainError, ValidationError
from haselgrip.hinge import (
    ALPHA_MAX,
    HingeUnit,
    TorqueAngleCurve,
    alpha_from_theta,
    free_deflection,
    hinge_torque,
    hinge_torque_curve,
    peak_output_torque,
    theta_from_alpha,
)


def brute_free_deflection_deg(unit, v, step_deg=0.01):
    """Largest grid angle with non-negative torque, scanning the whole stroke."""
    grid = np.arange(0.0, math.degrees(unit.theta_max) + step_deg / 2, step_deg)
    grid = grid[grid <= math.degrees(unit.theta_max)]
    tau = hinge_torque(unit, v, np.radians(grid))
    ok = grid[tau >= 0]
    return float(ok[-1]) if ok.size else 0.0


def test_schedule_endpoints(baseline_hinge):
    assert theta_from_alpha(baseline_hinge, 0.0) == 0.0
    assert theta_from_alpha(baseline_hinge, ALPHA_MAX) == pytest.approx(baseline_hinge.theta_max)


def test_schedule_monotone_on_dense_grid(baseline_hinge):
    alphas = np.linspace(baseline_hinge.min_zip_angle, ALPHA_MAX, 2001)
    thetas = np.array([theta_from_alpha(baseline_hinge, a) for a in alphas])
    assert np.all(np.diff(thetas) > 0)
    back = alpha_from_theta(baseline_hinge, thetas)
    np.testing.assert_allclose(back, alphas, rtol=1e-12)


def test_schedule_domain(baseline_hinge):
    with pytest.raises(DomainError):
        theta_from_alpha(baseline_hinge, 2.0)
    with pytest.raises(DomainError):
        hinge_torque(baseline_hinge, 8e3, baseline_hinge.theta_max * 1.01)


def test_zero_voltage_curve_is_zero(baseline_hinge):
    curve = hinge_torque_curve(baseline_hinge, 0.0, 31)
    assert np.all(curve.values == 0.0)


def test_curve_quadruples_with_double_voltage(baseline_hinge):
    a = hinge_torque_curve(baseline_hinge, 4e3)
    b = hinge_torque_curve(baseline_hinge, 8e3)
    np.testing.assert_allclose(b.values, 4 * a.values, rtol=1e-12, atol=0)


def test_curve_shape_and_endpoint(baseline_hinge):
    curve = hinge_torque_curve(baseline_hinge, 8e3, 91)
    assert len(curve) == 91
    assert curve.force_mode == "torque" and curve.kind == "analytic-sampled"
    assert curve.domain == pytest.approx((0.0, 46.0))
    assert curve.values[-1] == 0.0
    assert np.all(curve.values[:-1] > 0)
    assert np.all(np.diff(curve.values) < 0)


def test_prestress_shifts_endpoint_value(baseline_hinge):
    unit = replace(baseline_hinge, prestress_torque=-0.01)
    assert hinge_torque(unit, 8e3, unit.theta_max) == -0.01


def test_free_deflection_without_prestress_is_theta_max(baseline_hinge):
    assert free_deflection(baseline_hinge, 8e3) == baseline_hinge.theta_max
    # no voltage: torque is identically zero, still counted as >= 0
    assert free_deflection(baseline_hinge, 0.0) == baseline_hinge.theta_max


@pytest.mark.parametrize("prestress", [-1e-4, -1e-3, -0.05, -1.0])
def test_free_deflection_with_prestress_matches_scan(baseline_hinge, prestress):
    unit = replace(baseline_hinge, prestress_torque=prestress)
    got = math.degrees(free_deflection(unit, 8e3))
    assert got < math.degrees(unit.theta_max)
    assert got == pytest.approx(brute_free_deflection_deg(unit, 8e3), abs=0.02)


def bisect_free_deflection(unit, v, tol=1e-13):
    lo, hi = 0.0, unit.theta_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if hinge_torque(unit, v, mid) >= 0 else (lo, mid)
    return lo


@pytest.mark.parametrize("prestress", [-1e-6, -1e-3, -0.3, -7.5])
@pytest.mark.parametrize("v", [1e3, 8e3, 20e3])
def test_free_deflection_matches_bisection(baseline_hinge, prestress, v):
    unit = replace(baseline_hinge, prestress_torque=prestress)
    got = free_deflection(unit, v)
    assert got == pytest.approx(bisect_free_deflection(unit, v), abs=1e-9)
    if hinge_torque(unit, v, 0.0) >= 0:
        assert hinge_torque(unit, v, got) >= 0
    else:
        assert got == 0.0


def test_free_deflection_zero_when_prestress_dominates(baseline_hinge):
    unit = replace(baseline_hinge, prestress_torque=-1e6)
    assert free_deflection(unit, 8e3) == 0.0
    assert free_deflection(replace(baseline_hinge, prestress_torque=-1e-3), 1e-160) == 0.0


def test_lever_defaults_to_half_pouch_length(baseline_hinge):
    assert baseline_hinge.lever_arm == pytest.approx(10e-3)


@pytest.mark.parametrize(
    "kwargs",
    [dict(theta_max=0.0), dict(theta_max=4.0), dict(lever_arm=-1.0), dict(electrode_gain=0.0),
     dict(min_zip_angle=0.0), dict(prestress_torque=math.inf)],
)
def test_unit_invariants(kwargs):
    base = dict(geom=PouchGeometry(10e-3, 10e-3, 40e-3), theta_max=0.8)
    base.update(kwargs)
    with pytest.raises(ValidationError):
        HingeUnit(**base)


def test_electrode_length_scaling_is_linear():
    """Torque goes with w alone when the pouch dimensions are held fixed."""
    short = HingeUnit(PouchGeometry(10e-3, 10e-3, 30e-3), math.radians(46))
    long = HingeUnit(PouchGeometry(10e-3, 10e-3, 40e-3), math.radians(46))
    thetas = np.radians(np.linspace(0, 46, 47))
    ratio = hinge_torque(short, 8e3, thetas)[:-1] / hinge_torque(long, 8e3, thetas)[:-1]
    np.testing.assert_allclose(ratio, 0.75, rtol=1e-12)


def test_inverse_gripper_peak_calibration():
    cfg = load_config()
    pwt6, inverse6 = cfg.unit("pwt6"), cfg.unit("inverse6")
    ratio = peak_output_torque(inverse6, 8e3) / peak_output_torque(pwt6, 8e3)
    assert ratio == pytest.approx(1.142, abs=1e-9)
    # the cord bias shortens the free stroke
    assert free_deflection(inverse6, 8e3) < inverse6.theta_max


@given(
    free_mm=st.floats(2, 30),
    theta_max_deg=st.floats(5, 180),
    v=st.floats(100, 20e3),
    gain=st.floats(0.2, 3),
)
@settings(max_examples=100, deadline=None)
def test_torque_positive_before_theta_max(free_mm, theta_max_deg, v, gain):
    unit = HingeUnit(PouchGeometry(10e-3, free_mm * 1e-3, 40e-3), math.radians(theta_max_deg), electrode_gain=gain)
    curve = hinge_torque_curve(unit, v, 25)
    assert np.all(curve.values[:-1] > 0) and curve.values[-1] == 0


class TestTorqueAngleCurve:
    def test_interpolates(self):
        c = TorqueAngleCurve([0, 10, 20], [3.0, 2.0, 0.0])
        assert c(5) == pytest.approx(2.5)
        np.testing.assert_allclose(c([0, 15]), [3.0, 1.0])

    def test_no_extrapolation(self):
        c = TorqueAngleCurve([0, 10, 20], [3.0, 2.0, 0.0])
        with pytest.raises(DomainError):
            c(21)

    @pytest.mark.parametrize(
        "theta, values, code",
        [
            ([0, 10], [1, 0], "too-few-rows"),
            ([0, 10, 10], [1, 1, 0], "non-increasing"),
            ([0, 20, 10], [1, 1, 0], "non-increasing"),
            ([0, 10, 190], [1, 1, 0], "curve-range"),
            ([0, 10, 20], [1, math.nan, 0], "non-finite"),
            ([0, 10, 20], [1, 0], "curve-shape"),
        ],
    )
    def test_invariants(self, theta, values, code):
        with pytest.raises(ValidationError) as err:
            TorqueAngleCurve(theta, values)
        assert err.value.code == code

    def test_mode_and_kind_flags(self):
        with pytest.raises(ValidationError):
            TorqueAngleCurve([0, 1, 2], [1, 1, 1], force_mode="newtons")
        with pytest.raises(ValidationError):
            TorqueAngleCurve([0, 1, 2], [1, 1, 1], kind="guessed")

    def test_csv(self):
        text = TorqueAngleCurve([0, 10, 20], [3.0, 2.0, 0.0]).to_csv()
        assert text.splitlines()[0] == "theta_deg,value"
        assert len(text.splitlines()) == 4
