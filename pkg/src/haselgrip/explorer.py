"""Parameter sweeps, box-bounded design optimisation and grasp feasibility."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .composition import FingerConfig, chain_free_deflection, chain_tip_force
from .errors import ComputationError, HaselError, ValidationError
from .hinge import HingeUnit

GRAVITY = 9.81
PARAMETERS = ("pouch_free_width", "electrode_length", "voltage")
DEFAULT_GRASP_ANGLE = math.radians(20.0)

# pouch free width [m] -> maximum free deflection [rad]. Only the 12 mm
# entry and the peak at 12 mm are anchored; the rest is interpolated.
THETA_MAX_TABLE: dict[float, float] = {
    6e-3: math.radians(38.0),
    8e-3: math.radians(43.0),
    10e-3: math.radians(46.0),
    12e-3: math.radians(50.0),
    14e-3: math.radians(45.0),
}


def theta_max_for_width(width: float, table: Mapping[float, float] = THETA_MAX_TABLE) -> float:
    """Linear interpolation in the calibration table; no extrapolation."""
    keys = sorted(table)
    if not keys[0] - 1e-12 <= width <= keys[-1] + 1e-12:
        raise ValidationError(
            f"pouch width {width * 1e3:g} mm outside calibration table "
            f"[{keys[0] * 1e3:g}, {keys[-1] * 1e3:g}] mm",
            code="calibration-range",
        )
    return float(np.interp(width, keys, [table[k] for k in keys]))


@dataclass(frozen=True)
class Objective:
    """What a sweep or optimisation measures on a finger.

    ``force_at_angle``: tip force [N] at ``theta`` [rad].
    ``deflection_at_force``: largest total deflection [rad] holding ``force`` [N].
    ``max_payload``: ``n_toes * F * mu / g`` [kg] with F the tip force at
    ``theta`` (default 20 deg).
    """

    kind: str
    theta: float = DEFAULT_GRASP_ANGLE
    force: float | None = None
    mu: float | None = None
    n_toes: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("force_at_angle", "deflection_at_force", "max_payload"):
            raise ValidationError(f"unknown objective {self.kind!r}", code="objective")
        if not 0 <= self.theta <= math.pi:
            raise ValidationError("objective angle must lie in [0, 180] deg", code="objective")
        if self.kind == "deflection_at_force" and not (self.force and self.force > 0):
            raise ValidationError("deflection_at_force needs a force > 0", code="objective")
        if self.kind == "max_payload":
            if not (self.mu and self.mu > 0):
                raise ValidationError("max_payload needs mu > 0", code="objective")
            if not (self.n_toes and self.n_toes >= 1):
                raise ValidationError("max_payload needs n_toes >= 1", code="objective")


def deflection_at_force(cfg: FingerConfig, voltage: float, force: float, tol: float = 1e-10) -> float:
    total = chain_free_deflection(cfg, voltage)
    if chain_tip_force(cfg, voltage, 0.0) < force:
        return 0.0
    lo, hi = 0.0, total
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if chain_tip_force(cfg, voltage, mid) >= force:
            lo = mid
        else:
            hi = mid
    return lo


def evaluate_objective(obj: Objective, cfg: FingerConfig, voltage: float) -> float:
    if obj.kind == "force_at_angle":
        return float(chain_tip_force(cfg, voltage, obj.theta))
    if obj.kind == "deflection_at_force":
        return deflection_at_force(cfg, voltage, obj.force)
    force = float(chain_tip_force(cfg, voltage, obj.theta))
    return obj.n_toes * force * obj.mu / GRAVITY


def _apply_unit(unit, parameter: str, value: float, table):
    if parameter == "electrode_length":
        if isinstance(unit, HingeUnit):
            return replace(unit, geom=replace(unit.geom, actuator_width=value))
        return replace(unit, actuator_width=value)
    if isinstance(unit, HingeUnit):
        theta_max = theta_max_for_width(value, table) if table is not None else unit.theta_max
        # lever arm was derived from the old pouch size unless set explicitly
        return HingeUnit(
            replace(unit.geom, pouch_free_length=value), theta_max, unit.diel, None,
            unit.prestress_torque, unit.electrode_gain, unit.min_zip_angle, unit.label,
        )
    n = len(unit.pouch_widths)
    return replace(unit, pouch_widths=(value,) * n)


def apply_parameter(cfg: FingerConfig, voltage: float, parameter: str, value: float, table=None):
    """The (finger, voltage) pair with one design parameter replaced (SI units)."""
    if parameter == "voltage":
        return cfg, value
    if parameter not in PARAMETERS:
        raise ValidationError(f"unknown sweep parameter {parameter!r}", code="parameter")
    units = tuple(_apply_unit(u, parameter, value, table) for u in cfg.units)
    return replace(cfg, units=units), voltage


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]
    base: FingerConfig
    voltage: float
    theta_max_table: Mapping[float, float] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.parameter not in PARAMETERS:
            raise ValidationError(f"unknown sweep parameter {self.parameter!r}", code="parameter")
        if not self.values:
            raise ValidationError("sweep needs at least one value", code="sweep")

    @classmethod
    def from_range(cls, parameter, start, stop, step, base, voltage, theta_max_table=None) -> SweepSpec:
        if step <= 0 or stop < start:
            raise ValidationError("range needs step > 0 and stop >= start", code="sweep")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = tuple(start + i * step for i in range(n))
        return cls(parameter, values, base, voltage, theta_max_table)


@dataclass(frozen=True)
class SweepRow:
    param: float
    objective: float
    free_deflection_deg: float
    peak_force: float
    status: str = "ok"


def _sweep_row(spec: SweepSpec, objective: Objective, value: float) -> SweepRow:
    try:
        cfg, voltage = apply_parameter(spec.base, spec.voltage, spec.parameter, value, spec.theta_max_table)
        free = chain_free_deflection(cfg, voltage)
        peak = float(chain_tip_force(cfg, voltage, 0.0))
        obj = evaluate_objective(objective, cfg, voltage)
    except HaselError as exc:
        return SweepRow(value, math.nan, math.nan, math.nan, exc.code)
    return SweepRow(value, obj, math.degrees(free), peak)


def run_sweep(spec: SweepSpec, objective: Objective, max_workers: int | None = None) -> list[SweepRow]:
    """One row per value, ordered by parameter value. Failed rows keep their error code."""
    values = sorted(spec.values)
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(lambda v: _sweep_row(spec, objective, v), values))
    return [_sweep_row(spec, objective, v) for v in values]


SWEEP_HEADER = "param,objective,free_deflection_deg,peak_force_N,status"


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    lines = [SWEEP_HEADER]
    for r in rows:
        lines.append(f"{r.param:.9g},{r.objective:.9g},{r.free_deflection_deg:.6f},{r.peak_force:.9g},{r.status}")
    return "\n".join(lines) + "\n"


PLT_MEASURED_LOSS_PCT = -40.0


def plt_linearity_report(base: FingerConfig, voltage: float, theta: float = DEFAULT_GRASP_ANGLE,
                         lengths=(30e-3, 40e-3)) -> tuple[float, str]:
    """Model force ratio between two electrode lengths and the measured gap."""
    spec = SweepSpec("electrode_length", lengths, base, voltage)
    rows = run_sweep(spec, Objective("force_at_angle", theta=theta))
    ratio = rows[0].objective / rows[1].objective
    text = (
        f"electrode length {lengths[0] * 1e3:g} mm vs {lengths[1] * 1e3:g} mm\n"
        f"  model force ratio:   {ratio:.3f} ({100 * (ratio - 1):+.1f} %)\n"
        f"  measured (reported): roughly {PLT_MEASURED_LOSS_PCT:+.0f} %\n"
        f"  gap: the model scales linearly with electrode length; the measured loss is larger "
        f"and is not reproduced by the analytic model\n"
    )
    return ratio, text


# ---------------------------------------------------------------- optimise


INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TraceEntry:
    point: dict[str, float]
    value: float
    stage: str
    status: str = "ok"


@dataclass(frozen=True)
class OptimizeResult:
    best: dict[str, float]
    value: float
    trace: list[TraceEntry] = field(repr=False)

    def to_csv(self) -> str:
        names = sorted(self.best)
        lines = [",".join(names + ["objective", "stage", "status"])]
        for e in self.trace:
            lines.append(",".join([f"{e.point[n]:.9g}" for n in names] + [f"{e.value:.9g}", e.stage, e.status]))
        return "\n".join(lines) + "\n"


def design_evaluator(objective: Objective, base: FingerConfig, voltage: float, table=THETA_MAX_TABLE):
    """Callable mapping a design point ``{param: SI value}`` to the objective."""

    def evaluate(point: Mapping[str, float]) -> float:
        cfg, v = base, voltage
        for name in sorted(point):
            cfg, v = apply_parameter(cfg, v, name, point[name], table)
        return evaluate_objective(objective, cfg, v)

    return evaluate


def optimize(
    bounds: Mapping[str, tuple[float, float]],
    evaluate: Callable[[Mapping[str, float]], float],
    grid_points: int = 5,
    budget: int = 200,
    rel_tol: float = 0.01,
    max_workers: int | None = None,
) -> OptimizeResult:
    """Maximise ``evaluate`` over a box.

    A coarse grid over all parameters is followed by a golden-section
    search along each parameter in turn, bracketed by one grid step around
    the incumbent. Each line search stops once its bracket is narrower than
    ``rel_tol`` of that parameter's range, or when the budget runs out.
    """
    if not bounds:
        raise ValidationError("empty bounds", code="bounds")
    if budget < 1:
        raise ValidationError("budget must be >= 1", code="bounds")
    names = sorted(bounds)
    for n in names:
        lo, hi = bounds[n]
        if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
            raise ValidationError(f"infeasible bounds for {n}: [{lo}, {hi}]", code="bounds")

    trace: list[TraceEntry] = []

    def record(point: dict[str, float], stage: str) -> float:
        try:
            value = float(evaluate(point))
            status = "ok" if math.isfinite(value) else "non-finite"
        except HaselError as exc:
            value, status = math.nan, exc.code
        trace.append(TraceEntry(dict(point), value, stage, status))
        return value if status == "ok" else -math.inf

    axes = {n: np.linspace(bounds[n][0], bounds[n][1], grid_points) if bounds[n][0] < bounds[n][1]
            else np.array([bounds[n][0]]) for n in names}
    grid = [dict(zip(names, map(float, combo))) for combo in itertools.product(*(axes[n] for n in names))]
    grid = grid[:budget]
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            values = list(pool.map(lambda p: _safe(evaluate, p), grid))
        for p, (value, status) in zip(grid, values):
            trace.append(TraceEntry(p, value, "grid", status))
    else:
        for p in grid:
            record(p, "grid")

    def best_entry() -> TraceEntry | None:
        ok = [e for e in trace if e.status == "ok"]
        return max(ok, key=lambda e: e.value) if ok else None

    incumbent = best_entry()
    if incumbent is None:
        raise ComputationError("every grid evaluation failed", code="all-failed")

    for n in names:
        lo, hi = bounds[n]
        if lo == hi or len(trace) >= budget:
            continue
        span = hi - lo
        step = span / (grid_points - 1) if grid_points > 1 else span
        x0 = incumbent.point[n]
        a, b = max(lo, x0 - step), min(hi, x0 + step)
        base_point = dict(incumbent.point)

        def f(x: float) -> float:
            return record({**base_point, n: x}, f"golden:{n}")

        c = b - INV_PHI * (b - a)
        d = a + INV_PHI * (b - a)
        fc, fd = f(c), f(d)
        while b - a > rel_tol * span and len(trace) < budget:
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - INV_PHI * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + INV_PHI * (b - a)
                fd = f(d)
        incumbent = best_entry()

    return OptimizeResult(dict(incumbent.point), incumbent.value, trace)


def _safe(evaluate, point):
    try:
        value = float(evaluate(point))
    except HaselError as exc:
        return math.nan, exc.code
    return value, "ok" if math.isfinite(value) else "non-finite"


# ----------------------------------------------------------------- grasping


@dataclass(frozen=True)
class GraspCase:
    object_mass: float  # kg
    n_toes: int
    normal_force_per_toe: float  # N
    friction_mu: float
    gravity: float = GRAVITY

    def __post_init__(self) -> None:
        if not self.object_mass >= 0:
            raise ValidationError("object mass must be >= 0", code="grasp")
        if not (isinstance(self.n_toes, (int, np.integer)) and self.n_toes >= 1):
            raise ValidationError("n_toes must be an integer >= 1", code="grasp")
        for name in ("normal_force_per_toe", "friction_mu", "gravity"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be > 0", code="grasp")


@dataclass(frozen=True)
class GraspReport:
    required_mu: float
    max_payload_kg: float
    holds: bool
    note: str = (
        "friction-grip closure: each toe presses with the stated normal force and "
        "holds by Coulomb friction; contact geometry is not modelled"
    )

    def to_text(self) -> str:
        return (
            f"holds={str(self.holds).lower()}\n"
            f"required_mu={self.required_mu:.3f}\n"
            f"max_payload_g={self.max_payload_kg * 1e3:.1f}\n"
            f"note: {self.note}\n"
        )


def grasp_feasibility(case: GraspCase) -> GraspReport:
    grip = case.n_toes * case.normal_force_per_toe
    weight = case.object_mass * case.gravity
    return GraspReport(
        required_mu=weight / grip,
        max_payload_kg=grip * case.friction_mu / case.gravity,
        holds=grip * case.friction_mu >= weight,
    )
