"""``haselgrip`` command-line entry point.

Exit status: 0 success, 1 usage error, 2 validation error, 3 computation
failure. Failures also print one JSON line on stderr, e.g.
``{"error": "unknown-design", "exit": 2, "message": "..."}``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import fixtures
from .actuator import DielectricSpec, DriveState, PouchGeometry, peano_force
from .composition import chain_tip_force_curve, crossover
from .config import load_config
from .empirics import MeasurementSeries, crossover_from_fits, fit_quadratic, load_series, ratio_report
from .errors import ComputationError, HaselError, ValidationError
from .explorer import (
    Objective,
    SweepSpec,
    design_evaluator,
    grasp_feasibility,
    GraspCase,
    optimize,
    plt_linearity_report,
    run_sweep,
    sweep_csv,
)
from .mission import simulate

EXIT_USAGE, EXIT_VALIDATION, EXIT_COMPUTATION = 1, 2, 3

# CLI unit for each sweepable parameter and its factor to SI
PARAM_UNITS = {"pouch_free_width": ("mm", 1e-3), "electrode_length": ("mm", 1e-3), "voltage": ("kV", 1e3)}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt(x: float, spec: str = ".4f") -> str:
    return format(x, spec) if math.isfinite(x) else "nan"


def _range(text: str) -> tuple[float, float, float | None]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"range must be MIN:MAX[:STEP], got {text!r}")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"range must be numeric, got {text!r}") from None
    return nums[0], nums[1], nums[2] if len(nums) == 3 else None


def _objective(args) -> Objective:
    theta = math.radians(args.theta_deg)
    if args.objective == "force_at_angle":
        return Objective("force_at_angle", theta=theta)
    if args.objective == "deflection_at_force":
        if args.target_force_n is None:
            raise UsageError("deflection_at_force needs --target-force-n")
        return Objective("deflection_at_force", theta=theta, force=args.target_force_n)
    return Objective("max_payload", theta=theta, mu=args.mu, n_toes=args.toes)


def _series_or_design(cfg, ref: str, voltage: float, samples: int) -> MeasurementSeries:
    if ref.endswith(".csv"):
        return load_series(ref)
    if ref.startswith("fixture:"):
        return fixtures.load_fixture(ref.split(":", 1)[1])
    curve = chain_tip_force_curve(cfg.finger(ref), voltage, samples)
    return MeasurementSeries(ref, curve.force_mode, curve.theta_deg, curve.values, source="synthetic")


# ---------------------------------------------------------------- commands


def cmd_force(args, cfg) -> None:
    geom = PouchGeometry(args.electrode_width_mm * 1e-3, args.pouch_width_mm * 1e-3,
                         args.width_mm * 1e-3, args.thickness_um * 1e-6)
    diel = DielectricSpec(args.eps_r)
    force = peano_force(geom, diel, DriveState(args.voltage_kv * 1e3, math.radians(args.alpha_deg)))
    print(f"{force:.4f} N")


def cmd_curve(args, cfg) -> None:
    voltage = args.voltage_kv * 1e3 if args.voltage_kv is not None else cfg.voltage
    curve = chain_tip_force_curve(cfg.finger(args.design), voltage, args.samples)
    _write(curve.to_csv(), args.output)


def cmd_sweep(args, cfg) -> None:
    unit, factor = PARAM_UNITS[args.param]
    voltage = args.voltage_kv * 1e3 if args.voltage_kv is not None else cfg.voltage
    base = cfg.finger(args.design)
    table = cfg.theta_max_table if args.param == "pouch_free_width" and not args.no_calibration else None
    if args.values:
        try:
            values = [float(v) * factor for v in args.values.split(",")]
        except ValueError:
            raise UsageError(f"--values must be comma-separated numbers in {unit}") from None
        spec = SweepSpec(args.param, values, base, voltage, table)
    elif args.range:
        lo, hi, step = _range(args.range)
        if step is None:
            raise UsageError("sweep --range needs MIN:MAX:STEP")
        spec = SweepSpec.from_range(args.param, lo * factor, hi * factor, step * factor, base, voltage, table)
    else:
        raise UsageError("sweep needs --values or --range")
    rows = run_sweep(spec, _objective(args), max_workers=args.workers)
    _write(sweep_csv(rows), args.output)
    if args.summary:
        ok = [r for r in rows if r.status == "ok"]
        print(f"# {len(rows)} rows, {len(rows) - len(ok)} failed", file=sys.stderr)
        if ok:
            best = max(ok, key=lambda r: r.free_deflection_deg)
            print(f"# largest free deflection {best.free_deflection_deg:.1f} deg at "
                  f"{args.param}={best.param / factor:g} {unit}", file=sys.stderr)
        if args.param == "electrode_length":
            _, text = plt_linearity_report(base, voltage, math.radians(args.theta_deg))
            sys.stderr.write("".join(f"# {line}\n" for line in text.splitlines()))


def cmd_optimize(args, cfg) -> None:
    voltage = args.voltage_kv * 1e3 if args.voltage_kv is not None else cfg.voltage
    bounds = {}
    for item in args.bounds:
        name, sep, rng = item.partition("=")
        if not sep or name not in PARAM_UNITS:
            raise UsageError(f"--bounds must be PARAM=MIN:MAX with PARAM in {', '.join(PARAM_UNITS)}")
        lo, hi, _ = _range(rng)
        factor = PARAM_UNITS[name][1]
        bounds[name] = (lo * factor, hi * factor)
    evaluate = design_evaluator(_objective(args), cfg.finger(args.design), voltage, cfg.theta_max_table)
    result = optimize(bounds, evaluate, grid_points=args.grid, budget=args.budget, max_workers=args.workers)
    if args.trace:
        Path(args.trace).write_text(result.to_csv(), encoding="utf-8")
    for name in sorted(result.best):
        unit, factor = PARAM_UNITS[name]
        print(f"{name}={result.best[name] / factor:.6g} {unit}")
    print(f"objective={result.value:.6g}")
    print(f"evaluations={len(result.trace)}")


def cmd_fit(args, cfg) -> None:
    series = load_series(args.csv)
    fit = fit_quadratic(series)
    if args.format == "csv":
        _write("label,c0,c1,c2,rms_residual,theta_min,theta_max\n"
               f"{series.label},{fit.c0:.12g},{fit.c1:.12g},{fit.c2:.12g},{fit.rms_residual:.6g},"
               f"{fit.domain[0]:g},{fit.domain[1]:g}\n", args.output)
    else:
        _write(f"{series.label}: value = {fit.c0:.6g} + {fit.c1:.6g}*theta + {fit.c2:.6g}*theta^2"
               f"  (theta in deg, rms {fit.rms_residual:.3g}, domain {fit.domain[0]:g}-{fit.domain[1]:g} deg)\n",
               args.output)


def _crossings(a: MeasurementSeries, b: MeasurementSeries, method: str):
    if method == "fit":
        return crossover_from_fits(fit_quadratic(a), fit_quadratic(b))
    return crossover(a.to_curve(), b.to_curve())


def _crossing_text(points, fmt: str) -> str:
    if fmt == "csv":
        return "theta_deg,value\n" + "".join(f"{t:.4f},{v:.6f}\n" for t, v in points)
    if not points:
        return "no crossover\n"
    return "".join(f"crossover at {t:.2f} deg, value {v:.4f}\n" for t, v in points)


def cmd_crossover(args, cfg) -> None:
    a, b = load_series(args.csv_a), load_series(args.csv_b)
    _write(_crossing_text(_crossings(a, b, args.method), args.format), args.output)


def cmd_compare(args, cfg) -> None:
    voltage = args.voltage_kv * 1e3 if args.voltage_kv is not None else cfg.voltage
    a = _series_or_design(cfg, args.design_a, voltage, args.samples)
    b = _series_or_design(cfg, args.design_b, voltage, args.samples)
    if a.label == b.label:
        raise ValidationError("designs in a comparison need distinct labels", code="duplicate-label")
    lines = [f"# {a.label} ({a.source}) vs {b.label} ({b.source})"]
    if args.curves:
        Path(args.curves).mkdir(parents=True, exist_ok=True)
        for s in (a, b):
            Path(args.curves, f"{s.label}.csv").write_text(s.to_csv(), encoding="utf-8")
    sys.stdout.write("\n".join(lines) + "\n")
    sys.stdout.write(_crossing_text(_crossings(a, b, args.method), "text"))
    sys.stdout.write(ratio_report(a, b).to_text())


def cmd_grasp(args, cfg) -> None:
    case = GraspCase(args.mass_g * 1e-3, args.toes, args.force_n, args.mu)
    sys.stdout.write(grasp_feasibility(case).to_text())


def cmd_mission(args, cfg) -> None:
    overrides = {
        "closure_time": f"{args.closure_time_s} s" if args.closure_time_s is not None else None,
        "slowdown": args.slowdown,
        "latency": f"{args.latency_ms} ms" if args.latency_ms is not None else None,
        "supply": args.supply,
        "seed": args.seed,
    }
    if args.command_time_s is not None:
        overrides["commands"] = [{"t": f"{args.command_time_s} s", "command": "close"}]
    traj, timeline, dyn, dt = cfg.mission_setup(overrides)
    result = simulate(traj, timeline, dyn, dt)
    if args.trace:
        Path(args.trace).write_text(result.to_csv(), encoding="utf-8")
    print(f"outcome={result.outcome}")
    print(f"supply={dyn.supply} time_to_95={dyn.time_to_95:.3f} s")
    for t in result.deliveries:
        print(f"command_delivered_at={t:.4f} s")


def cmd_fixtures(args, cfg) -> None:
    if args.action == "list":
        for name in fixtures.bundled_names():
            f = fixtures.FIXTURES[name]
            print(f"{name}: {f.label}, zero at {f.free_deflection_deg:g} deg")
        return
    target = args.dir or (cfg.fixture_dir if cfg.fixture_dir is not None else None)
    for path in fixtures.install(target):
        print(path)


# ------------------------------------------------------------------ parser


def _objective_args(p) -> None:
    p.add_argument("--objective", choices=["force_at_angle", "deflection_at_force", "max_payload"],
                   default="force_at_angle")
    p.add_argument("--theta-deg", type=float, default=20.0,
                   help="deflection for force_at_angle / max_payload [deg] (default 20)")
    p.add_argument("--target-force-n", type=float, help="tip force for deflection_at_force [N]")
    p.add_argument("--mu", type=float, default=1.0, help="friction coefficient for max_payload")
    p.add_argument("--toes", type=int, default=4, help="number of toes for max_payload")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="haselgrip", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="TOML project config merged over the built-in designs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("force", help="evaluate the Peano-HASEL force law [N]")
    p.add_argument("--width-mm", type=float, required=True, help="actuator width w along the hinge axis [mm]")
    p.add_argument("--thickness-um", type=float, default=18.0, help="film thickness t [um] (default 18)")
    p.add_argument("--eps-r", type=float, default=3.2, help="relative permittivity (default 3.2)")
    p.add_argument("--voltage-kv", type=float, required=True, help="drive voltage [kV]")
    p.add_argument("--alpha-deg", type=float, required=True, help="zip angle [deg], in (0, 90)")
    p.add_argument("--electrode-width-mm", type=float, default=10.0, help="electrode width L_e [mm]")
    p.add_argument("--pouch-width-mm", type=float, default=10.0, help="free pouch width [mm]")
    p.set_defaults(func=cmd_force)

    p = sub.add_parser("curve", help="tip-force vs deflection CSV for a design")
    p.add_argument("design")
    p.add_argument("--voltage-kv", type=float, help="drive voltage [kV] (default from config)")
    p.add_argument("--samples", type=int, default=91)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("sweep", help="sweep one design parameter (widths/lengths in mm, voltage in kV)")
    p.add_argument("--param", choices=sorted(PARAM_UNITS), required=True)
    p.add_argument("--range", help="MIN:MAX:STEP in mm or kV")
    p.add_argument("--values", help="comma-separated values in mm or kV")
    p.add_argument("--design", default="pwt10")
    p.add_argument("--voltage-kv", type=float, help="drive voltage [kV] (default from config)")
    p.add_argument("--no-calibration", action="store_true",
                   help="keep theta_max fixed instead of looking it up by pouch width")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--summary", action="store_true", help="human-readable summary on stderr")
    p.add_argument("-o", "--output")
    _objective_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="grid + golden-section search over design bounds")
    p.add_argument("--bounds", action="append", required=True,
                   help="PARAM=MIN:MAX in mm or kV; repeatable")
    p.add_argument("--design", default="pwt10")
    p.add_argument("--voltage-kv", type=float, help="drive voltage [kV] (default from config)")
    p.add_argument("--grid", type=int, default=5, help="grid points per parameter")
    p.add_argument("--budget", type=int, default=200, help="maximum evaluations")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--trace", help="write the evaluation trace CSV here")
    _objective_args(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("fit", help="second-order least-squares fit of a theta_deg,value CSV")
    p.add_argument("csv")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("crossover", help="intersection angles of two measured curves")
    p.add_argument("csv_a")
    p.add_argument("csv_b")
    p.add_argument("--method", choices=["fit", "linear"], default="fit",
                   help="quadratic fits (default) or piecewise-linear interpolation")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("compare", help="curves, crossover and ratio report for two designs "
                                       "(design name, fixture:NAME or a .csv path)")
    p.add_argument("design_a")
    p.add_argument("design_b")
    p.add_argument("--voltage-kv", type=float, help="drive voltage [kV] (default from config)")
    p.add_argument("--samples", type=int, default=91)
    p.add_argument("--method", choices=["fit", "linear"], default="linear")
    p.add_argument("--curves", help="directory to write both curves as CSV")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("grasp", help="friction-grip payload check")
    p.add_argument("--mass-g", type=float, required=True, help="object mass [g]")
    p.add_argument("--toes", type=int, required=True, help="number of toes")
    p.add_argument("--force-n", type=float, required=True, help="normal force per toe [N]")
    p.add_argument("--mu", type=float, required=True, help="friction coefficient")
    p.set_defaults(func=cmd_grasp)

    p = sub.add_parser("mission", help="simulate a swooping grasp; closure time, slowdown and latency "
                                       "must be given in the config or here")
    p.add_argument("--closure-time-s", type=float, help="time to 95%% closure on the lab supply [s]")
    p.add_argument("--slowdown", type=float, help="untethered HVPS slowdown factor (>= 1)")
    p.add_argument("--latency-ms", type=float, help="command link latency [ms]")
    p.add_argument("--supply", choices=["lab-supply", "untethered-hvps"])
    p.add_argument("--command-time-s", type=float, help="issue a single close command at this time [s]")
    p.add_argument("--seed", type=int)
    p.add_argument("--trace", help="write the t_s,x_m,z_m,dist_m,cmd,closure_frac trace here")
    p.add_argument("--config", default=argparse.SUPPRESS, help="TOML file with a [mission] table")
    p.set_defaults(func=cmd_mission)

    p = sub.add_parser("fixtures", help="reference curves rebuilt from quoted anchor values")
    p.add_argument("action", choices=["install", "list"])
    p.add_argument("--dir", help="target directory (default $FIXTURE_DIR, then ./fixtures)")
    p.set_defaults(func=cmd_fixtures)
    return parser


def _fail(code: str, status: int, message: str) -> int:
    print(json.dumps({"error": code, "exit": status, "message": message}), file=sys.stderr)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_config(args.config)
        args.func(args, cfg)
    except UsageError as exc:
        return _fail("usage", EXIT_USAGE, str(exc))
    except ValidationError as exc:
        return _fail(exc.code, EXIT_VALIDATION, str(exc))
    except (ComputationError, HaselError) as exc:
        return _fail(exc.code, EXIT_COMPUTATION, str(exc))
    except (ArithmeticError, ValueError) as exc:
        return _fail("computation", EXIT_COMPUTATION, str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
