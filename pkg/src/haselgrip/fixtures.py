"""Reference curves rebuilt from the figures' quoted anchor values.

The raw measurements behind the published force-angle plots are not
available. Each fixture here is a quadratic forced through three points:
the quoted anchors (crossover angles, meeting values, force at a stated
deflection) plus documented fixture choices where the text gives no
number (the zero-deflection intercept, the exact free deflection). The
curves are sampled every 2 degrees from 0 to their free deflection and
written to CSV with the construction recorded in the comment header.

These are labelled ``source: paper-fixture`` and are never measurements.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .empirics import MeasurementSeries, parse_series

STEP_DEG = 2.0
FIXTURE_ENV = "FIXTURE_DIR"


def quadratic_through(points) -> np.ndarray:
    """Coefficients (c0, c1, c2) of the parabola through three (theta, value) points."""
    a = np.array([[1.0, t, t * t] for t, _ in points])
    y = np.array([v for _, v in points])
    return np.linalg.solve(a, y)


def _eval(c, t):
    return c[0] + c[1] * t + c[2] * t * t


@dataclass(frozen=True)
class Fixture:
    name: str
    label: str
    coefficients: tuple[float, float, float]
    free_deflection_deg: float
    constraints: tuple[str, ...]
    force_mode: str = "tip-force"

    def series(self) -> MeasurementSeries:
        theta = np.arange(0.0, self.free_deflection_deg + STEP_DEG / 2, STEP_DEG)
        values = np.round(_eval(self.coefficients, theta), 6)
        values[-1] = 0.0 if abs(values[-1]) < 5e-7 else values[-1]
        header = ("paper-fixture: reconstructed curve, not measured data",) + tuple(
            f"constraint: {c}" for c in self.constraints
        ) + (
            "coefficients (c0, c1, c2): " + ", ".join(f"{c:.12g}" for c in self.coefficients),
            f"sampled every {STEP_DEG:g} deg on [0, {self.free_deflection_deg:g}] deg, rounded to 1e-6",
        )
        return MeasurementSeries(self.label, self.force_mode, theta, values, None, "paper-fixture", header)


def _build() -> dict[str, Fixture]:
    scorpion = quadratic_through([(0, 0.28), (20, 0.2), (60, 0.0)])
    pwt10 = quadratic_through([(0, 0.36), (19, _eval(scorpion, 19)), (46, 0.0)])
    triple = quadratic_through([(0, 0.22), (56, 0.025), (60, 0.0)])
    # hybrid - triple = k (theta - 26)(theta - 56), hybrid reaches zero at 62
    k = -_eval(triple, 62) / ((62 - 26) * (62 - 56))
    hybrid = triple + k * np.array([26.0 * 56.0, -(26.0 + 56.0), 1.0])

    def fx(name, label, c, free, constraints):
        return Fixture(name, label, tuple(float(x) for x in c), free, tuple(constraints))

    out = [
        fx("scorpion", "Scorpion", scorpion, 60.0, [
            "passes (20 deg, 0.2 N): quoted force at 20 deg deflection",
            "zero at 60 deg: free deflection above 50 deg and ~30% beyond PWT-10 (46 deg)",
            "passes (0 deg, 0.28 N): fixture choice",
        ]),
        fx("pwt10", "PWT-10", pwt10, 46.0, [
            "meets Scorpion at 19 deg: quoted crossover",
            "zero at 46 deg: 10 mm entry of the pouch-width calibration table",
            "passes (0 deg, 0.36 N): fixture choice, stronger than Scorpion below 19 deg",
        ]),
        fx("triple", "Triple", triple, 60.0, [
            "passes (56 deg, 0.025 N): quoted second meeting point with Hybrid",
            "passes (0 deg, 0.22 N): fixture choice",
            "zero at 60 deg: fixture choice",
        ]),
        fx("hybrid", "Hybrid", hybrid, 62.0, [
            "Hybrid - Triple has roots at 26 deg and 56 deg: quoted crossovers",
            "zero at 62 deg: fixture choice, Hybrid deflects further than Triple",
        ]),
        fx("plt40", "PLT-40", pwt10, 46.0, [
            "40x10x10 mm baseline geometry, identical to PWT-10",
        ]),
        fx("plt30", "PLT-30", 0.6 * pwt10, 46.0, [
            "0.6 x PLT-40 pointwise: quoted loss of roughly 40% going from 40 to 30 mm",
            "same free deflection as PLT-40: electrode length does not change deflection",
        ]),
    ]
    return {f.name: f for f in out}


FIXTURES = _build()


def fixture_csv(name: str) -> str:
    return FIXTURES[name].series().to_csv()


def bundled_names() -> list[str]:
    return sorted(FIXTURES)


def bundled_text(name: str) -> str:
    """CSV text of a fixture as shipped inside the package."""
    return resources.files("haselgrip").joinpath("data", "fixtures", f"{name}.csv").read_text(encoding="utf-8")


def load_fixture(name: str) -> MeasurementSeries:
    """Bundled fixture series, looked up by name (e.g. ``"scorpion"``)."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(bundled_names())}")
    return parse_series(bundled_text(name), label=name, source="paper-fixture")


def fixture_dir(default: str | Path = "fixtures") -> Path:
    return Path(os.environ.get(FIXTURE_ENV, default))


def install(directory: str | Path | None = None) -> list[Path]:
    target = Path(directory) if directory is not None else fixture_dir()
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name in bundled_names():
        path = target / f"{name}.csv"
        path.write_text(bundled_text(name), encoding="utf-8")
        written.append(path)
    return written


def regenerate_bundled(directory: str | Path) -> None:
    """Rewrite the shipped CSVs from the constraint definitions."""
    directory = Path(directory)
    for name in bundled_names():
        (directory / f"{name}.csv").write_text(fixture_csv(name), encoding="utf-8")
