"""Measured force/torque-angle series: ingestion, quadratic fits, comparisons.

CSV layout (UTF-8, comma separated, ``.`` decimal point)::

    # label: scorpion
    # force_mode: tip-force
    theta_deg,value[,stderr]
    0,0.28
    ...

Lines starting with ``#`` are comments; ``# key: value`` comments before
the header carry optional metadata (``label``, ``force_mode``, ``source``).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DegenerateOverlapError, ValidationError
from .hinge import FORCE_MODES, TorqueAngleCurve

SOURCES = ("measured-file", "paper-fixture", "synthetic")


class SeriesFormatError(ValidationError):
    """Malformed measurement file; ``code`` names the specific defect."""


@dataclass(frozen=True, eq=False)
class MeasurementSeries:
    label: str
    force_mode: str
    theta_deg: np.ndarray
    values: np.ndarray
    stderr: np.ndarray | None = None
    source: str = "measured-file"
    comments: tuple[str, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        theta = np.array(self.theta_deg, dtype=float)
        values = np.array(self.values, dtype=float)
        object.__setattr__(self, "theta_deg", theta)
        object.__setattr__(self, "values", values)
        if self.stderr is not None:
            object.__setattr__(self, "stderr", np.array(self.stderr, dtype=float))
        if self.force_mode not in FORCE_MODES:
            raise SeriesFormatError(f"unknown force mode {self.force_mode!r}", code="mode")
        if self.source not in SOURCES:
            raise SeriesFormatError(f"unknown source {self.source!r}", code="source")
        if theta.shape != values.shape or theta.ndim != 1:
            raise SeriesFormatError("theta and value columns differ in length", code="shape")
        if theta.size < 3:
            raise SeriesFormatError(f"need at least 3 rows, got {theta.size}", code="too-few-rows")
        if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(values))):
            raise SeriesFormatError("values must be finite", code="non-numeric")
        steps = np.diff(theta)
        if np.any(steps == 0):
            dup = theta[1:][steps == 0][0]
            raise SeriesFormatError(f"duplicate theta {dup:g}", code="duplicate-abscissa")
        if np.any(steps < 0):
            raise SeriesFormatError("theta must be strictly increasing", code="non-increasing")

    def __len__(self) -> int:
        return self.theta_deg.size

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.theta_deg[0]), float(self.theta_deg[-1])

    def to_curve(self) -> TorqueAngleCurve:
        return TorqueAngleCurve(self.theta_deg, self.values, "measured", self.force_mode, label=self.label)

    def to_csv(self) -> str:
        buf = io.StringIO()
        for line in self.comments:
            buf.write(f"# {line}\n" if line else "#\n")
        buf.write(f"# label: {self.label}\n# force_mode: {self.force_mode}\n# source: {self.source}\n")
        with_err = self.stderr is not None
        buf.write("theta_deg,value,stderr\n" if with_err else "theta_deg,value\n")
        for i in range(len(self)):
            row = f"{self.theta_deg[i]:g},{self.values[i]:.6f}"
            if with_err:
                row += f",{self.stderr[i]:.6f}"
            buf.write(row + "\n")
        return buf.getvalue()


def parse_series(text: str, label: str = "", source: str = "measured-file") -> MeasurementSeries:
    meta: dict[str, str] = {}
    data_lines = []
    comments = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, sep, value = body.partition(":")
            if sep and key.strip() in ("label", "force_mode", "source"):
                meta[key.strip()] = value.strip()
            else:
                comments.append(body)
            continue
        data_lines.append(line)
    if not data_lines:
        raise SeriesFormatError("missing header row", code="missing-columns")
    rows = list(csv.reader(data_lines))
    header = [h.strip() for h in rows[0]]
    if header[:2] != ["theta_deg", "value"] or len(header) > 3 or (len(header) == 3 and header[2] != "stderr"):
        raise SeriesFormatError(f"header must be theta_deg,value[,stderr], got {','.join(header)}", code="missing-columns")
    body = rows[1:]
    if len(body) < 3:
        raise SeriesFormatError(f"need at least 3 rows, got {len(body)}", code="too-few-rows")
    cols: list[list[float]] = [[] for _ in header]
    for n, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise SeriesFormatError(f"row {n} has {len(row)} cells, expected {len(header)}", code="missing-columns")
        for j, cell in enumerate(row):
            try:
                x = float(cell)
            except ValueError:
                raise SeriesFormatError(f"row {n}: non-numeric cell {cell!r}", code="non-numeric") from None
            if not math.isfinite(x):
                raise SeriesFormatError(f"row {n}: non-finite cell {cell!r}", code="non-numeric")
            cols[j].append(x)
    return MeasurementSeries(
        label=meta.get("label", label),
        force_mode=meta.get("force_mode", "tip-force"),
        theta_deg=np.array(cols[0]),
        values=np.array(cols[1]),
        stderr=np.array(cols[2]) if len(cols) == 3 else None,
        source=meta.get("source", source),
        comments=tuple(comments),
    )


def load_series(path: str | Path) -> MeasurementSeries:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValidationError(f"no such file: {path}", code="missing-file") from None
    return parse_series(text, label=path.stem)


@dataclass(frozen=True)
class QuadraticFit:
    """``value = c0 + c1*theta + c2*theta**2`` with theta in degrees."""

    c0: float
    c1: float
    c2: float
    rms_residual: float
    domain: tuple[float, float]
    label: str = ""

    @property
    def coefficients(self) -> tuple[float, float, float]:
        return (self.c0, self.c1, self.c2)

    def __call__(self, theta):
        t = np.asarray(theta, dtype=float)
        out = self.c0 + t * (self.c1 + t * self.c2)
        return float(out) if out.ndim == 0 else out

    def sampled(self, n: int = 101, force_mode: str = "tip-force") -> TorqueAngleCurve:
        theta = np.linspace(self.domain[0], self.domain[1], n)
        return TorqueAngleCurve(theta, self(theta), "fitted", force_mode, label=self.label)


def fit_quadratic(series: MeasurementSeries) -> QuadraticFit:
    """Unweighted least squares on ``(1, theta, theta^2)``; stderr is ignored."""
    theta, y = series.theta_deg, series.values
    # scaled Vandermonde keeps the solve well conditioned for theta ~ 1e2
    center = 0.5 * (theta[0] + theta[-1])
    half = 0.5 * (theta[-1] - theta[0])
    u = (theta - center) / half
    vander = np.column_stack([np.ones_like(u), u, u * u])
    (a0, a1, a2), *_ = np.linalg.lstsq(vander, y, rcond=None)
    c2 = a2 / half**2
    c1 = a1 / half - 2.0 * a2 * center / half**2
    c0 = a0 - a1 * center / half + a2 * center**2 / half**2
    fit = QuadraticFit(float(c0), float(c1), float(c2), 0.0, series.domain, series.label)
    resid = y - fit(theta)
    return QuadraticFit(fit.c0, fit.c1, fit.c2, float(np.sqrt(np.mean(resid**2))), series.domain, series.label)


def normal_equations_fit(theta, values) -> tuple[float, float, float]:
    """Exact rational solve of the 3x3 normal equations.

    Independent check on :func:`fit_quadratic`: no numpy, no scaling.
    """
    ts = [Fraction(float(t)) for t in theta]
    ys = [Fraction(float(v)) for v in values]
    s = [sum(t**k for t in ts) for k in range(5)]
    r = [sum(y * t**k for t, y in zip(ts, ys)) for k in range(3)]
    m = [[s[i + j] for j in range(3)] + [r[i]] for i in range(3)]
    for col in range(3):
        pivot = next(i for i in range(col, 3) if m[i][col] != 0)
        m[col], m[pivot] = m[pivot], m[col]
        for i in range(3):
            if i != col and m[i][col] != 0:
                f = m[i][col] / m[col][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return tuple(float(m[i][3] / m[i][i]) for i in range(3))


def crossover_from_fits(a: QuadraticFit, b: QuadraticFit) -> list[tuple[float, float]]:
    """Real roots of ``a - b`` inside both fit domains, with the meeting value."""
    lo = max(a.domain[0], b.domain[0])
    hi = min(a.domain[1], b.domain[1])
    if not lo <= hi:
        raise ValidationError("fit domains do not overlap", code="disjoint-domain")
    d0, d1, d2 = (x - y for x, y in zip(a.coefficients, b.coefficients))
    if d0 == 0 and d1 == 0 and d2 == 0:
        raise DegenerateOverlapError("fits have identical coefficients")
    if d2 == 0:
        roots = [] if d1 == 0 else [-d0 / d1]
    else:
        disc = d1 * d1 - 4.0 * d2 * d0
        if disc < 0:
            roots = []
        else:
            # cancellation-free form of the quadratic formula
            q = -0.5 * (d1 + math.copysign(math.sqrt(disc), d1))
            roots = [q / d2] if q == 0 else sorted({q / d2, d0 / q})
    return [(r, a(r)) for r in sorted(roots) if lo <= r <= hi]


@dataclass(frozen=True)
class RatioReport:
    """How series ``b`` compares with reference series ``a``, in percent."""

    label_a: str
    label_b: str
    max_value_pct: float
    max_deflection_pct: float
    theta_deg: np.ndarray
    pointwise_pct: np.ndarray
    notes: tuple[str, ...] = ()

    @property
    def max_pointwise_pct(self) -> float:
        finite = self.pointwise_pct[np.isfinite(self.pointwise_pct)]
        return float(finite[np.argmax(np.abs(finite))]) if finite.size else math.nan

    def to_text(self) -> str:
        lines = [
            f"{self.label_b} vs {self.label_a}",
            f"  max value change:      {self.max_value_pct:+.1f} %",
            f"  max deflection change: {self.max_deflection_pct:+.1f} %",
            f"  largest pointwise:     {self.max_pointwise_pct:+.1f} %",
        ]
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        lines = ["theta_deg,ratio_pct"]
        lines += [f"{t:.6f},{p:.6f}" for t, p in zip(self.theta_deg, self.pointwise_pct)]
        return "\n".join(lines) + "\n"


def _max_deflection(s: MeasurementSeries) -> float:
    """Largest theta at which the series still carries a non-negative value."""
    ok = s.theta_deg[s.values >= 0]
    return float(ok[-1]) if ok.size else float(s.theta_deg[0])


def ratio_report(a: MeasurementSeries, b: MeasurementSeries, notes: tuple[str, ...] = ()) -> RatioReport:
    if a.force_mode != b.force_mode:
        raise ValidationError(f"cannot compare {a.force_mode} with {b.force_mode}", code="mode-mismatch")
    lo = max(a.domain[0], b.domain[0])
    hi = min(a.domain[1], b.domain[1])
    if not lo < hi:
        raise ValidationError("series have no overlapping theta range", code="disjoint-domain")
    grid = a.theta_deg[(a.theta_deg >= lo) & (a.theta_deg <= hi)]
    va = np.interp(grid, a.theta_deg, a.values)
    vb = np.interp(grid, b.theta_deg, b.values)
    with np.errstate(divide="ignore", invalid="ignore"):
        pct = np.where(va != 0, 100.0 * (vb / va - 1.0), np.where(vb == 0, 0.0, np.nan))
    max_a, max_b = float(np.max(a.values)), float(np.max(b.values))
    defl_a, defl_b = _max_deflection(a), _max_deflection(b)
    return RatioReport(
        label_a=a.label,
        label_b=b.label,
        max_value_pct=100.0 * (max_b / max_a - 1.0),
        max_deflection_pct=100.0 * (defl_b / defl_a - 1.0) if defl_a else math.nan,
        theta_deg=grid,
        pointwise_pct=pct,
        notes=notes,
    )
