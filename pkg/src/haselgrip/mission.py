"""Discrete-time simulation of a swooping aerial grasp.

The vehicle follows a prescribed parabolic swoop past the object. Gripper
commands travel ground station -> onboard computer -> micro-controller as
4-byte frames and arrive after the link latency plus a seeded, bounded
jitter. Closure follows a first-order response toward the commanded
state. The grasp succeeds if closure reaches 90 % while the object is
inside the gripper envelope.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ComputationError, ValidationError
from .frames import decode_frame, encode_frame

GRASP_CLOSURE = 0.9
OUTCOMES = ("grasped", "missed-early", "missed-late")
SUPPLIES = ("lab-supply", "untethered-hvps")


@dataclass(frozen=True)
class SwoopTrajectory:
    """Parabolic gripper path; lengths in m, speed in m/s.

    The gripper starts ``start_distance`` before the object at
    ``start_altitude``, bottoms out at ``min_altitude`` directly above the
    object and climbs back symmetrically.
    """

    approach_speed: float
    min_altitude: float
    object_position: tuple[float, float] = (0.0, 0.0)
    grasp_radius: float = 0.05
    start_distance: float = 2.0
    start_altitude: float = 1.0

    def __post_init__(self) -> None:
        for name in ("approach_speed", "grasp_radius", "start_distance"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be > 0", code="trajectory")
        if not self.start_altitude >= self.min_altitude:
            raise ValidationError("start_altitude must be >= min_altitude", code="trajectory")

    @property
    def duration(self) -> float:
        return 2.0 * self.start_distance / self.approach_speed

    def position(self, t):
        t = np.asarray(t, dtype=float)
        x0, _ = self.object_position
        x = x0 - self.start_distance + self.approach_speed * t
        k = (self.start_altitude - self.min_altitude) / self.start_distance**2
        z = self.min_altitude + k * (x - x0) ** 2
        return x, z

    def distance(self, t):
        x, z = self.position(t)
        x0, z0 = self.object_position
        return np.hypot(x - x0, z - z0)


@dataclass(frozen=True)
class ActuationDynamics:
    """First-order closure; ``closure_time_constant`` is the time to 95 % [s]."""

    closure_time_constant: float = 0.15
    supply: str = "lab-supply"
    untethered_slowdown_factor: float = 1.5

    def __post_init__(self) -> None:
        if not (math.isfinite(self.closure_time_constant) and self.closure_time_constant > 0):
            raise ValidationError("closure_time_constant must be > 0", code="dynamics")
        if self.supply not in SUPPLIES:
            raise ValidationError(f"unknown supply {self.supply!r}", code="dynamics")
        if not self.untethered_slowdown_factor >= 1:
            raise ValidationError("untethered_slowdown_factor must be >= 1", code="dynamics")

    @property
    def time_to_95(self) -> float:
        slow = self.untethered_slowdown_factor if self.supply == "untethered-hvps" else 1.0
        return self.closure_time_constant * slow

    @property
    def tau(self) -> float:
        """Exponential time constant of the first-order lag [s]."""
        return self.time_to_95 / math.log(20.0)


@dataclass(frozen=True)
class TimedCommand:
    t: float
    frame: bytes

    @classmethod
    def close(cls, t: float, duty: int = 255) -> TimedCommand:
        return cls(t, encode_frame("close", duty))

    @classmethod
    def open(cls, t: float) -> TimedCommand:
        return cls(t, encode_frame("open", 0))


@dataclass(frozen=True)
class CommandTimeline:
    commands: tuple[TimedCommand, ...]
    link_latency: float = 0.02
    jitter_bound: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "commands", tuple(self.commands))
        times = [c.t for c in self.commands]
        if any(not math.isfinite(t) or t < 0 for t in times):
            raise ValidationError("command times must be finite and >= 0", code="timeline")
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValidationError("command timestamps must be non-decreasing", code="timeline")
        if not self.link_latency >= 0:
            raise ValidationError("link_latency must be >= 0", code="timeline")
        if not self.jitter_bound >= 0:
            raise ValidationError("jitter_bound must be >= 0", code="timeline")


@dataclass(frozen=True, eq=False)
class SimulationResult:
    outcome: str
    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)
    dist: np.ndarray = field(repr=False)
    cmd: np.ndarray = field(repr=False)
    closure: np.ndarray = field(repr=False)
    deliveries: tuple[float, ...] = ()

    @property
    def grasped(self) -> bool:
        return self.outcome == "grasped"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t_s,x_m,z_m,dist_m,cmd,closure_frac\n")
        for row in zip(self.t, self.x, self.z, self.dist, self.cmd, self.closure):
            buf.write("{:.6f},{:.6f},{:.6f},{:.6f},{:.4f},{:.6f}\n".format(*row))
        return buf.getvalue()


def _deliveries(timeline: CommandTimeline) -> list[tuple[float, float]]:
    """(arrival time, target closure) per command, in arrival order."""
    decoded = [decode_frame(c.frame) for c in timeline.commands]
    n = len(decoded)
    if timeline.jitter_bound > 0:
        jitter = np.random.default_rng(timeline.seed).uniform(0.0, timeline.jitter_bound, size=n)
    else:
        jitter = np.zeros(n)
    events = []
    for cmd, (kind, duty), j in zip(timeline.commands, decoded, jitter):
        target = duty / 255.0 if kind == "close" else 0.0
        events.append((cmd.t + timeline.link_latency + float(j), target))
    return sorted(events, key=lambda e: e[0])


def simulate(traj: SwoopTrajectory, timeline: CommandTimeline, dyn: ActuationDynamics, dt: float) -> SimulationResult:
    if not (math.isfinite(dt) and dt > 0):
        raise ValidationError("dt must be > 0", code="dt")
    events = _deliveries(timeline)
    n = int(math.floor(traj.duration / dt + 1e-9)) + 1
    t = np.arange(n) * dt
    x, z = traj.position(t)
    dist = traj.distance(t)
    tau = dyn.tau

    closure = np.empty(n)
    cmd = np.empty(n)
    c, target, e = 0.0, 0.0, 0
    while e < len(events) and events[e][0] <= 0.0:
        target = events[e][1]
        e += 1
    closure[0], cmd[0] = c, target
    for k in range(1, n):
        now, t_end = t[k - 1], t[k]
        # apply every arrival inside (t[k-1], t[k]] at its exact time
        while e < len(events) and events[e][0] <= t_end:
            arrival, new_target = events[e]
            c = target + (c - target) * math.exp(-(arrival - now) / tau)
            now, target = arrival, new_target
            e += 1
        c = target + (c - target) * math.exp(-(t_end - now) / tau)
        closure[k], cmd[k] = c, target

    in_window = dist <= traj.grasp_radius
    closed = closure >= GRASP_CLOSURE
    if np.any(in_window & closed):
        outcome = "grasped"
    elif not np.any(in_window):
        # the object was never within reach; nothing was closed too early
        outcome = "missed-late"
    else:
        first = int(np.argmax(in_window))
        outcome = "missed-early" if np.any(closed[:first]) else "missed-late"
    return SimulationResult(outcome, t, x, z, dist, cmd, closure, tuple(ev[0] for ev in events))


def single_close(t_cmd: float, latency: float = 0.02, jitter_bound: float = 0.0, seed: int = 0,
                 duty: int = 255) -> CommandTimeline:
    return CommandTimeline((TimedCommand.close(t_cmd, duty),), latency, jitter_bound, seed)


def scan_command_times(
    traj: SwoopTrajectory,
    dyn: ActuationDynamics,
    dt: float,
    times: Sequence[float],
    latency: float = 0.02,
    jitter_bound: float = 0.0,
    seed: int = 0,
    max_workers: int | None = None,
) -> list[str]:
    """Outcome of a single close command issued at each of ``times``."""

    def run(t_cmd: float) -> str:
        return simulate(traj, single_close(t_cmd, latency, jitter_bound, seed), dyn, dt).outcome

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(run, times))
    return [run(t) for t in times]


def boundary_command_time(
    traj: SwoopTrajectory,
    dyn: ActuationDynamics,
    dt: float,
    latency: float = 0.02,
    jitter_bound: float = 0.0,
    seed: int = 0,
    tol: float = 1e-6,
) -> float:
    """Latest close-command time [s] that still yields a grasp, by bisection."""

    def grasps(t_cmd: float) -> bool:
        return simulate(traj, single_close(t_cmd, latency, jitter_bound, seed), dyn, dt).grasped

    lo, hi = 0.0, traj.duration
    if not grasps(lo):
        raise ComputationError("no grasp even when closing at t = 0", code="no-window")
    if grasps(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if grasps(mid):
            lo = mid
        else:
            hi = mid
    return lo
