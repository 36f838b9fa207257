"""Fixed-timestep kinematic swarm simulation.

Each airborne drone turns its potential-field force into a commanded
velocity, tracked through a first-order response (time constant tau) and
clamped to v_max.  Waypoints stream by dispatch time; the whole swarm
follows one schedule with a constant per-drone formation offset.  The
world is owned by a single tick loop; everything is deterministic for a
fixed seed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .field import FieldParams, Obstacle, nearest_obstacle_point, total_force
from .trajectory import TimedWaypoint

GROUNDED = "GROUNDED"
AIRBORNE = "AIRBORNE"
LANDING = "LANDING"

LED_PALETTE = [
    (1.0, 0.25, 0.1),
    (0.15, 1.0, 0.3),
    (0.2, 0.45, 1.0),
    (1.0, 0.85, 0.1),
    (0.85, 0.2, 1.0),
    (0.1, 0.95, 0.9),
]


@dataclass
class SimConfig:
    dt: float = 0.01
    v_max: float = 0.5
    tau: float = 0.3
    takeoff_altitude: float = 1.0
    bounds_lo: tuple[float, float, float] = (-2.5, -2.5, 0.0)
    bounds_hi: tuple[float, float, float] = (2.5, 2.5, 3.0)
    n_drones: int = 1
    formation_spacing: float = 0.5
    formation_offsets: tuple[tuple[float, float, float], ...] | None = None
    seed: int = 0
    arrival_based: bool = False  # advance waypoints on arrival instead of by time
    arrival_tolerance: float = 0.05
    goal_tolerance: float = 0.05

    def __post_init__(self):
        if self.dt <= 0 or self.tau <= 0:
            raise ConfigError("dt and tau must be positive")
        if self.n_drones < 1:
            raise ConfigError("need at least one drone")
        lo, hi = np.asarray(self.bounds_lo), np.asarray(self.bounds_hi)
        if not np.all(lo < hi):
            raise ConfigError("world bounds must satisfy lo < hi")

    def offsets(self) -> np.ndarray:
        """Per-drone formation offsets, default line abreast along x."""
        if self.formation_offsets is not None:
            off = np.asarray(self.formation_offsets, dtype=float)
            if off.shape != (self.n_drones, 3):
                raise ConfigError("formation_offsets must give one 3-vector per drone")
            return off
        center = (self.n_drones - 1) / 2.0
        return np.array([[(i - center) * self.formation_spacing, 0.0, 0.0] for i in range(self.n_drones)])


@dataclass
class DroneState:
    id: int
    position: np.ndarray
    velocity: np.ndarray
    led: tuple[float, float, float]
    led_on: bool = False
    status: str = GROUNDED
    target: np.ndarray | None = None
    waypoint_index: int = -1


@dataclass(frozen=True)
class SimEvent:
    kind: str  # WaypointDispatched | GoalReached | SeparationViolation | Landed | Penetration
    t: float
    drone: int | None = None
    pair: tuple[int, int] | None = None
    index: int | None = None
    distance: float | None = None

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "t": self.t}
        for k in ("drone", "pair", "index", "distance"):
            v = getattr(self, k)
            if v is not None:
                d[k] = list(v) if isinstance(v, tuple) else v
        return d


@dataclass
class Trace:
    times: np.ndarray  # (T,)
    positions: np.ndarray  # (T, n, 3)
    velocities: np.ndarray  # (T, n, 3)
    led: np.ndarray  # (T, n, 3), zeros while the LED is off

    @property
    def n_drones(self) -> int:
        return self.positions.shape[1]

    def checksum(self) -> str:
        h = hashlib.sha256()
        for arr in (self.times, self.positions, self.velocities, self.led):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()


class World:
    """Single-writer simulation state; step() is the only mutator."""

    def __init__(self, config: SimConfig, params: FieldParams | None = None,
                 obstacles: list[Obstacle] | None = None):
        self.config = config
        self.params = params or FieldParams()
        self.obstacles = list(obstacles or [])
        self.rng = np.random.default_rng(config.seed)
        self.t = 0.0
        self.events: list[SimEvent] = []
        self.schedule: list[TimedWaypoint] | None = None
        self.paint_start: float | None = None
        offs = config.offsets()
        self.drones = [
            DroneState(
                id=i,
                position=np.array([offs[i][0], offs[i][1], 0.0]),
                velocity=np.zeros(3),
                led=LED_PALETTE[i % len(LED_PALETTE)],
            )
            for i in range(config.n_drones)
        ]
        self._offsets = offs
        self._was_separated = True

    # -- commands -----------------------------------------------------------

    def take_off(self) -> None:
        for drone, off in zip(self.drones, self._offsets):
            if drone.status == GROUNDED:
                drone.status = AIRBORNE
                drone.target = np.array([off[0], off[1], self.config.takeoff_altitude])

    def land(self) -> None:
        self.schedule = None
        self.paint_start = None
        for drone in self.drones:
            if drone.status == AIRBORNE:
                drone.status = LANDING
                drone.led_on = False
                drone.target = np.array([drone.position[0], drone.position[1], 0.0])

    def start_schedule(self, schedule: list[TimedWaypoint]) -> None:
        self.schedule = list(schedule)
        self.paint_start = self.t
        for drone in self.drones:
            drone.waypoint_index = -1
            if drone.status == AIRBORNE:
                drone.led_on = True

    def stop_schedule(self) -> None:
        self.schedule = None
        self.paint_start = None
        for drone in self.drones:
            drone.led_on = False

    def snapshot(self) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
        pos = np.array([d.position for d in self.drones])
        vel = np.array([d.velocity for d in self.drones])
        led = np.array([np.asarray(d.led) * (1.0 if d.led_on else 0.0) for d in self.drones])
        return self.t, pos, vel, led


def dispatch_waypoints(world: World, schedule: list[TimedWaypoint] | None = None,
                       t: float | None = None) -> World:
    """Point every drone at the newest waypoint whose dispatch time has passed."""
    schedule = world.schedule if schedule is None else schedule
    if not schedule or world.paint_start is None:
        return world
    t = world.t if t is None else t
    elapsed = t - world.paint_start
    offsets_arr = np.array([w.dispatch_offset for w in schedule])
    cfg = world.config
    for drone, off in zip(world.drones, world._offsets):
        if drone.status != AIRBORNE:
            continue
        if cfg.arrival_based:
            idx = max(drone.waypoint_index, 0)
            target = np.asarray(schedule[idx].position) + off
            if (np.linalg.norm(drone.position - target) <= cfg.arrival_tolerance
                    and idx < len(schedule) - 1):
                idx += 1
        else:
            idx = int(np.searchsorted(offsets_arr, elapsed, side="right")) - 1
            idx = max(idx, 0)
        if idx != drone.waypoint_index:
            drone.waypoint_index = idx
            world.events.append(SimEvent("WaypointDispatched", t=t, drone=drone.id, index=idx))
        drone.target = np.asarray(schedule[idx].position) + off
    return world


def step(world: World, dt: float | None = None) -> World:
    """Advance the simulation one fixed timestep."""
    cfg = world.config
    dt = cfg.dt if dt is None else dt
    if dt <= 0:
        raise ConfigError("dt must be positive")
    params = world.params
    positions = [d.position.copy() for d in world.drones]

    for i, drone in enumerate(world.drones):
        if drone.status == GROUNDED:
            continue
        target = drone.target if drone.target is not None else drone.position
        pos = drone.position
        sources = []
        for obs in world.obstacles:
            surf, penetrated = nearest_obstacle_point(pos, obs)
            if penetrated:
                world.events.append(SimEvent("Penetration", t=world.t, drone=drone.id))
            sources.append(surf)
        for j, other in enumerate(positions):
            if j == i:
                continue
            if np.array_equal(other, pos):
                # coincident drones: deterministic jitter so the field is defined
                pos = pos + world.rng.normal(0.0, 1e-4, size=3)
                drone.position = pos
            sources.append(other)
        commanded = total_force(pos, target, sources, params)
        drone.velocity = drone.velocity + (commanded - drone.velocity) * min(1.0, dt / cfg.tau)
        speed = float(np.linalg.norm(drone.velocity))
        if speed > cfg.v_max:
            drone.velocity *= cfg.v_max / speed
        drone.position = np.clip(
            drone.position + drone.velocity * dt, cfg.bounds_lo, cfg.bounds_hi
        )
        if drone.status == LANDING and drone.position[2] <= 0.02:
            drone.position[2] = 0.0
            drone.velocity[:] = 0.0
            drone.status = GROUNDED
            world.events.append(SimEvent("Landed", t=world.t + dt, drone=drone.id))

    world.t += dt

    if len(world.drones) >= 2:
        pos = np.array([d.position for d in world.drones])
        dmin, pair = _min_pairwise(pos)
        if dmin < params.d_safe:
            if world._was_separated:
                world.events.append(
                    SimEvent("SeparationViolation", t=world.t, pair=pair, distance=dmin)
                )
            world._was_separated = False
        else:
            world._was_separated = True
    return world


def _min_pairwise(pos: np.ndarray) -> tuple[float, tuple[int, int]]:
    n = len(pos)
    best = (np.inf, (0, 1))
    for i in range(n):
        d = np.linalg.norm(pos[i + 1 :] - pos[i], axis=1)
        if len(d):
            j = int(np.argmin(d))
            if d[j] < best[0]:
                best = (float(d[j]), (i, i + 1 + j))
    return best


def min_separation(trace: Trace) -> float:
    """Smallest pairwise drone distance over the whole trace."""
    if trace.n_drones < 2:
        raise ConfigError("min_separation needs at least two drones")
    best = np.inf
    n = trace.n_drones
    for i in range(n):
        for j in range(i + 1, n):
            d = np.linalg.norm(trace.positions[:, i] - trace.positions[:, j], axis=1)
            best = min(best, float(d.min()))
    return best


class _TraceRecorder:
    def __init__(self):
        self.times, self.pos, self.vel, self.led = [], [], [], []

    def record(self, world: World):
        t, p, v, l = world.snapshot()
        self.times.append(t)
        self.pos.append(p)
        self.vel.append(v)
        self.led.append(l)

    def build(self) -> Trace:
        return Trace(
            np.array(self.times),
            np.array(self.pos),
            np.array(self.vel),
            np.array(self.led),
        )


def _all_near(world: World, tol: float) -> bool:
    return all(
        d.target is not None and np.linalg.norm(d.position - d.target) <= tol
        for d in world.drones
        if d.status == AIRBORNE
    )


def run_episode(
    config: SimConfig,
    params: FieldParams | None = None,
    schedule: list[TimedWaypoint] | None = None,
    obstacles: list[Obstacle] | None = None,
    canvas=None,
    splat_intensity: float = 0.05,
    splat_sigma: float = 2.0,
    takeoff_timeout: float = 10.0,
    settle_timeout: float = 8.0,
    landing_timeout: float = 15.0,
) -> tuple[Trace, list[SimEvent]]:
    """Headless take-off -> paint -> land run, recording every sim step.

    When `canvas` is given, each step of an LED-on drone adds one splat,
    building the long-exposure painting as the flight happens.
    """
    world = World(config, params, obstacles)
    rec = _TraceRecorder()
    rec.record(world)

    world.take_off()
    deadline = world.t + takeoff_timeout
    while world.t < deadline and not _all_near(world, config.goal_tolerance):
        step(world)
        rec.record(world)

    if schedule:
        world.start_schedule(schedule)
        last_offset = schedule[-1].dispatch_offset
        deadline = world.t + last_offset + settle_timeout
        reached: set[int] = set()
        final_target = np.asarray(schedule[-1].position)
        while world.t < deadline:
            dispatch_waypoints(world)
            step(world)
            rec.record(world)
            if canvas is not None:
                for drone in world.drones:
                    if drone.led_on:
                        canvas.accumulate(drone.position, drone.led, splat_intensity, splat_sigma)
            elapsed = world.t - world.paint_start
            if elapsed >= last_offset:
                for drone, off in zip(world.drones, world._offsets):
                    if drone.id not in reached and np.linalg.norm(
                        drone.position - (final_target + off)
                    ) <= config.goal_tolerance:
                        reached.add(drone.id)
                        world.events.append(SimEvent("GoalReached", t=world.t, drone=drone.id))
                if len(reached) == len(world.drones):
                    break
        world.stop_schedule()

    world.land()
    deadline = world.t + landing_timeout
    while world.t < deadline and any(d.status != GROUNDED for d in world.drones):
        step(world)
        rec.record(world)

    return rec.build(), world.events


def run_point_mission(
    config: SimConfig,
    params: FieldParams | None = None,
    starts=None,
    goals=None,
    obstacles: list[Obstacle] | None = None,
    max_time: float = 30.0,
) -> tuple[Trace, list[SimEvent], World]:
    """Fly already-airborne drones from fixed starts to fixed goals."""
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    goals = np.atleast_2d(np.asarray(goals, dtype=float))
    if len(starts) != config.n_drones or len(goals) != config.n_drones:
        raise ConfigError("starts and goals must give one point per drone")
    world = World(config, params, obstacles)
    for drone, s, g in zip(world.drones, starts, goals):
        drone.position = s.copy()
        drone.status = AIRBORNE
        drone.target = g.copy()
    rec = _TraceRecorder()
    rec.record(world)
    reached: set[int] = set()
    while world.t < max_time:
        step(world)
        rec.record(world)
        for drone, g in zip(world.drones, goals):
            if drone.id not in reached and np.linalg.norm(drone.position - g) <= config.goal_tolerance:
                reached.add(drone.id)
                world.events.append(SimEvent("GoalReached", t=world.t, drone=drone.id))
        if len(reached) == len(world.drones):
            break
    return rec.build(), world.events, world


# ---------------------------------------------------------------------------
# trace / event file I/O

TRACE_HEADER = "t,drone_id,x,y,z,vx,vy,vz,led_r,led_g,led_b"


def save_trace(path, trace: Trace) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(TRACE_HEADER + "\n")
        for k, t in enumerate(trace.times):
            for i in range(trace.n_drones):
                row = [t, float(i), *trace.positions[k, i], *trace.velocities[k, i], *trace.led[k, i]]
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_trace(path) -> Trace:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != TRACE_HEADER:
            raise ConfigError(f"unrecognized trace header in {path}")
        rows = np.array(
            [[float(v) for v in line.strip().split(",")] for line in fh if line.strip()]
        )
    if rows.size == 0:
        raise ConfigError(f"empty trace file {path}")
    n = int(rows[:, 1].max()) + 1
    T = len(rows) // n
    rows = rows.reshape(T, n, 11)
    return Trace(rows[:, 0, 0], rows[:, :, 2:5], rows[:, :, 5:8], rows[:, :, 8:11])


def save_events(path, events: list[SimEvent]) -> None:
    import json

    with open(path, "w", encoding="utf-8") as fh:
        for ev in events:
            fh.write(json.dumps(ev.to_dict()) + "\n")
