"""From a hand-drawn pixel stroke to a time-scheduled flight trajectory.

The stages run in drawing order: smooth the raw stroke with an alpha-beta
tracker, resample the smoothed polyline at equal arc-length steps, map
screen pixels onto the vertical flight plane in meters, then assign each
waypoint a dispatch time from the inter-waypoint distance and flight
speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateStroke, EmptyStroke

DEFAULT_DT = 1.0 / 30.0  # camera cadence


@dataclass(frozen=True)
class RawStroke:
    """Ordered (x, y, t) samples of a drawn path, pixel space."""

    points: np.ndarray  # (n, 3) columns x, y, t

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if len(pts) > 1 and np.any(np.diff(pts[:, 2]) < 0):
            raise ConfigError("stroke timestamps must be non-decreasing")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @classmethod
    def empty(cls) -> "RawStroke":
        return cls(np.empty((0, 3)))

    @classmethod
    def from_xyt(cls, xs, ys, ts) -> "RawStroke":
        return cls(np.column_stack([xs, ys, ts]))

    def append(self, x: float, y: float, t: float) -> "RawStroke":
        return RawStroke(np.vstack([self.points, [x, y, t]]))


@dataclass(frozen=True)
class FilterParams:
    alpha: float = 0.7
    beta: float = 0.41
    fallback_dt: float = DEFAULT_DT

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.beta < 0.0:
            raise ConfigError(f"beta must be >= 0, got {self.beta}")
        if self.fallback_dt <= 0.0:
            raise ConfigError(f"fallback_dt must be > 0, got {self.fallback_dt}")


@dataclass(frozen=True)
class FlightZoneConfig:
    """Screen rectangle mapped affinely onto a vertical world plane."""

    screen_w: float = 640.0
    screen_h: float = 480.0
    screen_x0: float = 0.0
    screen_y0: float = 0.0
    world_x: tuple[float, float] = (-1.5, 1.5)
    world_z: tuple[float, float] = (0.5, 2.5)
    world_y: float = 0.0
    flip_y: bool = True  # screen top row maps to max altitude

    def __post_init__(self):
        if self.screen_w <= 0 or self.screen_h <= 0:
            raise ConfigError("screen rectangle must be non-degenerate")
        if self.world_x[1] <= self.world_x[0] or self.world_z[1] <= self.world_z[0]:
            raise ConfigError("world ranges must be positive")


@dataclass(frozen=True)
class TimedWaypoint:
    position: tuple[float, float, float]  # meters
    dispatch_offset: float  # seconds from trajectory start


def alpha_beta_filter(stroke: RawStroke, p: FilterParams | None = None) -> RawStroke:
    """Predictor-corrector position/velocity smoothing, timestamps preserved."""
    p = p or FilterParams()
    if len(stroke) == 0:
        raise EmptyStroke("cannot filter an empty stroke")
    pts = stroke.points
    out = np.empty_like(pts)
    est = pts[0, :2].copy()
    vel = np.zeros(2)
    out[0] = pts[0]
    for i in range(1, len(pts)):
        dt = pts[i, 2] - pts[i - 1, 2]
        if dt <= 0:
            dt = p.fallback_dt
        pred = est + vel * dt
        residual = pts[i, :2] - pred
        # (1-a)*pred + a*z realizes pred + a*residual while keeping a=1 exact
        est = (1.0 - p.alpha) * pred + p.alpha * pts[i, :2]
        vel = vel + (p.beta / dt) * residual
        out[i, :2] = est
        out[i, 2] = pts[i, 2]
    return RawStroke(out)


def resample_uniform(points: np.ndarray, spacing: float) -> np.ndarray:
    """Emit points every `spacing` of arc length plus the exact final endpoint."""
    if spacing <= 0:
        raise ConfigError(f"spacing must be > 0, got {spacing}")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise DegenerateStroke("points must be a 2-D array")
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1) if len(pts) > 1 else np.array([])
    total = float(seg.sum())
    if len(pts) < 2 or total == 0.0:
        raise DegenerateStroke("need at least two distinct points to resample")
    cum = np.concatenate([[0.0], np.cumsum(seg)])

    # strictly-interior targets; the endpoint is appended exactly afterwards
    n_steps = int(math.floor(total / spacing - 1e-9))
    targets = np.arange(n_steps + 1) * spacing
    targets = targets[targets < total * (1.0 - 1e-12)]

    idx = np.searchsorted(cum, targets, side="right") - 1
    idx = np.clip(idx, 0, len(seg) - 1)
    seg_len = seg[idx]
    frac = np.zeros_like(targets)
    ok = seg_len > 0
    frac[ok] = (targets[ok] - cum[idx[ok]]) / seg_len[ok]
    out = pts[idx] + frac[:, None] * (pts[idx + 1] - pts[idx])
    return np.vstack([out, pts[-1]])


def screen_to_world(points: np.ndarray, zone: FlightZoneConfig | None = None) -> np.ndarray:
    """Pixels -> meters on the flight plane; out-of-rect input clamps to the rect."""
    zone = zone or FlightZoneConfig()
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    px = np.clip(pts[:, 0], zone.screen_x0, zone.screen_x0 + zone.screen_w)
    py = np.clip(pts[:, 1], zone.screen_y0, zone.screen_y0 + zone.screen_h)
    u = (px - zone.screen_x0) / zone.screen_w
    v = (py - zone.screen_y0) / zone.screen_h
    wx = zone.world_x[0] + u * (zone.world_x[1] - zone.world_x[0])
    if zone.flip_y:
        wz = zone.world_z[1] - v * (zone.world_z[1] - zone.world_z[0])
    else:
        wz = zone.world_z[0] + v * (zone.world_z[1] - zone.world_z[0])
    wy = np.full_like(wx, zone.world_y)
    return np.column_stack([wx, wy, wz])


def world_to_screen(points: np.ndarray, zone: FlightZoneConfig | None = None) -> np.ndarray:
    """Inverse plane mapping, used by the exposure canvas and the UI."""
    zone = zone or FlightZoneConfig()
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    u = (pts[:, 0] - zone.world_x[0]) / (zone.world_x[1] - zone.world_x[0])
    wz = pts[:, 2] if pts.shape[1] == 3 else pts[:, 1]
    if zone.flip_y:
        v = (zone.world_z[1] - wz) / (zone.world_z[1] - zone.world_z[0])
    else:
        v = (wz - zone.world_z[0]) / (zone.world_z[1] - zone.world_z[0])
    return np.column_stack([zone.screen_x0 + u * zone.screen_w, zone.screen_y0 + v * zone.screen_h])


def schedule_waypoints(waypoints: np.ndarray, speed: float) -> list[TimedWaypoint]:
    """Dispatch offsets proportional to inter-waypoint distance over speed."""
    if speed <= 0:
        raise ConfigError(f"speed must be > 0, got {speed}")
    pts = np.atleast_2d(np.asarray(waypoints, dtype=float))
    if len(pts) == 0:
        raise ConfigError("need at least one waypoint to schedule")
    offsets = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1)) / speed])
    return [TimedWaypoint(tuple(p), float(o)) for p, o in zip(pts, offsets)]


def erase_region(stroke: RawStroke, center: tuple[float, float], radius: float) -> RawStroke:
    """Drop every point within `radius` of `center`, keeping survivor order."""
    if radius <= 0:
        raise ConfigError(f"radius must be > 0, got {radius}")
    if len(stroke) == 0:
        return stroke
    d = np.linalg.norm(stroke.points[:, :2] - np.asarray(center, dtype=float), axis=1)
    return RawStroke(stroke.points[d > radius])


def erase_region_runs(stroke: RawStroke, center: tuple[float, float], radius: float) -> list[RawStroke]:
    """Like erase_region, but split survivors at the gaps the eraser cut."""
    if radius <= 0:
        raise ConfigError(f"radius must be > 0, got {radius}")
    if len(stroke) == 0:
        return []
    d = np.linalg.norm(stroke.points[:, :2] - np.asarray(center, dtype=float), axis=1)
    keep = d > radius
    runs: list[RawStroke] = []
    start = None
    for i, k in enumerate(keep):
        if k and start is None:
            start = i
        elif not k and start is not None:
            runs.append(RawStroke(stroke.points[start:i]))
            start = None
    if start is not None:
        runs.append(RawStroke(stroke.points[start:]))
    return runs


def process(
    stroke: RawStroke,
    p: FilterParams | None = None,
    spacing: float = 10.0,
    zone: FlightZoneConfig | None = None,
    speed: float = 0.3,
) -> list[TimedWaypoint]:
    """Full pipeline: filter -> resample (pixels) -> world transform -> schedule."""
    if len(stroke) == 0:
        raise EmptyStroke("cannot process an empty stroke")
    smoothed = alpha_beta_filter(stroke, p)
    resampled = resample_uniform(smoothed.points[:, :2], spacing)
    world = screen_to_world(resampled, zone)
    return schedule_waypoints(world, speed)


# ---------------------------------------------------------------------------
# trajectory file I/O: one header line, comma-separated x,y[,z],t rows that
# round-trip floats exactly (shortest repr)

def save_trajectory(path, points: np.ndarray, header: str | None = None) -> None:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ncol = pts.shape[1]
    if ncol not in (3, 4):
        raise ConfigError("trajectory rows must be x,y,t or x,y,z,t")
    cols = "x,y,t" if ncol == 3 else "x,y,z,t"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write((header or cols) + "\n")
        for row in pts:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_trajectory(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().lower().split(",")
        if header not in (["x", "y", "t"], ["x", "y", "z", "t"]):
            raise ConfigError(f"unrecognized trajectory header in {path}")
        rows = [
            [float(v) for v in line.strip().split(",")]
            for line in fh
            if line.strip()
        ]
    if rows and any(len(r) != len(header) for r in rows):
        raise ConfigError(f"ragged trajectory rows in {path}")
    return np.array(rows, dtype=float).reshape(-1, len(header))
