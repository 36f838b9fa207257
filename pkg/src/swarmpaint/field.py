"""Potential-field guidance: linear attraction, inverse-square repulsion.

Forces carry velocity units and are consumed directly as commanded
velocities by the kinematic simulator.  Repulsive sources are the nearest
points on obstacle surfaces plus the other drones' positions; influence
ends at radius d0, with the magnitude continuous (zero) at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoincidentSource, ConfigError


@dataclass(frozen=True)
class FieldParams:
    k_att: float = 1.0  # 1/s
    f_max: float = 0.5  # m/s, attraction cap
    k_rep: float = 0.02  # m^3/s
    d0: float = 0.6  # m, influence radius
    d_safe: float = 0.2  # m, required separation (diagnostics)

    def __post_init__(self):
        for name in ("k_att", "f_max", "k_rep", "d0", "d_safe"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.d_safe >= self.d0:
            raise ConfigError("d_safe must be smaller than the influence radius d0")


@dataclass(frozen=True)
class Sphere:
    center: tuple[float, float, float]
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ConfigError(f"sphere radius must be > 0, got {self.radius}")


@dataclass(frozen=True)
class Slab:
    """Axis-aligned box; use +/-inf bounds for wall-like slabs."""

    lo: tuple[float, float, float]
    hi: tuple[float, float, float]

    def __post_init__(self):
        if not all(l < h for l, h in zip(self.lo, self.hi)):
            raise ConfigError("slab bounds must satisfy lo < hi on every axis")


Obstacle = Sphere | Slab


def attractive_force(pos, goal, p: FieldParams) -> np.ndarray:
    """k_att * (goal - pos), magnitude capped at f_max."""
    f = p.k_att * (np.asarray(goal, dtype=float) - np.asarray(pos, dtype=float))
    mag = float(np.linalg.norm(f))
    if mag > p.f_max:
        f *= p.f_max / mag
    return f


def repulsive_force(pos, sources, p: FieldParams) -> np.ndarray:
    """Sum of k_rep*(1/d - 1/d0)/d^2 pushes away from each in-range source."""
    pos = np.asarray(pos, dtype=float)
    total = np.zeros(3)
    for src in sources:
        away = pos - np.asarray(src, dtype=float)
        d = float(np.linalg.norm(away))
        if d == 0.0:
            raise CoincidentSource("repulsive source coincides with the queried position")
        if d >= p.d0:
            continue
        total += p.k_rep * (1.0 / d - 1.0 / p.d0) / (d * d) * (away / d)
    return total


def total_force(pos, goal, sources, p: FieldParams) -> np.ndarray:
    return attractive_force(pos, goal, p) + repulsive_force(pos, sources, p)


def nearest_obstacle_point(pos, obstacle: Obstacle) -> tuple[np.ndarray, bool]:
    """Closest surface point and whether `pos` has penetrated the obstacle."""
    pos = np.asarray(pos, dtype=float)
    if isinstance(obstacle, Sphere):
        center = np.asarray(obstacle.center, dtype=float)
        radial = pos - center
        d = float(np.linalg.norm(radial))
        if d == 0.0:
            return center + np.array([obstacle.radius, 0.0, 0.0]), True
        return center + radial * (obstacle.radius / d), d < obstacle.radius
    lo = np.asarray(obstacle.lo, dtype=float)
    hi = np.asarray(obstacle.hi, dtype=float)
    inside = bool(np.all(pos > lo) and np.all(pos < hi))
    if not inside:
        return np.clip(pos, lo, hi), False
    # inside: project onto the closest face
    gaps = np.concatenate([pos - lo, hi - pos])
    k = int(np.argmin(gaps))
    surf = pos.copy()
    if k < 3:
        surf[k] = lo[k]
    else:
        surf[k - 3] = hi[k - 3]
    return surf, True
