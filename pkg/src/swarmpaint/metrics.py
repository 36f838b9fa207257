"""Tracing-error statistics for drawn or flown paths.

Errors are one-directional: each sample of the evaluated path is scored
by its exact distance to the nearest segment of the ground-truth
polyline, then summarized as max / mean / RMSE in centimeters together
with the drawing duration.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError, DegenerateAnova
from .stats import f_sf, t_quantile

M_TO_CM = 100.0

SHAPE_KINDS = ("SQUARE", "CIRCLE", "TRIANGLE")
CIRCLE_VERTICES = 720


@dataclass(frozen=True)
class GroundTruthShape:
    kind: str
    size: float  # side for SQUARE/TRIANGLE, radius for CIRCLE, meters
    center: tuple[float, float] = (0.0, 1.5)

    def __post_init__(self):
        if self.kind not in SHAPE_KINDS:
            raise ConfigError(f"shape kind must be one of {SHAPE_KINDS}, got {self.kind!r}")
        if self.size <= 0:
            raise ConfigError(f"shape size must be positive, got {self.size}")

    def polyline(self) -> np.ndarray:
        """Closed 2-D polyline (first point repeated last)."""
        cx, cy = self.center
        if self.kind == "SQUARE":
            h = self.size / 2.0
            pts = np.array(
                [[cx - h, cy - h], [cx + h, cy - h], [cx + h, cy + h], [cx - h, cy + h]]
            )
        elif self.kind == "TRIANGLE":
            # equilateral, apex up, centroid at center
            r = self.size / math.sqrt(3.0)
            angles = np.array([math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3])
            pts = np.column_stack([cx + r * np.cos(angles), cy + r * np.sin(angles)])
        else:
            th = np.linspace(0.0, 2.0 * math.pi, CIRCLE_VERTICES, endpoint=False)
            pts = np.column_stack([cx + self.size * np.cos(th), cy + self.size * np.sin(th)])
        return np.vstack([pts, pts[:1]])


@dataclass(frozen=True)
class TraceReport:
    max_error: float  # cm
    mean_error: float  # cm
    rmse: float  # cm
    duration: float  # s
    n_samples: int

    def to_dict(self) -> dict:
        return asdict(self)


def point_to_polyline(p, poly: np.ndarray) -> float:
    """Exact minimum distance from `p` to any segment of `poly`."""
    poly = np.asarray(poly, dtype=float)
    if poly.ndim != 2 or len(poly) < 2:
        raise ConfigError("polyline needs at least two points")
    p = np.asarray(p, dtype=float)
    a = poly[:-1]
    b = poly[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.zeros(len(a))
    ok = denom > 0
    t[ok] = np.einsum("ij,ij->i", p - a[ok], ab[ok]) / denom[ok]
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[:, None] * ab
    return float(np.min(np.linalg.norm(closest - p, axis=1)))


def _distances_to_polyline(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    a = poly[:-1]
    b = poly[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    safe = np.where(denom > 0, denom, 1.0)
    t = np.einsum("pj,sj->ps", points, ab)
    t -= np.einsum("sj,sj->s", a, ab)
    t /= safe
    t[:, denom == 0] = 0.0
    np.clip(t, 0.0, 1.0, out=t)
    closest = a[None, :, :] + t[:, :, None] * ab[None, :, :]
    d = np.linalg.norm(closest - points[:, None, :], axis=2)
    return d.min(axis=1)


def trace_errors(drawn: np.ndarray, truth: GroundTruthShape | np.ndarray) -> TraceReport:
    """Score a timestamped 2-D path (columns x, y, t; meters/seconds)."""
    drawn = np.atleast_2d(np.asarray(drawn, dtype=float))
    if len(drawn) < 2:
        raise ConfigError("drawn path needs at least two samples")
    if drawn.shape[1] < 2:
        raise ConfigError("drawn path rows must start with x, y")
    poly = truth.polyline() if isinstance(truth, GroundTruthShape) else np.asarray(truth, dtype=float)
    if len(poly) < 2:
        raise ConfigError("ground-truth polyline needs at least two points")
    dists = _distances_to_polyline(drawn[:, :2], poly) * M_TO_CM
    duration = float(drawn[-1, -1] - drawn[0, -1]) if drawn.shape[1] >= 3 else 0.0
    return TraceReport(
        max_error=float(dists.max()),
        mean_error=float(dists.mean()),
        rmse=float(np.sqrt(np.mean(dists**2))),
        duration=duration,
        n_samples=len(drawn),
    )


def confidence_interval(samples, level: float = 0.95) -> tuple[float, float]:
    """Student-t interval for the mean: mean +/- t_{n-1} * s / sqrt(n)."""
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise ConfigError("confidence interval needs at least two samples")
    if not 0.0 < level < 1.0:
        raise ConfigError(f"level must be in (0, 1), got {level}")
    n = len(x)
    mean = float(x.mean())
    s = float(x.std(ddof=1))
    half = t_quantile(1.0 - (1.0 - level) / 2.0, n - 1) * s / math.sqrt(n)
    return mean - half, mean + half


def anova_oneway(groups) -> tuple[float, float]:
    """One-way fixed-effects ANOVA: F statistic and upper-tail p-value."""
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if len(arrays) < 2:
        raise ConfigError("ANOVA needs at least two groups")
    if any(len(g) < 1 for g in arrays):
        raise ConfigError("every group needs at least one observation")
    k = len(arrays)
    n_total = sum(len(g) for g in arrays)
    if n_total <= k:
        raise ConfigError("ANOVA needs more observations than groups")
    grand = float(np.concatenate(arrays).mean())
    ss_between = sum(len(g) * (float(g.mean()) - grand) ** 2 for g in arrays)
    ss_within = sum(float(((g - g.mean()) ** 2).sum()) for g in arrays)
    if ss_within == 0.0 and ss_between == 0.0:
        raise DegenerateAnova("zero variance between and within groups")
    df1 = k - 1
    df2 = n_total - k
    if ss_within == 0.0:
        return math.inf, 0.0
    f = (ss_between / df1) / (ss_within / df2)
    return f, f_sf(f, df1, df2)
