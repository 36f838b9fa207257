"""Synthetic drawn strokes over ground-truth shapes.

Two independent noise components model a person tracing a shape:

* wobble — smooth, low-frequency offsets (a sum of random-phase
  harmonics along the perimeter), the part of hand error no filter
  should remove;
* flicker — per-frame detector jitter, modeled as the first difference
  of white noise with a chosen marginal standard deviation, the part the
  alpha-beta stage exists to remove.

Everything is deterministic for a fixed seed.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .metrics import GroundTruthShape
from .trajectory import FlightZoneConfig, RawStroke, world_to_screen


def _perimeter_walk(poly: np.ndarray, n: int) -> np.ndarray:
    """n points tracing the closed polyline at constant speed."""
    seg = np.linalg.norm(np.diff(poly, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    s = np.linspace(0.0, cum[-1], n)
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seg) - 1)
    frac = (s - cum[idx]) / np.where(seg[idx] > 0, seg[idx], 1.0)
    return poly[idx] + frac[:, None] * (poly[idx + 1] - poly[idx])


def _wobble(n: int, amplitude: float, rng: np.random.Generator, harmonics=(3, 5, 7, 11)) -> np.ndarray:
    """Smooth 2-D offsets with the requested RMS amplitude."""
    if amplitude <= 0:
        return np.zeros((n, 2))
    u = np.linspace(0.0, 1.0, n)
    out = np.zeros((n, 2))
    for axis in range(2):
        w = np.zeros(n)
        for h in harmonics:
            w += rng.normal() * np.sin(2 * np.pi * h * u + rng.uniform(0, 2 * np.pi))
        out[:, axis] = w
    rms = np.sqrt(np.mean(out**2))
    if rms > 0:
        out *= amplitude / rms
    return out


def _flicker(n: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Frame-to-frame jitter: first difference of white noise, marginal std sigma."""
    if sigma <= 0:
        return np.zeros((n, 2))
    w = rng.normal(0.0, sigma, size=(n + 1, 2))
    return (w[1:] - w[:-1]) / np.sqrt(2.0)


def shape_path_world(
    shape: GroundTruthShape,
    duration: float = 15.0,
    fps: float = 30.0,
    wobble_m: float = 0.0,
    flicker_m: float = 0.0,
    seed: int = 0,
) -> np.ndarray:
    """Noisy trace of the shape on the world plane: rows x, y, t (m, m, s)."""
    if duration <= 0 or fps <= 0:
        raise ConfigError("duration and fps must be positive")
    n = max(int(round(duration * fps)), 2)
    rng = np.random.default_rng(seed)
    pts = _perimeter_walk(shape.polyline(), n)
    pts = pts + _wobble(n, wobble_m, rng) + _flicker(n, flicker_m, rng)
    t = np.linspace(0.0, duration, n)
    return np.column_stack([pts, t])


def shape_stroke_px(
    shape: GroundTruthShape,
    zone: FlightZoneConfig | None = None,
    duration: float = 15.0,
    fps: float = 30.0,
    wobble_px: float = 0.0,
    flicker_px: float = 2.0,
    seed: int = 0,
) -> RawStroke:
    """Noisy pixel-space drawing of the shape, as the gesture cursor sees it."""
    if duration <= 0 or fps <= 0:
        raise ConfigError("duration and fps must be positive")
    zone = zone or FlightZoneConfig()
    n = max(int(round(duration * fps)), 2)
    rng = np.random.default_rng(seed)
    plane = _perimeter_walk(shape.polyline(), n)
    world3 = np.column_stack([plane[:, 0], np.full(n, zone.world_y), plane[:, 1]])
    px = world_to_screen(world3, zone)
    px = px + _wobble(n, wobble_px, rng) + _flicker(n, flicker_px, rng)
    t = np.linspace(0.0, duration, n)
    return RawStroke(np.column_stack([px, t]))
