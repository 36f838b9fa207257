"""Hand-landmark frames and the pixel-space measurements derived from them.

A frame is 21 landmarks in normalized image coordinates (x, y in [0, 1],
y growing downward) plus a wrist-relative depth channel z.  Landmark
indexing follows the common hand-tracking convention: 0 = wrist,
1-4 thumb, 5-8 index, 9-12 middle, 13-16 ring, 17-20 pinky, with the
fingertip last in each chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DegenerateHand, InvalidFrame

N_LANDMARKS = 21

WRIST = 0
MIDDLE_MCP = 9
INDEX_TIP = 8

# Per-finger landmark chains, wrist first, fingertip last.
FINGER_CHAINS = {
    "thumb": (0, 1, 2, 3, 4),
    "index": (0, 5, 6, 7, 8),
    "middle": (0, 9, 10, 11, 12),
    "ring": (0, 13, 14, 15, 16),
    "pinky": (0, 17, 18, 19, 20),
}


@dataclass(frozen=True)
class HandFrame:
    """One tracked hand: 21 landmarks as a (21, 3) float array + timestamp."""

    landmarks: np.ndarray
    timestamp: float = 0.0

    def __post_init__(self):
        pts = np.asarray(self.landmarks, dtype=float)
        if pts.shape == (N_LANDMARKS, 2):
            pts = np.column_stack([pts, np.zeros(N_LANDMARKS)])
        if pts.shape != (N_LANDMARKS, 3):
            raise InvalidFrame(
                f"expected {N_LANDMARKS} landmarks with 2 or 3 coords, got shape {pts.shape}"
            )
        if not np.all(np.isfinite(pts)):
            raise InvalidFrame("landmark coordinates must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "landmarks", pts)

    @classmethod
    def from_triples(cls, triples, timestamp: float = 0.0) -> "HandFrame":
        return cls(np.asarray(triples, dtype=float), timestamp)


@dataclass(frozen=True)
class DepthCalibration:
    """Pinhole constant: depth [m] * palm size [px] = k_palm."""

    k_palm: float = 60.0

    def __post_init__(self):
        if not (self.k_palm > 0):
            raise ConfigError(f"k_palm must be positive, got {self.k_palm}")

    @classmethod
    def from_reference(cls, depth_m: float, palm_px: float) -> "DepthCalibration":
        """Calibrate from one measurement of a hand at a known distance."""
        if depth_m <= 0 or palm_px <= 0:
            raise ConfigError("reference depth and palm size must be positive")
        return cls(k_palm=depth_m * palm_px)


def palm_size(frame: HandFrame, image_w: float, image_h: float) -> float:
    """Pixel distance wrist -> middle-finger base, the hand's scale proxy."""
    if image_w <= 0 or image_h <= 0:
        raise InvalidFrame("image dimensions must be positive")
    scale = np.array([image_w, image_h])
    d = (frame.landmarks[MIDDLE_MCP, :2] - frame.landmarks[WRIST, :2]) * scale
    size = float(math.hypot(d[0], d[1]))
    if size == 0.0:
        raise DegenerateHand("palm size is zero (wrist and middle base coincide)")
    return size


def palm_size_normalized(frame: HandFrame) -> float:
    """Palm size in the frame's own normalized (x, y, z) space."""
    d = frame.landmarks[MIDDLE_MCP] - frame.landmarks[WRIST]
    size = float(np.linalg.norm(d))
    if size == 0.0:
        raise DegenerateHand("palm size is zero (wrist and middle base coincide)")
    return size


def hand_position(frame: HandFrame, image_w: float, image_h: float) -> tuple[float, float]:
    """Drawing cursor: the index fingertip de-normalized to pixels."""
    if image_w <= 0 or image_h <= 0:
        raise InvalidFrame("image dimensions must be positive")
    tip = frame.landmarks[INDEX_TIP]
    return float(tip[0] * image_w), float(tip[1] * image_h)


def estimate_depth(palm_px: float, cal: DepthCalibration) -> float:
    """Camera-to-hand distance in meters from apparent palm size."""
    if palm_px <= 0:
        raise DegenerateHand(f"palm size must be positive, got {palm_px}")
    return cal.k_palm / palm_px
