"""Long-exposure light painting as additive Gaussian splats.

Every simulation step of a lit drone deposits one unnormalized Gaussian
splat into a linear-RGB accumulation buffer; the exposure is the plain
sum, so splat order never matters.  Export is binary PPM (P6) after gain,
clamp and gamma.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError
from .trajectory import FlightZoneConfig, world_to_screen

GAMMA = 2.2


class ExposureCanvas:
    """Per-pixel linear RGB accumulation over the flight-zone plane."""

    def __init__(self, width: int = 640, height: int = 480,
                 zone: FlightZoneConfig | None = None):
        if width <= 0 or height <= 0:
            raise ConfigError("canvas dimensions must be positive")
        self.width = int(width)
        self.height = int(height)
        self.zone = zone or FlightZoneConfig()
        self.buffer = np.zeros((self.height, self.width, 3), dtype=float)
        # plane -> pixel scale in case the canvas resolution differs from the zone screen
        self._sx = self.width / self.zone.screen_w
        self._sy = self.height / self.zone.screen_h

    def world_to_pixel(self, world_pos) -> tuple[float, float]:
        screen = world_to_screen(np.asarray(world_pos, dtype=float), self.zone)[0]
        return (
            (screen[0] - self.zone.screen_x0) * self._sx,
            (screen[1] - self.zone.screen_y0) * self._sy,
        )

    def accumulate(self, world_pos, led, intensity: float, sigma_px: float) -> None:
        """Add one splat of `intensity`*exp(-r^2/2s^2)*led within 3 sigma."""
        if sigma_px <= 0:
            raise ConfigError(f"sigma_px must be > 0, got {sigma_px}")
        cx, cy = self.world_to_pixel(world_pos)
        reach = 3.0 * sigma_px
        x0 = max(int(math.ceil(cx - reach)), 0)
        x1 = min(int(math.floor(cx + reach)), self.width - 1)
        y0 = max(int(math.ceil(cy - reach)), 0)
        y1 = min(int(math.floor(cy + reach)), self.height - 1)
        if x0 > x1 or y0 > y1:
            return  # fully off canvas
        xs = np.arange(x0, x1 + 1)
        ys = np.arange(y0, y1 + 1)
        r2 = (xs[None, :] - cx) ** 2 + (ys[:, None] - cy) ** 2
        splat = intensity * np.exp(-r2 / (2.0 * sigma_px * sigma_px))
        splat[r2 > reach * reach] = 0.0
        self.buffer[y0 : y1 + 1, x0 : x1 + 1] += splat[:, :, None] * np.asarray(led, dtype=float)


def render_ppm(canvas: ExposureCanvas, exposure_gain: float = 1.0) -> bytes:
    """Gain -> clamp -> gamma -> 8-bit quantize -> binary P6 bytes."""
    if exposure_gain <= 0:
        raise ConfigError(f"exposure_gain must be > 0, got {exposure_gain}")
    v = np.clip(exposure_gain * canvas.buffer, 0.0, 1.0) ** (1.0 / GAMMA)
    data = np.rint(v * 255.0).astype(np.uint8)
    header = f"P6\n{canvas.width} {canvas.height}\n255\n".encode("ascii")
    return header + data.tobytes()


def save_ppm(path, canvas: ExposureCanvas, exposure_gain: float = 1.0) -> None:
    with open(path, "wb") as fh:
        fh.write(render_ppm(canvas, exposure_gain))


def parse_ppm(data: bytes) -> tuple[int, int, np.ndarray]:
    """Minimal P6 reader for round-trip checks and the UI painting path."""
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P6":
        raise ConfigError("not a binary P6 document")
    w, h = (int(v) for v in parts[1].split())
    if parts[2] != b"255":
        raise ConfigError("only maxval 255 supported")
    pixels = np.frombuffer(parts[3][: w * h * 3], dtype=np.uint8).reshape(h, w, 3)
    return w, h, pixels
