import math

import numpy as np
import pytest

from swarmpaint.errors import ConfigError, DegenerateHand, InvalidFrame
from swarmpaint.gestures import (
    DepthCalibration,
    GestureClass,
    HandFrame,
    canonical_pose,
    estimate_depth,
    hand_position,
    palm_size,
)


def make_frame(**overrides):
    pts = canonical_pose(GestureClass.FIVE).copy()
    for idx, value in overrides.items():
        pts[int(idx)] = value
    return HandFrame(pts)


class TestHandFrame:
    def test_requires_21_landmarks(self):
        with pytest.raises(InvalidFrame):
            HandFrame(np.zeros((20, 3)))

    def test_rejects_nan(self):
        pts = canonical_pose(GestureClass.ONE).copy()
        pts[3, 1] = np.nan
        with pytest.raises(InvalidFrame):
            HandFrame(pts)

    def test_accepts_2d_landmarks(self):
        frame = HandFrame(np.random.default_rng(0).uniform(0.2, 0.8, (21, 2)))
        assert frame.landmarks.shape == (21, 3)
        assert np.all(frame.landmarks[:, 2] == 0.0)


class TestPalmSize:
    def test_vertical_palm(self):
        pts = np.full((21, 3), 0.5)
        pts[0] = [0.5, 0.5, 0.0]
        pts[9] = [0.5, 0.25, 0.0]
        assert palm_size(HandFrame(pts), 640, 480) == pytest.approx(120.0)

    def test_coincident_landmarks_degenerate(self):
        pts = np.full((21, 3), 0.4)
        with pytest.raises(DegenerateHand):
            palm_size(HandFrame(pts), 640, 480)

    def test_matches_bruteforce_on_pose(self):
        frame = make_frame()
        w, h = 800, 600
        dx = (frame.landmarks[9, 0] - frame.landmarks[0, 0]) * w
        dy = (frame.landmarks[9, 1] - frame.landmarks[0, 1]) * h
        assert palm_size(frame, w, h) == pytest.approx(math.hypot(dx, dy), abs=1e-12)


class TestHandPosition:
    def test_center(self):
        frame = make_frame(**{"8": [0.5, 0.5, 0.0]})
        assert hand_position(frame, 640, 480) == (320.0, 240.0)

    def test_origin(self):
        frame = make_frame(**{"8": [0.0, 0.0, 0.0]})
        assert hand_position(frame, 640, 480) == (0.0, 0.0)

    def test_matches_manual_denormalization(self):
        frame = make_frame()
        x, y = hand_position(frame, 1280, 720)
        assert x == pytest.approx(frame.landmarks[8, 0] * 1280)
        assert y == pytest.approx(frame.landmarks[8, 1] * 720)


class TestDepth:
    def test_pinhole_division(self):
        assert estimate_depth(120.0, DepthCalibration(k_palm=60.0)) == pytest.approx(0.5)

    def test_doubling_palm_halves_depth(self):
        cal = DepthCalibration(k_palm=80.0)
        assert estimate_depth(200.0, cal) == pytest.approx(estimate_depth(100.0, cal) / 2)

    def test_calibration_round_trip(self):
        cal = DepthCalibration.from_reference(depth_m=1.0, palm_px=60.0)
        assert estimate_depth(60.0, cal) == pytest.approx(1.0)

    def test_nonpositive_palm_rejected(self):
        with pytest.raises(DegenerateHand):
            estimate_depth(0.0, DepthCalibration())

    def test_bad_calibration_rejected(self):
        with pytest.raises(ConfigError):
            DepthCalibration(k_palm=-1.0)
