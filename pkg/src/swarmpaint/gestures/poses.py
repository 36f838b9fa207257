"""Canonical landmark poses for the eight command gestures.

The real training corpus behind the classifier was recorded from people;
here a parametric skeleton stands in.  A pose is built from a fixed palm
layout plus per-finger state: extended fingers run straight along their
ray, folded fingers curl back toward the palm with the fingertip pulled
out of the image plane.  The poses only need to be *distinct* in feature
space, not anatomically perfect.
"""

from __future__ import annotations

import enum
import math

import numpy as np


class GestureClass(enum.IntEnum):
    ONE = 0
    TWO = 1
    THREE = 2
    FOUR = 3
    FIVE = 4
    OKAY = 5
    ROCK = 6
    THUMBS_UP = 7


GESTURE_NAMES = [g.name for g in GestureClass]

_WRIST = np.array([0.50, 0.82])

# base position, unit direction (y up is negative: image convention),
# and the three segment lengths of each finger chain.
_FINGERS = {
    "thumb": ((0.435, 0.760), (-0.75, -0.66), (0.060, 0.050, 0.045)),
    "index": ((0.440, 0.620), (-0.12, -0.99), (0.065, 0.045, 0.035)),
    "middle": ((0.500, 0.600), (0.00, -1.00), (0.070, 0.050, 0.040)),
    "ring": ((0.560, 0.620), (0.10, -0.99), (0.065, 0.045, 0.038)),
    "pinky": ((0.620, 0.650), (0.22, -0.97), (0.050, 0.035, 0.032)),
}

# cumulative in-plane curl per joint, degrees; folded tips point back at the palm
_CURL = {
    "extended": (0.0, 0.0, 0.0),
    "half": (25.0, 70.0, 120.0),
    "folded": (70.0, 140.0, 180.0),
}
_FOLD_Z = {"extended": (0.0, 0.0, 0.0), "half": (-0.015, -0.025, -0.030), "folded": (-0.02, -0.035, -0.045)}


def _rot(v, deg):
    th = math.radians(deg)
    c, s = math.cos(th), math.sin(th)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def _finger_chain(name: str, state: str) -> np.ndarray:
    base, direction, lengths = _FINGERS[name]
    d = np.asarray(direction) / np.linalg.norm(direction)
    curls = _CURL[state]
    zs = _FOLD_Z[state]
    pts = [np.array([base[0], base[1], 0.0])]
    p = np.asarray(base, dtype=float)
    for seg_len, curl, z in zip(lengths, curls, zs):
        p = p + _rot(d, curl) * seg_len
        pts.append(np.array([p[0], p[1], z]))
    return np.array(pts)  # (4, 3): base joint + 3 moving joints


def _build_pose(thumb="folded", index="folded", middle="folded", ring="folded", pinky="folded"):
    states = {"thumb": thumb, "index": index, "middle": middle, "ring": ring, "pinky": pinky}
    pts = np.zeros((21, 3))
    pts[0] = [_WRIST[0], _WRIST[1], 0.0]
    slots = {"thumb": (1, 2, 3, 4), "index": (5, 6, 7, 8), "middle": (9, 10, 11, 12),
             "ring": (13, 14, 15, 16), "pinky": (17, 18, 19, 20)}
    for name, idx in slots.items():
        chain = _finger_chain(name, states[name])
        for k, lm in zip(idx, chain):
            pts[k] = lm
    return pts


def _okay_pose() -> np.ndarray:
    # index half-curled; thumb joints run from its base to the index tip
    pts = _build_pose(index="half", middle="extended", ring="extended", pinky="extended")
    tip = pts[8].copy()
    base = pts[1].copy()
    for k, frac in zip((2, 3, 4), (0.4, 0.75, 1.0)):
        p = base + frac * (tip - base)
        pts[k] = p + np.array([0.012 * (1 - frac), -0.008 * (1 - frac), -0.01 * frac])
    pts[4] = tip  # pinch: thumb tip meets index tip
    return pts


def _thumbs_up_pose() -> np.ndarray:
    pts = _build_pose(thumb="extended")
    # straighten the thumb upward so it clearly dominates the silhouette
    base = pts[1]
    d = np.array([-0.25, -0.97, 0.0])
    d = d / np.linalg.norm(d)
    acc = 0.0
    for k, seg in zip((2, 3, 4), (0.07, 0.06, 0.05)):
        acc += seg
        pts[k] = base + d * acc
    return pts


def canonical_pose(gesture: GestureClass) -> np.ndarray:
    """(21, 3) landmark array of the noise-free pose for one gesture."""
    g = GestureClass(gesture)
    if g is GestureClass.ONE:
        return _build_pose(index="extended")
    if g is GestureClass.TWO:
        return _build_pose(index="extended", middle="extended")
    if g is GestureClass.THREE:
        return _build_pose(index="extended", middle="extended", ring="extended")
    if g is GestureClass.FOUR:
        return _build_pose(index="extended", middle="extended", ring="extended", pinky="extended")
    if g is GestureClass.FIVE:
        return _build_pose(thumb="extended", index="extended", middle="extended",
                           ring="extended", pinky="extended")
    if g is GestureClass.OKAY:
        return _okay_pose()
    if g is GestureClass.ROCK:
        return _build_pose(index="extended", pinky="extended")
    return _thumbs_up_pose()
