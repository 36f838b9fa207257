"""Pose-invariant feature vector for gesture classification.

225 features per frame: 15 interior finger-joint angles followed by the
210 pairwise landmark distances divided by palm size.  Both families are
invariant under translation and uniform scaling of the landmark cloud,
so the classifier never sees where the hand is or how close it stands
to the camera.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateHand, InvalidFrame
from .hands import FINGER_CHAINS, N_LANDMARKS, HandFrame, palm_size_normalized

N_ANGLES = 15
N_DISTANCES = N_LANDMARKS * (N_LANDMARKS - 1) // 2  # 210
FEATURE_SIZE = N_ANGLES + N_DISTANCES  # 225

# Lexicographic (i, j) pairs, i < j, frozen ordering of the distance block.
_PAIR_I, _PAIR_J = np.triu_indices(N_LANDMARKS, k=1)

# (prev, joint, next) triples for the 3 interior joints of each finger,
# finger-major in thumb..pinky order.
_ANGLE_TRIPLES = np.array(
    [
        (chain[k - 1], chain[k], chain[k + 1])
        for chain in FINGER_CHAINS.values()
        for k in range(1, 4)
    ]
)


def _interior_angles(pts: np.ndarray) -> np.ndarray:
    a = pts[_ANGLE_TRIPLES[:, 0]] - pts[_ANGLE_TRIPLES[:, 1]]
    b = pts[_ANGLE_TRIPLES[:, 2]] - pts[_ANGLE_TRIPLES[:, 1]]
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    denom = na * nb
    cos = np.zeros(len(_ANGLE_TRIPLES))
    ok = denom > 0
    cos[ok] = np.einsum("ij,ij->i", a[ok], b[ok]) / denom[ok]
    # zero-length bones leave cos at 0 -> angle pi/2, a neutral value
    return np.arccos(np.clip(cos, -1.0, 1.0))


def extract_features(frame: HandFrame) -> np.ndarray:
    """225-vector of joint angles and palm-normalized pairwise distances."""
    pts = frame.landmarks
    if not np.all(np.isfinite(pts)):
        raise InvalidFrame("landmark coordinates must be finite")
    palm = palm_size_normalized(frame)  # raises DegenerateHand on zero palm
    angles = _interior_angles(pts)
    dists = np.linalg.norm(pts[_PAIR_I] - pts[_PAIR_J], axis=1) / palm
    return np.concatenate([angles, dists])


def extract_features_batch(landmarks: np.ndarray) -> np.ndarray:
    """Vectorized extract_features over an (n, 21, 3) landmark array."""
    pts = np.asarray(landmarks, dtype=float)
    if pts.ndim != 3 or pts.shape[1:] != (N_LANDMARKS, 3):
        raise InvalidFrame(f"expected (n, 21, 3) landmark array, got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidFrame("landmark coordinates must be finite")
    palm = np.linalg.norm(pts[:, 9] - pts[:, 0], axis=1)
    if np.any(palm == 0.0):
        raise DegenerateHand("palm size is zero for at least one frame")

    a = pts[:, _ANGLE_TRIPLES[:, 0]] - pts[:, _ANGLE_TRIPLES[:, 1]]
    b = pts[:, _ANGLE_TRIPLES[:, 2]] - pts[:, _ANGLE_TRIPLES[:, 1]]
    na = np.linalg.norm(a, axis=2)
    nb = np.linalg.norm(b, axis=2)
    denom = na * nb
    cos = np.zeros(denom.shape)
    ok = denom > 0
    cos[ok] = np.einsum("ij,ij->i", a[ok], b[ok]) / denom[ok]
    angles = np.arccos(np.clip(cos, -1.0, 1.0))

    dists = np.linalg.norm(pts[:, _PAIR_I] - pts[:, _PAIR_J], axis=2) / palm[:, None]
    return np.concatenate([angles, dists], axis=1)
