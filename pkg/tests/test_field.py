import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmpaint.errors import CoincidentSource, ConfigError
from swarmpaint.field import (
    FieldParams,
    Slab,
    Sphere,
    attractive_force,
    nearest_obstacle_point,
    repulsive_force,
    total_force,
)

P = FieldParams()


class TestAttractive:
    def test_zero_at_goal(self):
        assert np.array_equal(attractive_force([1, 2, 3], [1, 2, 3], P), np.zeros(3))

    def test_linear_regime(self):
        f = attractive_force([0, 0, 0], [1, 0, 0], FieldParams(k_att=1.0, f_max=10.0))
        assert np.allclose(f, [1, 0, 0])

    def test_cap_preserves_direction(self):
        f = attractive_force([0, 0, 0], [100, 0, 0], FieldParams(k_att=1.0, f_max=0.5))
        assert np.allclose(f, [0.5, 0, 0])

    @given(st.integers(0, 300))
    @settings(max_examples=50, deadline=None)
    def test_magnitude_never_exceeds_cap(self, seed):
        rng = np.random.default_rng(seed)
        pos, goal = rng.uniform(-10, 10, (2, 3))
        f = attractive_force(pos, goal, P)
        assert np.linalg.norm(f) <= P.f_max + 1e-12


class TestRepulsive:
    def test_outside_influence_is_zero(self):
        f = repulsive_force([0, 0, 0], [[P.d0, 0, 0], [0, 2 * P.d0, 0]], P)
        assert np.array_equal(f, np.zeros(3))

    def test_hand_computed_magnitude(self):
        p = FieldParams(k_att=1.0, f_max=0.5, k_rep=1.0, d0=1.0, d_safe=0.1)
        f = repulsive_force([0, 0, 0], [[-0.5, 0, 0]], p)
        assert np.allclose(f, [4.0, 0, 0])  # (1/.5 - 1) / .25 = 4 along +x

    def test_continuity_at_d0(self):
        eps = 1e-8
        f = repulsive_force([0, 0, 0], [[P.d0 - eps, 0, 0]], P)
        assert np.linalg.norm(f) < 1e-4

    def test_monotone_growth_toward_source(self):
        ds = np.linspace(P.d0 * 0.99, 0.01, 80)
        mags = [np.linalg.norm(repulsive_force([0, 0, 0], [[d, 0, 0]], P)) for d in ds]
        assert all(b > a for a, b in zip(mags, mags[1:]))

    def test_coincident_source_raises(self):
        with pytest.raises(CoincidentSource):
            repulsive_force([1, 1, 1], [[1, 1, 1]], P)


class TestTotal:
    def test_no_sources_equals_attractive(self):
        pos, goal = [0.2, -1, 0.5], [1, 1, 1]
        assert np.array_equal(total_force(pos, goal, [], P), attractive_force(pos, goal, P))

    def test_symmetric_sources_cancel_laterally(self):
        f = total_force([0, 0, 0], [1, 0, 0], [[0.3, 0.2, 0], [0.3, -0.2, 0]], P)
        assert abs(f[1]) < 1e-12 and abs(f[2]) < 1e-12

    def test_matches_independent_recomputation(self):
        rng = np.random.default_rng(42)
        pos, goal = rng.uniform(-1, 1, (2, 3))
        sources = rng.uniform(-1, 1, (4, 3))
        expected = attractive_force(pos, goal, P).copy()
        for s in sources:
            away = pos - s
            d = np.linalg.norm(away)
            if d < P.d0:
                expected += P.k_rep * (1 / d - 1 / P.d0) / d**2 * away / d
        assert np.allclose(total_force(pos, goal, sources, P), expected, atol=1e-12)

    @given(st.integers(0, 500))
    @settings(max_examples=50, deadline=None)
    def test_rotation_equivariance(self, seed):
        rng = np.random.default_rng(seed)
        angle = rng.uniform(0, 2 * np.pi)
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        K = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
        R = np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * (K @ K)
        pos, goal = rng.uniform(-2, 2, (2, 3))
        sources = rng.uniform(-2, 2, (3, 3))
        f = total_force(pos, goal, sources, P)
        f_rot = total_force(R @ pos, R @ goal, [R @ s for s in sources], P)
        assert np.allclose(R @ f, f_rot, atol=1e-9)

    def test_only_equilibrium_is_goal_when_unobstructed(self):
        rng = np.random.default_rng(1)
        goal = np.array([0.5, -0.2, 1.0])
        for _ in range(100):
            pos = rng.uniform(-2, 2, 3)
            f = total_force(pos, goal, [], P)
            if np.linalg.norm(pos - goal) > 1e-12:
                assert np.linalg.norm(f) > 0


class TestNearestObstaclePoint:
    def test_sphere_outside(self):
        point, penetrated = nearest_obstacle_point([2, 0, 0], Sphere((0, 0, 0), 1.0))
        assert np.allclose(point, [1, 0, 0]) and not penetrated

    def test_slab_face(self):
        slab = Slab((0, -np.inf, -np.inf), (1, np.inf, np.inf))
        point, penetrated = nearest_obstacle_point([2, 0.3, 0.7], slab)
        assert np.allclose(point, [1, 0.3, 0.7]) and not penetrated

    def test_sphere_inside_flags_penetration(self):
        point, penetrated = nearest_obstacle_point([0.5, 0, 0], Sphere((0, 0, 0), 1.0))
        assert np.allclose(point, [1, 0, 0]) and penetrated

    def test_slab_inside_projects_to_nearest_face(self):
        slab = Slab((0, 0, 0), (10, 1, 10))
        point, penetrated = nearest_obstacle_point([5, 0.9, 5], slab)
        assert np.allclose(point, [5, 1.0, 5]) and penetrated

    def test_degenerate_shapes_rejected(self):
        with pytest.raises(ConfigError):
            Sphere((0, 0, 0), 0.0)
        with pytest.raises(ConfigError):
            Slab((0, 0, 0), (0, 1, 1))


def test_params_validation():
    with pytest.raises(ConfigError):
        FieldParams(d_safe=0.7, d0=0.6)
    with pytest.raises(ConfigError):
        FieldParams(k_att=-1)
