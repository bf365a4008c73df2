import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from spherebounds.constants import jung_radius, regular_configuration, simplex_edge
from spherebounds.geometry import (
    as_point_set,
    caratheodory_reduce,
    dedup_indices,
    is_regular_pgon,
    origin_hull_distance,
    pairwise_distances,
    set_diameter,
    smallest_enclosing_cap,
    sphere_point,
)


def lp_contains_origin(X):
    """Feasibility oracle: is there w >= 0, sum w = 1, X^T w = 0?"""
    m, d = X.shape
    A = np.vstack([X.T, np.ones(m)])
    b = np.concatenate([np.zeros(d), [1.0]])
    res = linprog(np.zeros(m), A_eq=A, b_eq=b, bounds=[(0, None)] * m, method="highs")
    return res.status == 0


def rand_sphere(rng, m, d):
    Z = rng.standard_normal((m, d))
    return Z / np.linalg.norm(Z, axis=1, keepdims=True)


class TestBasics:
    def test_sphere_point_normalizes(self):
        np.testing.assert_allclose(sphere_point([3.0, 4.0]), [0.6, 0.8])

    def test_sphere_point_rejects_zero(self):
        with pytest.raises(ValueError):
            sphere_point([0.0, 0.0])

    def test_as_point_set_rejects_empty(self):
        with pytest.raises(ValueError):
            as_point_set(np.zeros((0, 3)))

    def test_pairwise_matches_loop(self):
        X = rand_sphere(np.random.default_rng(0), 7, 4)
        D = pairwise_distances(X)
        for i, j in itertools.product(range(7), repeat=2):
            assert D[i, j] == pytest.approx(math.dist(X[i], X[j]), abs=1e-14)
        assert set_diameter(X) == pytest.approx(D.max())

    def test_dedup(self):
        X = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1e-12], [0.0, 1.0]])
        reps, owner = dedup_indices(X)
        assert list(reps) == [0, 1]
        assert list(owner) == [0, 1, 0, 1]


class TestOriginHullDistance:
    def test_single_point(self):
        res = origin_hull_distance([[0.0, 0.0, 1.0]])
        assert res.distance == pytest.approx(1.0)
        assert not res.contains_origin

    def test_equilateral_triangle_contains_origin(self):
        X = regular_configuration("pgon", 3, 2)
        res = origin_hull_distance(X)
        assert res.distance < 1e-12
        np.testing.assert_allclose(res.weights, 1 / 3, atol=1e-9)

    def test_segment_distance(self):
        # segment from (1, 1) to (1, -1) sits at distance 1
        res = origin_hull_distance([[1.0, 1.0], [1.0, -1.0]])
        assert res.distance == pytest.approx(1.0, abs=1e-12)

    def test_weights_reproduce_nearest_point(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((12, 5)) + 2.0
        res = origin_hull_distance(X)
        assert res.weights.min() >= 0
        assert res.weights.sum() == pytest.approx(1.0)
        assert np.linalg.norm(res.weights @ X) == pytest.approx(res.distance, abs=1e-10)
        # optimality: every point lies beyond the supporting hyperplane
        w = res.weights @ X
        assert (X @ w).min() >= w @ w - 1e-9

    def test_duplicates_merge(self):
        X = np.array([[1.0, 0.0], [1.0, 0.0], [-1.0, 0.0]])
        res = origin_hull_distance(X)
        assert res.contains_origin
        assert res.weights[1] == 0.0

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10**6), st.integers(1, 6), st.integers(2, 4))
    def test_agrees_with_lp_oracle(self, seed, m, d):
        X = rand_sphere(np.random.default_rng(seed), m, d)
        res = origin_hull_distance(X)
        if res.distance > 1e-6 or res.distance < 1e-12:
            assert res.contains_origin == lp_contains_origin(X)


class TestCaratheodory:
    @pytest.mark.parametrize("seed", range(10))
    def test_reduces_to_dim_plus_one(self, seed):
        rng = np.random.default_rng(seed)
        X = rand_sphere(rng, 20, 3)
        sub = caratheodory_reduce(X)
        assert len(sub.indices) <= 4
        assert np.linalg.norm(sub.weights @ sub.points) < 1e-8
        assert sub.weights.min() >= 0
        assert sub.weights.sum() == pytest.approx(1.0)
        np.testing.assert_array_equal(sub.points, X[sub.indices])

    def test_from_explicit_weights(self):
        X = np.vstack([regular_configuration("pgon", 6, 2, seed=0)])
        sub = caratheodory_reduce(X, np.full(6, 1 / 6))
        assert len(sub.indices) <= 3
        assert origin_hull_distance(sub.points).contains_origin

    def test_rejects_outside_origin(self):
        with pytest.raises(ValueError):
            caratheodory_reduce([[1.0, 0.0], [0.0, 1.0]])

    def test_rejects_bad_weights(self):
        X = regular_configuration("pgon", 4, 2)
        with pytest.raises(ValueError):
            caratheodory_reduce(X, [1.0, 0.0, 0.0, 0.0])


class TestEnclosingCap:
    def test_singleton(self):
        cap = smallest_enclosing_cap([[0.0, 1.0]])
        assert cap.chordal_radius == 0.0

    def test_tetrahedron_face(self):
        X = regular_configuration("simplex", 2, 3, seed=4)
        cap = smallest_enclosing_cap(X[:3])
        assert cap.chordal_radius == pytest.approx(jung_radius(2), abs=1e-9)
        np.testing.assert_allclose(cap.center, -X[3], atol=1e-7)
        assert cap.covers(X[:3])

    def test_rejects_antipodal_pair(self):
        with pytest.raises(ValueError):
            smallest_enclosing_cap([[1.0, 0.0], [-1.0, 0.0]])

    def test_arc_on_circle(self):
        # the minimal cap of an arc is centred at its midpoint
        t = np.linspace(0.0, 1.0, 9)
        X = np.column_stack([np.cos(t), np.sin(t)])
        cap = smallest_enclosing_cap(X)
        assert cap.chordal_radius == pytest.approx(2 * math.sin(0.25), abs=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6))
    def test_never_beaten_by_sampled_centres(self, seed):
        rng = np.random.default_rng(seed)
        c = rand_sphere(rng, 1, 3)[0]
        X = rand_sphere(rng, 8, 3)
        X = X + 1.5 * c
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        cap = smallest_enclosing_cap(X)
        assert cap.covers(X)
        C = rand_sphere(rng, 4000, 3)
        sampled = np.linalg.norm(X[None] - C[:, None], axis=-1).max(1).min()
        assert cap.chordal_radius <= sampled + 1e-9

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6), st.integers(1, 5))
    def test_jung_bound_for_small_diameter(self, seed, n):
        rng = np.random.default_rng(seed)
        X = rand_sphere(rng, 10, n + 1)
        c = X[0]
        X = X + 2.0 * c
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        if set_diameter(X) < simplex_edge(n):
            assert smallest_enclosing_cap(X).chordal_radius <= jung_radius(n) + 1e-9


class TestRegularPgon:
    @pytest.mark.parametrize("p", [3, 4, 5, 9])
    def test_regular_polygon_any_order(self, p):
        X = regular_configuration("pgon", p, 4, seed=p)
        X = X[np.random.default_rng(p).permutation(p)]
        rep = is_regular_pgon(X)
        assert rep.regular and bool(rep)
        assert rep.worst_residual() < 1e-12

    def test_perturbed_polygon_rejected(self):
        X = regular_configuration("pgon", 5, 3, seed=0)
        X[0] += 1e-4 * np.array([0.3, -0.2, 0.9])
        assert not is_regular_pgon(X / np.linalg.norm(X, axis=1, keepdims=True))

    def test_star_order_is_irrelevant(self):
        X = regular_configuration("pgon", 5, 2, seed=0)
        assert is_regular_pgon(X[[0, 2, 4, 1, 3]])

    def test_duplicate_points_rejected(self):
        X = regular_configuration("pgon", 4, 2, seed=0)
        X = np.vstack([X[0], X[0], X[2]])
        assert not is_regular_pgon(X)

    def test_needs_three_points(self):
        with pytest.raises(ValueError):
            is_regular_pgon([[1.0, 0.0], [-1.0, 0.0]])

    def test_regular_simplex_is_not_planar(self):
        rep = is_regular_pgon(regular_configuration("simplex", 2, 3))
        assert not rep and rep.planarity > 0.1
