import numpy as np
import pytest

from spherebounds._random import random_sphere_points
from spherebounds.isometry import random_periodic_isometry
from spherebounds.maps import (
    antipodal_map,
    identity_map,
    isometry_map,
    map_from_dict,
    projective_conjugate,
    random_projective_conjugate,
)


@pytest.fixture
def iso():
    return random_periodic_isometry(3, 5, 17)


class TestEvaluation:
    def test_isometry_matches_matrix(self, iso):
        X = random_sphere_points(10, 4, 0)
        np.testing.assert_allclose(isometry_map(iso)(X), X @ iso.matrix.T, atol=1e-14)

    def test_single_and_batch_agree_bitwise(self, iso):
        h = random_projective_conjugate(iso, np.random.default_rng(1))
        X = random_sphere_points(50, 4, 2)
        batch = h(X)
        for i in (0, 17, 49):
            assert np.array_equal(h(X[i]), batch[i])
            assert np.array_equal(h(X[i : i + 1])[0], batch[i])

    def test_iterates_shape_and_period(self, iso):
        h = random_projective_conjugate(iso, np.random.default_rng(3))
        X = random_sphere_points(6, 4, 4)
        P = h.iterates(X)
        assert P.shape == (6, 5, 4)
        np.testing.assert_allclose(P[:, -1], X, atol=1e-10)
        assert h.iterates(X[0], 2).shape == (2, 4)
        assert h.period_error() < 1e-10

    def test_outputs_are_unit_vectors(self, iso):
        h = random_projective_conjugate(iso, np.random.default_rng(5), scale=0.5)
        Y = h(random_sphere_points(100, 4, 6))
        np.testing.assert_allclose(np.linalg.norm(Y, axis=1), 1.0, atol=1e-14)

    def test_conjugate_is_not_an_isometry(self, iso):
        M = np.eye(4) + np.diag([0.5, 0.0, 0.0, 0.0])
        h = projective_conjugate(iso, M)
        X = random_sphere_points(40, 4, 7)
        Y = h(X)
        dx = np.linalg.norm(X[:, None] - X[None], axis=-1)
        dy = np.linalg.norm(Y[:, None] - Y[None], axis=-1)
        assert np.abs(dx - dy).max() > 1e-3

    def test_orthogonal_conjugator_gives_isometry(self, iso):
        Q = np.linalg.qr(np.random.default_rng(8).standard_normal((4, 4)))[0]
        h = projective_conjugate(iso, Q)
        X = random_sphere_points(5, 4, 9)
        np.testing.assert_allclose(h(X), X @ (Q @ iso.matrix @ Q.T).T, atol=1e-13)

    def test_simple_maps(self):
        x = np.array([0.0, 0.6, 0.8])
        np.testing.assert_array_equal(antipodal_map(2)(x), -x)
        np.testing.assert_array_equal(identity_map(2)(x), x)
        assert antipodal_map(2).p == 2 and identity_map(2).p == 1


class TestValidation:
    def test_ill_conditioned_rejected(self, iso):
        with pytest.raises(ValueError, match="condition"):
            projective_conjugate(iso, np.diag([1.0, 1.0, 1.0, 1e-3]))

    def test_shape_mismatch_rejected(self, iso):
        with pytest.raises(ValueError):
            projective_conjugate(iso, np.eye(3))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            map_from_dict({"kind": "mystery", "n": 1, "p": 2})


class TestSerialization:
    def test_roundtrip_all_kinds(self, iso):
        from spherebounds.circle import build_pl_conjugacy

        maps = [
            isometry_map(iso),
            random_projective_conjugate(iso, np.random.default_rng(10)),
            antipodal_map(3),
            identity_map(3),
            build_pl_conjugacy(2, 5, seed=3).as_map(),
        ]
        for h in maps:
            back = map_from_dict(h.to_dict())
            assert (back.kind, back.n, back.p) == (h.kind, h.n, h.p)
            X = random_sphere_points(8, h.dim, 11)
            np.testing.assert_array_equal(back(X), h(X))
