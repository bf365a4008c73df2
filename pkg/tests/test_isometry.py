import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spherebounds._random import haar_orthogonal
from spherebounds.constants import polygon_side, simplex_edge
from spherebounds.geometry import is_regular_pgon, pairwise_distances
from spherebounds.isometry import (
    PeriodicIsometry,
    RotationSpectrum,
    build_block_isometry,
    canonical_simplex_rotation,
    is_prime,
    minimal_period,
    random_periodic_isometry,
    shift_exact,
    shift_from_spectrum,
)


def sampled_shift(M, probes=20000, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((probes, len(M)))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return np.linalg.norm(X @ M.T - X, axis=1).max()


class TestPrimes:
    def test_small_primes(self):
        assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


class TestRotationSpectrum:
    def test_dimension_bookkeeping(self):
        s = RotationSpectrum(n=4, p=5, fixed_dim=1, multipliers=(1, 3))
        assert s.dim == 5
        assert s.folded == (1, 2)
        assert not s.is_identity

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=3, p=5, fixed_dim=1, multipliers=(1,)),  # 1 + 2 != 4
            dict(n=3, p=5, fixed_dim=0, multipliers=(1, 5)),  # multiple of p
            dict(n=3, p=6, fixed_dim=0, multipliers=(2, 4)),  # period 3, not 6
            dict(n=3, p=1, fixed_dim=0, multipliers=(1, 1)),
        ],
    )
    def test_rejects_inconsistent(self, kwargs):
        with pytest.raises(ValueError):
            RotationSpectrum(**kwargs)

    def test_roundtrip(self):
        s = RotationSpectrum(n=5, p=7, fixed_dim=2, multipliers=(2, 6), seed=11)
        assert RotationSpectrum.from_dict(s.to_dict()) == s


class TestBlockIsometry:
    @pytest.mark.parametrize("p", [2, 3, 4, 5, 6, 7, 12])
    def test_period_and_orthogonality(self, p):
        spectrum = RotationSpectrum(n=4, p=p, fixed_dim=1, multipliers=(1, p - 1))
        iso = build_block_isometry(spectrum, haar_orthogonal(5, np.random.default_rng(p)))
        M = iso.matrix
        np.testing.assert_allclose(M.T @ M, np.eye(5), atol=1e-12)
        np.testing.assert_allclose(np.linalg.matrix_power(M, p), np.eye(5), atol=1e-10)
        assert minimal_period(M) == p

    def test_rejects_non_orthogonal_conjugator(self):
        spectrum = RotationSpectrum(n=1, p=3, fixed_dim=0, multipliers=(1,))
        with pytest.raises(ValueError):
            build_block_isometry(spectrum, 2 * np.eye(2))

    def test_serialization_roundtrip(self):
        iso = random_periodic_isometry(4, 5, 9)
        back = PeriodicIsometry.from_dict(iso.to_dict())
        np.testing.assert_array_equal(back.matrix, iso.matrix)
        assert back.spectrum == iso.spectrum


class TestShift:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 7), st.sampled_from([2, 3, 5, 7, 11, 13]), st.integers(0, 10**6))
    def test_at_least_polygon_side(self, n, p, seed):
        iso = random_periodic_isometry(n, p, seed)
        assert shift_exact(iso) >= polygon_side(p) - 1e-9
        assert shift_exact(iso) == pytest.approx(shift_from_spectrum(iso.spectrum), abs=1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_exact_beats_sampling_but_barely(self, seed):
        iso = random_periodic_isometry(3, 7, seed)
        s = sampled_shift(iso.matrix, seed=seed)
        assert s <= shift_exact(iso) + 1e-12
        assert s >= shift_exact(iso) - 0.05

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_unit_multipliers_attain_side(self, p):
        iso = random_periodic_isometry(5, p, p, unit_multipliers=True)
        assert shift_exact(iso) == pytest.approx(polygon_side(p), abs=1e-9)

    def test_identity_spectrum(self):
        assert shift_from_spectrum(RotationSpectrum(n=2, p=3, fixed_dim=3, multipliers=())) == 0.0


class TestCanonicalSimplexRotation:
    @pytest.mark.parametrize("p", [3, 5, 7, 9])
    def test_orbit_is_regular_simplex(self, p):
        iso, x = canonical_simplex_rotation(p)
        pts = [x]
        for _ in range(p - 1):
            pts.append(iso.matrix @ pts[-1])
        D = pairwise_distances(np.array(pts))
        off = D[~np.eye(p, dtype=bool)]
        np.testing.assert_allclose(off, simplex_edge(p - 2), atol=1e-12)
        np.testing.assert_allclose(iso.matrix @ pts[-1], x, atol=1e-12)

    def test_p3_orbit_is_triangle(self):
        iso, x = canonical_simplex_rotation(3)
        pts = np.array([x, iso.matrix @ x, iso.matrix @ iso.matrix @ x])
        assert is_regular_pgon(pts)

    @pytest.mark.parametrize("p", [2, 4, 1])
    def test_rejects_even_or_small(self, p):
        with pytest.raises(ValueError):
            canonical_simplex_rotation(p)


class TestMinimalPeriod:
    def test_long_period(self):
        spectrum = RotationSpectrum(n=1, p=997, fixed_dim=0, multipliers=(1,))
        assert minimal_period(build_block_isometry(spectrum).matrix) == 997

    def test_irrational_rotation_gives_none(self):
        a = math.sqrt(2)
        M = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
        assert minimal_period(M, p_max=200) is None

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError):
            minimal_period(np.diag([1.0, 2.0]))

    def test_reflection_has_period_two(self):
        assert minimal_period(np.diag([1.0, -1.0, 1.0])) == 2
