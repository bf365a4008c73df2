import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spherebounds import ExtremalLengths, extremal_lengths, regular_configuration
from spherebounds.constants import jung_radius, polygon_diameter, polygon_side, simplex_edge


def brute_force(X):
    D = np.linalg.norm(X[:, None] - X[None], axis=-1)
    off = D[~np.eye(len(X), dtype=bool)]
    return off.min(), off.max()


class TestClosedForms:
    @pytest.mark.parametrize("p, side", [(2, 2.0), (3, math.sqrt(3)), (4, math.sqrt(2)), (6, 1.0)])
    def test_polygon_side_known_values(self, p, side):
        assert polygon_side(p) == pytest.approx(side, abs=1e-15)

    @pytest.mark.parametrize("p, diam", [(2, 2.0), (3, math.sqrt(3)), (4, 2.0), (5, 1.9021130325903071)])
    def test_polygon_diameter_known_values(self, p, diam):
        assert polygon_diameter(p) == pytest.approx(diam, abs=1e-15)

    def test_d3_is_root_three(self):
        assert extremal_lengths(3, 1).d_p == math.sqrt(3)

    @pytest.mark.parametrize("n, edge", [(1, math.sqrt(3)), (2, math.sqrt(8 / 3)), (3, math.sqrt(5 / 2))])
    def test_simplex_edge_known_values(self, n, edge):
        assert simplex_edge(n) == pytest.approx(edge, abs=1e-15)

    def test_simplex_edge_on_s0_is_antipodal(self):
        assert simplex_edge(0) == 2.0

    @given(st.integers(1, 500))
    def test_jung_and_simplex_complementary(self, n):
        assert jung_radius(n) ** 2 + simplex_edge(n) ** 2 == pytest.approx(4.0, abs=1e-12)

    @given(st.integers(1, 200))
    def test_odd_diameter_increases_to_two(self, k):
        p = 2 * k + 1
        assert polygon_diameter(p) < polygon_diameter(p + 2) < 2.0

    @given(st.integers(2, 1000))
    def test_side_at_most_diameter(self, p):
        assert polygon_side(p) <= polygon_diameter(p) + 1e-15

    def test_jung_radius_below_simplex_circumradius(self):
        # the cap radius grows toward sqrt(2) from below
        r = [jung_radius(n) for n in range(1, 50)]
        assert all(a < b < math.sqrt(2) for a, b in zip(r, r[1:]))


class TestExtremalLengths:
    def test_fields_and_dict(self):
        e = extremal_lengths(5, 3)
        assert isinstance(e, ExtremalLengths)
        d = e.to_dict()
        assert d == {"p": 5, "n": 3, "rho_p": e.rho_p, "d_p": e.d_p, "t_n": e.t_n, "delta_n": e.delta_n}
        assert d["rho_p"] == pytest.approx(1.1755705, abs=1e-7)
        assert d["t_n"] == pytest.approx(1.5811388, abs=1e-7)
        assert d["delta_n"] == pytest.approx(1.2247449, abs=1e-7)

    @pytest.mark.parametrize("p, n", [(1, 3), (0, 1), (5, 0), (2.5, 1)])
    def test_rejects_bad_arguments(self, p, n):
        with pytest.raises(ValueError):
            extremal_lengths(p, n)


class TestRegularConfiguration:
    @pytest.mark.parametrize("p", [2, 3, 5, 8, 13])
    @pytest.mark.parametrize("dim", [2, 4])
    def test_pgon_measurements(self, p, dim):
        X = regular_configuration("pgon", p, dim, seed=p * dim)
        np.testing.assert_allclose(np.linalg.norm(X, axis=1), 1.0, atol=1e-14)
        lo, hi = brute_force(X)
        assert lo == pytest.approx(polygon_side(p), abs=1e-12)
        assert hi == pytest.approx(polygon_diameter(p), abs=1e-12)
        assert np.linalg.norm(X.sum(0)) < 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3, 6])
    def test_simplex_measurements(self, n):
        X = regular_configuration("simplex", n, n + 1, seed=n)
        assert X.shape == (n + 2, n + 1)
        lo, hi = brute_force(X)
        assert lo == pytest.approx(simplex_edge(n), abs=1e-12)
        assert hi == pytest.approx(simplex_edge(n), abs=1e-12)

    def test_seed_controls_orientation(self):
        a = regular_configuration("pgon", 5, 3, seed=1)
        b = regular_configuration("pgon", 5, 3, seed=1)
        c = regular_configuration("pgon", 5, 3, seed=2)
        np.testing.assert_array_equal(a, b)
        assert not np.allclose(a, c)

    @pytest.mark.parametrize("kind, size, dim", [("pgon", 5, 1), ("simplex", 3, 3), ("hexagon", 6, 2), ("pgon", 1, 2)])
    def test_rejects_bad_arguments(self, kind, size, dim):
        with pytest.raises(ValueError):
            regular_configuration(kind, size, dim)
