"""Closed-form extremal lengths and the regular configurations realizing them.

All lengths are chordal: straight-line distances in the ambient space.
"""

from dataclasses import asdict, dataclass
import math

import numpy as np

from spherebounds._random import as_rng, haar_orthogonal


def polygon_side(p: int) -> float:
    """Side of the regular p-gon inscribed in the unit circle."""
    return 2.0 * math.sin(math.pi / p)


def polygon_diameter(p: int) -> float:
    """Diameter of the regular p-gon inscribed in the unit circle."""
    if p % 2 == 0:
        return 2.0
    k = (p - 1) // 2
    return 2.0 * math.sin(k * math.pi / p)


def simplex_edge(n: int) -> float:
    """Edge of the regular (n+1)-simplex inscribed in S^n.

    ``n = 0`` gives 2: the 1-simplex on S^0 is an antipodal pair.
    """
    return math.sqrt(2.0 * (n + 2) / (n + 1))


def jung_radius(n: int) -> float:
    """Chordal radius of the cap complementary to one of radius ``simplex_edge(n)``."""
    return math.sqrt(2.0 * n / (n + 1))


@dataclass(frozen=True)
class ExtremalLengths:
    p: int
    n: int
    rho_p: float
    d_p: float
    t_n: float
    delta_n: float

    def to_dict(self):
        return asdict(self)


def extremal_lengths(p: int, n: int) -> ExtremalLengths:
    if int(p) != p or p < 2:
        raise ValueError(f"period must be an integer >= 2, got {p!r}")
    if int(n) != n or n < 1:
        raise ValueError(f"sphere dimension must be an integer >= 1, got {n!r}")
    p, n = int(p), int(n)
    return ExtremalLengths(
        p=p,
        n=n,
        rho_p=polygon_side(p),
        d_p=polygon_diameter(p),
        t_n=simplex_edge(n),
        delta_n=jung_radius(n),
    )


def _canonical_pgon(p):
    theta = 2.0 * np.pi * np.arange(p) / p
    return np.column_stack([np.cos(theta), np.sin(theta)])


def _canonical_simplex(n):
    # n+2 vertices in R^(n+1): centred standard basis of R^(n+2), written in an
    # orthonormal basis of the hyperplane orthogonal to (1, ..., 1).
    m = n + 2
    centred = np.eye(m) - 1.0 / m
    basis = np.linalg.svd(centred)[2][: n + 1]
    pts = centred @ basis.T
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def regular_configuration(kind: str, size: int, embedding_dim: int, seed=0) -> np.ndarray:
    """Vertices of a regular p-gon (``size = p``) or a regular simplex on S^size.

    The canonical configuration is padded to ``embedding_dim`` coordinates and
    rotated by a Haar-random orthogonal matrix drawn from ``seed``.  Rows are
    unit vectors.
    """
    if kind == "pgon":
        if size < 2:
            raise ValueError("a polygon needs at least 2 vertices")
        pts = _canonical_pgon(size)
    elif kind == "simplex":
        if size < 1:
            raise ValueError("simplex dimension must be >= 1")
        pts = _canonical_simplex(size)
    else:
        raise ValueError(f"unknown configuration kind {kind!r}")
    need = pts.shape[1]
    if embedding_dim < need:
        raise ValueError(f"{kind} of size {size} needs embedding dimension >= {need}, got {embedding_dim}")
    padded = np.zeros((pts.shape[0], embedding_dim))
    padded[:, :need] = pts
    rot = haar_orthogonal(embedding_dim, as_rng(seed))
    return padded @ rot.T
