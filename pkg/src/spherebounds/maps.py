"""Periodic self-maps of S^n as batched evaluators.

Every evaluator takes an ``(m, n+1)`` array of unit vectors and returns the
images, renormalized.  Row ``i`` of the output depends only on row ``i`` of
the input, so results do not change with batch size.
"""

import numpy as np

from spherebounds._random import random_sphere_points
from spherebounds.isometry import PeriodicIsometry

MAX_CONDITION = 100.0


def _normalize_rows(Y):
    return Y / np.sqrt((Y * Y).sum(-1, keepdims=True))


def _apply(A, X):
    # elementwise product-sum instead of BLAS matmul: keeps rows bit-independent of batch size
    return (X[..., None, :] * A).sum(-1)


class PeriodicMap:
    """A self-map of S^n with a declared period.

    ``kind`` is one of ``isometry``, ``projective-conjugate``,
    ``circle-homeo``, ``antipodal`` or ``identity``; ``provenance`` holds whatever is
    needed to rebuild the map from JSON.
    """

    def __init__(self, n, p, func, kind, provenance=None):
        self.n = int(n)
        self.p = int(p)
        self._func = func
        self.kind = kind
        self.provenance = provenance or {}

    @property
    def dim(self):
        return self.n + 1

    def __call__(self, x):
        X = np.asarray(x, dtype=float)
        single = X.ndim == 1
        Y = self._func(np.atleast_2d(X))
        return Y[0] if single else Y

    def iterates(self, x, count=None):
        """h^1(x), ..., h^count(x) stacked on axis -2 (count defaults to p)."""
        count = self.p if count is None else count
        X = np.asarray(x, dtype=float)
        single = X.ndim == 1
        cur = np.atleast_2d(X)
        out = np.empty((cur.shape[0], count, cur.shape[1]))
        for i in range(count):
            cur = self._func(cur)
            out[:, i] = cur
        return out[0] if single else out

    def period_error(self, probes=1000, seed=0):
        """Max |h^p(x) - x| over seeded random probe points."""
        X = random_sphere_points(probes, self.dim, seed)
        last = self.iterates(X)[:, -1]
        return float(np.linalg.norm(last - X, axis=1).max())

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "p": self.p, **self.provenance}

    def __repr__(self):
        return f"PeriodicMap(kind={self.kind!r}, n={self.n}, p={self.p})"


def isometry_map(iso: PeriodicIsometry) -> PeriodicMap:
    A = np.array(iso.matrix, dtype=float)
    return PeriodicMap(
        iso.n, iso.p, lambda X: _normalize_rows(_apply(A, X)), "isometry",
        {"isometry": iso.to_dict()},
    )


def identity_map(n: int) -> PeriodicMap:
    """Degenerate map with declared period 1."""
    return PeriodicMap(n, 1, lambda X: X.copy(), "identity", {})


def antipodal_map(n: int) -> PeriodicMap:
    return PeriodicMap(n, 2, lambda X: -X, "antipodal", {})


def projective_conjugate(iso: PeriodicIsometry, M) -> PeriodicMap:
    """x -> normalize(M Q M^-1 x): Q conjugated by the projective map x -> Mx/|Mx|.

    Conjugation keeps the period of Q exactly; orthogonal M gives back an isometry.
    """
    M = np.asarray(M, dtype=float)
    Q = np.asarray(iso.matrix, dtype=float)
    if M.shape != Q.shape:
        raise ValueError(f"conjugating matrix has shape {M.shape}, expected {Q.shape}")
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise ValueError(f"condition number {cond:.3g} exceeds {MAX_CONDITION}")
    A = M @ Q @ np.linalg.inv(M)
    return PeriodicMap(
        iso.n, iso.p, lambda X: _normalize_rows(_apply(A, X)), "projective-conjugate",
        {"isometry": iso.to_dict(), "conjugating_matrix": M.tolist()},
    )


def random_projective_conjugate(iso: PeriodicIsometry, rng, scale=0.3) -> PeriodicMap:
    """Conjugate by M = I + scale*G for Gaussian G, redrawn until cond(M) <= 100."""
    d = iso.matrix.shape[0]
    for _ in range(100):
        M = np.eye(d) + scale * rng.standard_normal((d, d))
        if np.linalg.cond(M) <= MAX_CONDITION:
            return projective_conjugate(iso, M)
    raise ValueError("could not draw a well-conditioned conjugating matrix")


def map_from_dict(d) -> PeriodicMap:
    """Rebuild a map from ``PeriodicMap.to_dict`` output."""
    kind = d["kind"]
    if kind == "isometry":
        return isometry_map(PeriodicIsometry.from_dict(d["isometry"]))
    if kind == "projective-conjugate":
        return projective_conjugate(PeriodicIsometry.from_dict(d["isometry"]), d["conjugating_matrix"])
    if kind == "circle-homeo":
        from spherebounds.circle import CircleHomeo

        return CircleHomeo.from_dict(d["circle"]).as_map()
    if kind == "antipodal":
        return antipodal_map(d["n"])
    if kind == "identity":
        return identity_map(d["n"])
    raise ValueError(f"unknown map kind {kind!r}")
