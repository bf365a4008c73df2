"""Metric and convexity primitives for finite point sets on S^n.

Point sets are ``(m, n+1)`` float arrays, one point per row.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from spherebounds._random import as_rng, random_sphere_points
from spherebounds.errors import ConvergenceError

CONTAINMENT_TOL = 1e-8
GAP_TOL = 1e-10
DEDUP_TOL = 1e-10
MAX_ITER = 100_000


def sphere_point(coords) -> np.ndarray:
    """Return ``coords`` renormalized onto the unit sphere."""
    x = np.asarray(coords, dtype=float).ravel()
    nrm = np.linalg.norm(x)
    if nrm == 0.0:
        raise ValueError("the zero vector has no direction")
    return x / nrm


def as_point_set(points, normalize: bool = False) -> np.ndarray:
    X = np.atleast_2d(np.asarray(points, dtype=float))
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("a point set needs at least one point")
    if normalize:
        X = X / np.linalg.norm(X, axis=1, keepdims=True)
    return X


def pairwise_distances(X) -> np.ndarray:
    X = as_point_set(X)
    diff = X[:, None, :] - X[None, :, :]
    return np.sqrt((diff * diff).sum(-1))


def set_diameter(X) -> float:
    """Largest chordal distance between two points of the set (0 for a singleton)."""
    return float(pairwise_distances(X).max())


def dedup_indices(X, tol: float = DEDUP_TOL):
    """Indices of representatives and, for each row, the representative it maps to."""
    X = as_point_set(X)
    reps = []
    owner = np.empty(len(X), dtype=int)
    for i, x in enumerate(X):
        for r in reps:
            if np.linalg.norm(X[r] - x) <= tol:
                owner[i] = r
                break
        else:
            reps.append(i)
            owner[i] = i
    return np.array(reps), owner


# --- distance from the origin to a convex hull -------------------------------


class HullDistance(NamedTuple):
    distance: float
    weights: np.ndarray
    iterations: int

    @property
    def contains_origin(self) -> bool:
        return self.distance < CONTAINMENT_TOL


def _affine_minimizer(Y):
    # argmin ||Y^T a|| subject to sum(a) = 1; rank-deficient hulls get the min-norm solution
    if len(Y) == 1:
        return np.ones(1)
    D = (Y[1:] - Y[0]).T
    beta = np.linalg.lstsq(D, -Y[0], rcond=None)[0]
    return np.concatenate([[1.0 - beta.sum()], beta])


def _min_norm_point(X, gap_tol, max_iter):
    # Wolfe's method: support-point steps plus exact minimization over the
    # affine hull of the current corral.
    sq = (X * X).sum(1)
    S = [int(np.argmin(sq))]
    lam = np.ones(1)
    w = X[S[0]].copy()
    eps = 1e-15
    for it in range(1, max_iter + 1):
        dots = X @ w
        j = int(np.argmin(dots))
        gap = float(w @ w - dots[j])
        if gap <= gap_tol or j in S:
            return w, S, lam, it
        S.append(j)
        lam = np.append(lam, 0.0)
        while True:
            alpha = _affine_minimizer(X[S])
            if np.all(alpha > eps):
                lam = alpha
                break
            neg = alpha <= eps
            denom = lam[neg] - alpha[neg]
            ok = denom > 0
            theta = float(np.min(lam[neg][ok] / denom[ok])) if ok.any() else 0.0
            theta = min(max(theta, 0.0), 1.0)
            lam = theta * alpha + (1.0 - theta) * lam
            keep = lam > eps
            if keep.all():
                keep[int(np.argmin(lam))] = False
            S = [s for s, k in zip(S, keep) if k]
            lam = lam[keep]
            lam = lam / lam.sum()
        w = lam @ X[S]
    raise ConvergenceError(f"min-norm point did not converge in {max_iter} iterations")


def origin_hull_distance(points, gap_tol: float = GAP_TOL, max_iter: int = MAX_ITER) -> HullDistance:
    """Euclidean distance from the origin to conv(points), with a minimizing convex combination.

    Points closer than 1e-10 are merged first; their weight goes to the first
    occurrence.  A distance below 1e-8 counts as containment.
    """
    X = as_point_set(points)
    reps, _ = dedup_indices(X)
    w, S, lam, iters = _min_norm_point(X[reps], gap_tol, max_iter)
    weights = np.zeros(len(X))
    weights[reps[S]] = lam
    return HullDistance(float(np.linalg.norm(w)), weights, iters)


class CaratheodorySubset(NamedTuple):
    points: np.ndarray
    indices: np.ndarray
    weights: np.ndarray


def caratheodory_reduce(points, weights=None) -> CaratheodorySubset:
    """At most ``dim + 1`` of the points whose hull still contains the origin.

    Starts from ``weights`` (a convex combination vanishing at the origin) or
    from the min-norm witness, then zeroes coefficients along affine
    dependencies until the support is affinely independent.
    """
    X = as_point_set(points)
    if weights is None:
        res = origin_hull_distance(X)
        if not res.contains_origin:
            raise ValueError(f"origin is not in the hull (distance {res.distance:.3e})")
        weights = res.weights
    else:
        weights = np.asarray(weights, dtype=float)
        if np.any(weights < -1e-12) or abs(weights.sum() - 1.0) > 1e-9:
            raise ValueError("weights must be a convex combination")
        if np.linalg.norm(weights @ X) >= CONTAINMENT_TOL:
            raise ValueError("weights do not combine to the origin")
    idx = np.flatnonzero(weights > 1e-15)
    lam = weights[idx].copy()
    dim = X.shape[1]
    while len(idx) > dim + 1:
        A = np.vstack([X[idx].T, np.ones(len(idx))])
        mu = np.linalg.svd(A)[2][-1]
        if not (mu > 0).any():
            mu = -mu
        pos = mu > 0
        ratios = np.full(len(idx), np.inf)
        ratios[pos] = lam[pos] / mu[pos]
        drop = int(np.argmin(ratios))
        lam = lam - ratios[drop] * mu
        lam[drop] = 0.0
        keep = lam > 1e-15
        idx, lam = idx[keep], lam[keep]
        lam = np.clip(lam, 0.0, None)
        lam /= lam.sum()
    sub = X[idx]
    check = origin_hull_distance(sub)
    if check.distance >= 1e-7:
        raise ConvergenceError(f"reduced subset lost containment (distance {check.distance:.3e})")
    return CaratheodorySubset(sub, idx, lam)


# --- smallest enclosing cap --------------------------------------------------


@dataclass(frozen=True)
class CapCover:
    center: np.ndarray
    chordal_radius: float

    def covers(self, points, tol: float = 1e-9) -> bool:
        X = as_point_set(points)
        return bool(np.linalg.norm(X - self.center, axis=1).max() <= self.chordal_radius + tol)


def _cap_radius(c, X):
    return float(np.linalg.norm(X - c, axis=1).max())


def _subgradient(X, C, iters):
    # minimise max_i ||c - x_i|| on the sphere for every row of C at once;
    # the farthest point pulls each centre toward it
    rows = np.arange(len(C))
    D = np.sqrt(((C[:, None] - X[None]) ** 2).sum(-1))
    best_C, best_r = C.copy(), D.max(1)
    for t in range(1, iters + 1):
        far = X[D.argmax(1)]
        G = far - (far * C).sum(1, keepdims=True) * C
        gn = np.sqrt((G * G).sum(1, keepdims=True))
        gn[gn < 1e-15] = np.inf
        C = C + (0.5 / np.sqrt(t)) * G / gn
        C /= np.sqrt((C * C).sum(1, keepdims=True))
        D = np.sqrt(((C[:, None] - X[None]) ** 2).sum(-1))
        r = D.max(1)
        better = r < best_r
        best_C[rows[better]] = C[better]
        best_r[better] = r[better]
    k = int(np.argmin(best_r))
    return best_C[k], float(best_r[k])


def _polish_cap(X, c0):
    # maximise s subject to <c, x_i> >= s and |c| = 1
    d = X.shape[1]
    z0 = np.concatenate([c0, [float((X @ c0).min())]])
    cons = [
        {"type": "ineq", "fun": lambda z: X @ z[:d] - z[d], "jac": lambda z: np.hstack([X, -np.ones((len(X), 1))])},
        {"type": "eq", "fun": lambda z: np.array([z[:d] @ z[:d] - 1.0]), "jac": lambda z: np.concatenate([2 * z[:d], [0.0]])[None]},
    ]
    res = minimize(
        lambda z: -z[d],
        z0,
        jac=lambda z: np.concatenate([np.zeros(d), [-1.0]]),
        constraints=cons,
        method="SLSQP",
        options={"ftol": 1e-15, "maxiter": 500},
    )
    c = res.x[:d]
    nrm = np.linalg.norm(c)
    if not np.isfinite(nrm) or nrm == 0.0:
        return c0
    return c / nrm


def smallest_enclosing_cap(points, starts: int = 8, iters: int = 400, seed=0) -> CapCover:
    """Minimax cap containing the set: center and achieved chordal radius.

    Multi-start projected subgradient, then an SLSQP polish of the epigraph
    form.  The returned radius is always the true max distance from the
    returned center, so the cap covers the set exactly.
    """
    X = as_point_set(points, normalize=True)
    if len(X) == 1:
        return CapCover(X[0].copy(), 0.0)
    if set_diameter(X) >= 2.0 - 1e-9:
        raise ValueError("set contains an antipodal pair; no proper enclosing cap")
    rng = as_rng(seed)
    candidates = []
    mean = X.mean(0)
    if np.linalg.norm(mean) > 1e-12:
        candidates.append(mean / np.linalg.norm(mean))
    candidates.extend(X[: max(1, starts // 2)])
    candidates.extend(random_sphere_points(starts, X.shape[1], rng))
    best_c, best_r = _subgradient(X, np.array(candidates, dtype=float), iters)
    polished = _polish_cap(X, best_c)
    r = _cap_radius(polished, X)
    if r < best_r:
        best_c, best_r = polished, r
    return CapCover(best_c, best_r)


# --- regular polygon recognition ---------------------------------------------


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    planarity: float
    chord_spread: float
    radius_spread: float
    min_separation: float
    order: tuple

    def __bool__(self):
        return self.regular

    def worst_residual(self) -> float:
        return max(self.planarity, self.chord_spread, self.radius_spread)


def is_regular_pgon(points, tol: float = 1e-6) -> RegularityReport:
    """Decide whether the points are the vertices of a planar regular convex polygon.

    Points are ordered by angle in the best-fit plane of the centred set
    (ties broken by input index); the set is regular when it is planar,
    equidistant from its centroid, has equal consecutive chords, and no two
    points coincide.
    """
    X = as_point_set(points)
    p = len(X)
    if p < 3:
        raise ValueError("need at least 3 points")
    Z = X - X.mean(0)
    basis = np.linalg.svd(Z, full_matrices=False)[2][:2]
    coords = Z @ basis.T
    planarity = float(np.linalg.norm(Z - coords @ basis, axis=1).max())
    ang = np.arctan2(coords[:, 1], coords[:, 0])
    order = np.lexsort((np.arange(p), ang))
    ordered = X[order]
    chords = np.linalg.norm(np.roll(ordered, -1, axis=0) - ordered, axis=1)
    radii = np.linalg.norm(coords, axis=1)
    D = pairwise_distances(X)
    min_sep = float(D[np.triu_indices(p, 1)].min())
    chord_spread = float(chords.max() - chords.min())
    radius_spread = float(radii.max() - radii.min())
    regular = planarity <= tol and chord_spread <= tol and radius_spread <= tol and min_sep > tol
    return RegularityReport(bool(regular), planarity, chord_spread, radius_spread, min_sep, tuple(int(i) for i in order))
