"""Orbits of periodic maps, the barycentric map, and the searches built on them."""

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import least_squares, minimize

from spherebounds._random import child_seeds, random_sphere_points
from spherebounds.errors import BalancedOrbit, InvalidMapError, ResolutionError, SolverFailure
from spherebounds.geometry import pairwise_distances, sphere_point
from spherebounds.maps import PeriodicMap

PERIOD_TOL = 1e-6
WEIGHTED_BALANCE_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class Orbit:
    base: np.ndarray
    points: np.ndarray
    balance_residual: float
    diameter: float

    @property
    def p(self):
        return len(self.points)

    def to_csv(self, path):
        """Write ``i,x0,...,xn`` rows for iterates i = 1..p."""
        d = self.points.shape[1]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["i"] + [f"x{j}" for j in range(d)])
            for i, row in enumerate(self.points, start=1):
                w.writerow([i] + [repr(float(v)) for v in row])


def orbit(h: PeriodicMap, x) -> Orbit:
    x = sphere_point(x)
    pts = h.iterates(x)
    err = float(np.linalg.norm(pts[-1] - x))
    if err > PERIOD_TOL:
        raise InvalidMapError(f"h^{h.p}(x) misses x by {err:.3e}")
    return Orbit(x, pts, float(np.linalg.norm(pts.sum(0))), float(pairwise_distances(pts).max()))


def default_eps_bal(p):
    return 1e-9 * p


def barycentric(h: PeriodicMap, x, eps_bal=None) -> np.ndarray:
    """Normalized orbit sum of x; raises BalancedOrbit where the sum vanishes."""
    eps_bal = default_eps_bal(h.p) if eps_bal is None else eps_bal
    s = h.iterates(sphere_point(x)).sum(0)
    r = float(np.linalg.norm(s))
    if r <= eps_bal:
        raise BalancedOrbit(f"orbit sum has norm {r:.3e} <= {eps_bal:.3e}")
    return s / r


# --- lambda x + h(x) + ... + h^(p-1)(x) = 0 ---------------------------------


class WeightedBalance(NamedTuple):
    x: np.ndarray
    lam: float
    residual: float


def weighted_balance_residual(h: PeriodicMap, x, lam) -> float:
    x = np.asarray(x, dtype=float)
    pts = h.iterates(x, h.p - 1)
    return float(np.linalg.norm(lam * x + pts.sum(0)))


def _weighted_balance_terms(h, x):
    # s = x + h(x) + ... + h^(p-1)(x); lambda - 1 = max(0, -<s, x>)
    s = x + h.iterates(x, h.p - 1).sum(0)
    delta = max(0.0, -float(s @ x))
    return s, delta


def solve_weighted_balance(h: PeriodicMap, budget: int = 16, seed=0, tol: float = WEIGHTED_BALANCE_TOL) -> WeightedBalance:
    """Find x on the sphere and lambda >= 1 with lambda*x + sum_{i<p} h^i(x) = 0.

    Each restart runs Levenberg-Marquardt on the continuous residual
    ``s(x) + max(0, -<s(x), x>) x``; its zeros are exactly the balanced orbits
    (lambda = 1) and the points where the orbit sum points to -x
    (lambda = 1 + |sum|).
    """
    d = h.dim

    def fun(y):
        ny = np.linalg.norm(y)
        x = y / ny
        s, delta = _weighted_balance_terms(h, x)
        return np.concatenate([s + delta * x, [ny * ny - 1.0]])

    best = None
    for cs in child_seeds(seed, budget):
        y0 = random_sphere_points(1, d, cs)[0]
        try:
            res = least_squares(fun, y0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400 * d)
            y = res.x
        except (ValueError, FloatingPointError):
            continue
        if not np.all(np.isfinite(y)) or np.linalg.norm(y) == 0:
            continue
        x = y / np.linalg.norm(y)
        _, delta = _weighted_balance_terms(h, x)
        lam = 1.0 + delta
        r = weighted_balance_residual(h, x, lam)
        if best is None or r < best.residual:
            best = WeightedBalance(x, lam, r)
        if r <= tol:
            return best
    raise SolverFailure(f"no solution within {tol:g} after {budget} restarts", best)


# --- orbital diameter maximization -------------------------------------------


class DiameterEstimate(NamedTuple):
    x: np.ndarray
    theta: float
    pair: tuple


def _normalize_rows(X):
    return X / np.sqrt((X * X).sum(-1, keepdims=True))


def _orbit_dists(h, X):
    P = h.iterates(X)
    diff = P[:, :, None, :] - P[:, None, :, :]
    return np.sqrt((diff * diff).sum(-1))


def _fd_grad(f, X, idx, eps=1e-6):
    # all 2d central-difference probes go through f in one batch
    m, d = X.shape
    E = eps * np.eye(d)
    Y = np.concatenate([(X[None] + E[:, None]), (X[None] - E[:, None])]).reshape(2 * d * m, d)
    v = f(Y, np.tile(idx, 2 * d)).reshape(2, d, m)
    return ((v[0] - v[1]) / (2 * eps)).T


def _ascend(f, X, iters, step=0.2, min_step=1e-10, track=None):
    # f(Y, idx) scores rows Y that sit at positions idx of X
    X = X.copy()
    val = f(X, np.arange(len(X)))
    st = np.full(len(X), step)
    for _ in range(iters):
        act = np.flatnonzero(st > min_step)
        if act.size == 0:
            break
        Xa = X[act]
        G = _fd_grad(f, Xa, act)
        G -= (G * Xa).sum(1, keepdims=True) * Xa
        gn = np.sqrt((G * G).sum(1, keepdims=True))
        gn[gn == 0] = 1.0
        Xn = _normalize_rows(Xa + st[act, None] * G / gn)
        vn = f(Xn, act)
        if track is not None:
            track(act, Xn)
        up = vn > val[act]
        X[act[up]] = Xn[up]
        val[act[up]] = vn[up]
        st[act[up]] *= 1.5
        st[act[~up]] *= 0.5
    return X


def maximize_orbit_diameter(h: PeriodicMap, budget: int = 32, seed=0) -> DiameterEstimate:
    """Lower bound on the orbital diameter of h, with the orbit realizing it.

    2*budget seeded random starts are scored; the first ``budget`` of them are
    refined by projected gradient ascent on a log-sum-exp smoothing of the
    largest orbit chord (temperature 1e-1 down to 1e-4) and then on their
    active chord alone.  Every start uses its own derived seed and rows are
    processed independently, so the estimate never decreases with budget.
    """
    d = h.dim
    if h.p < 2:
        x = random_sphere_points(1, d, seed)[0]
        return DiameterEstimate(x, 0.0, (1, 1))
    seeds = child_seeds(seed, 2 * budget)
    X0 = np.vstack([random_sphere_points(1, d, s) for s in seeds])
    iu = np.triu_indices(h.p, 1)

    best_val = np.full(len(X0), -np.inf)
    best_X = X0.copy()

    def record(rows, X):
        D = _orbit_dists(h, X)[:, iu[0], iu[1]].max(1)
        better = D > best_val[rows]
        best_val[rows[better]] = D[better]
        best_X[rows[better]] = X[better]

    record(np.arange(len(X0)), X0)
    X = X0[:budget]

    for tau in (1e-1, 1e-2, 1e-3, 1e-4):
        def smooth(Y, idx, tau=tau):
            D = _orbit_dists(h, _normalize_rows(Y))[:, iu[0], iu[1]]
            top = D.max(1)
            return top + tau * np.log(np.exp((D - top[:, None]) / tau).sum(1))

        X = _ascend(smooth, X, 30, track=record)

    flat = _orbit_dists(h, X)[:, iu[0], iu[1]].argmax(1)
    I, J = iu[0][flat], iu[1][flat]

    def chord(Y, idx):
        P = h.iterates(_normalize_rows(Y))
        r = np.arange(len(Y))
        diff = P[r, I[idx]] - P[r, J[idx]]
        return np.sqrt((diff * diff).sum(-1))

    _ascend(chord, X, 80, step=0.05, min_step=1e-12, track=record)

    k = int(np.argmax(best_val))
    x = best_X[k]
    Dk = pairwise_distances(h.iterates(x))
    i, j = np.unravel_index(int(np.argmax(Dk)), Dk.shape)
    return DiameterEstimate(x, float(best_val[k]), (int(i) + 1, int(j) + 1))


# --- winding number of the barycentric map on S^1 ---------------------------


class CircleDegree(NamedTuple):
    degree: int
    divisible_by_p: bool
    samples: int


def _wrap(a):
    return (a + np.pi) % (2 * np.pi) - np.pi


def circle_degree(h: PeriodicMap, resolution: int = 4096, eps_bal=None, max_samples: int = 2**20) -> CircleDegree:
    """Winding number of the barycentric map of a circle map.

    Angle increments are accumulated over a uniform grid; intervals whose
    increment exceeds pi/4 are bisected until none remain or the sample cap
    is hit.
    """
    if h.n != 1:
        raise ValueError("circle_degree needs a map of S^1")
    eps_bal = default_eps_bal(h.p) if eps_bal is None else eps_bal

    def orbit_angles(t):
        X = np.column_stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)])
        S = h.iterates(X).sum(1)
        r = np.sqrt((S * S).sum(1))
        if r.min() <= eps_bal:
            i = int(np.argmin(r))
            raise BalancedOrbit(f"balanced orbit near turn {t[i]:.6f} (sum norm {r[i]:.3e})")
        return np.arctan2(S[:, 1], S[:, 0])

    t = np.arange(resolution) / resolution
    ang = orbit_angles(t)
    while True:
        inc = _wrap(np.diff(np.concatenate([ang, ang[:1]])))
        bad = np.flatnonzero(np.abs(inc) > np.pi / 4)
        if bad.size == 0 or len(t) + bad.size > max_samples:
            break
        nxt = np.concatenate([t[1:], [1.0]])
        mid = 0.5 * (t[bad] + nxt[bad])
        if np.any(mid <= t[bad]):
            break
        t_all = np.concatenate([t, mid])
        a_all = np.concatenate([ang, orbit_angles(mid)])
        order = np.argsort(t_all, kind="stable")
        t, ang = t_all[order], a_all[order]
    if np.abs(inc).max() > np.pi / 2:
        raise ResolutionError(f"angle jump {np.abs(inc).max():.3f} rad left after {len(t)} samples")
    degree = int(round(float(inc.sum()) / (2 * np.pi)))
    return CircleDegree(degree, degree % h.p == 0, len(t))


class ShiftEstimate(NamedTuple):
    x: np.ndarray
    shift: float


def maximize_shift(h: PeriodicMap, probes: int = 1000, refine: int = 8, iters: int = 20, seed=0) -> ShiftEstimate:
    """Sampled lower bound on sup |h(x) - x|: best of ``probes`` random points, top ``refine`` polished."""
    X = random_sphere_points(probes, h.dim, seed)

    def disp2(Y, idx=None):
        # squared displacement: same maximizers, and smooth where |h(x) - x| = 2
        Y = _normalize_rows(Y)
        diff = h(Y) - Y
        return (diff * diff).sum(-1)

    v = disp2(X)
    top = np.argsort(-v, kind="stable")[:refine]
    best = {"val": -np.inf, "x": None}

    def record(rows, Y):
        vals = disp2(Y)
        k = int(np.argmax(vals))
        if vals[k] > best["val"]:
            best["val"], best["x"] = float(vals[k]), Y[k].copy()

    record(None, X[top])
    _ascend(disp2, X[top], iters, step=0.05, min_step=1e-12, track=record)
    one = np.zeros(1, dtype=int)
    res = minimize(lambda y: -disp2(y[None])[0], best["x"], method="BFGS",
                   jac=lambda y: -_fd_grad(disp2, y[None], one)[0], options={"gtol": 1e-12})
    if np.all(np.isfinite(res.x)) and -res.fun > best["val"]:
        best["x"] = res.x
    x = _normalize_rows(best["x"])
    return ShiftEstimate(x, float(np.linalg.norm(h(x) - x)))
