"""Periodic circle homeomorphisms as PL conjugates of rational rotations.

Angles are measured in turns (fractions of a full revolution) on the lift
R -> S^1; ``turns_to_points`` maps them to unit vectors in R^2.  The
conjugator g is piecewise linear with g(0) = 0 and g(t + 1) = g(t) + 1, so
h = g o R_{q/p} o g^-1 satisfies h^p = id up to rounding.
"""

from dataclasses import dataclass
import math
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from spherebounds._random import as_rng
from spherebounds.errors import DegenerateOrbit
from spherebounds.maps import PeriodicMap

SLOPE_MIN, SLOPE_MAX = 1.0 / 64.0, 64.0
COINCIDENCE_TOL = 1e-10
TWO_PI = 2.0 * math.pi


def turns_to_points(t) -> np.ndarray:
    a = TWO_PI * np.asarray(t, dtype=float)
    return np.stack([np.cos(a), np.sin(a)], axis=-1)


def points_to_turns(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return np.mod(np.arctan2(X[..., 1], X[..., 0]) / TWO_PI, 1.0)


def _validate_breakpoints(bp):
    bp = np.asarray(bp, dtype=float)
    if bp.ndim != 2 or bp.shape[1] != 2:
        raise ValueError("breakpoints must be a list of (u, v) pairs")
    if bp[0, 0] != 0.0 or bp[0, 1] != 0.0:
        bp = np.vstack([[0.0, 0.0], bp])
    if bp[-1, 0] != 1.0 or bp[-1, 1] != 1.0:
        bp = np.vstack([bp, [1.0, 1.0]])
    du, dv = np.diff(bp[:, 0]), np.diff(bp[:, 1])
    if np.any(du <= 0) or np.any(dv <= 0):
        raise ValueError("conjugator is not strictly increasing")
    slopes = dv / du
    if slopes.min() < SLOPE_MIN * (1 - 1e-12) or slopes.max() > SLOPE_MAX * (1 + 1e-12):
        raise ValueError(f"conjugator slopes must lie in [1/64, 64], got [{slopes.min():.4g}, {slopes.max():.4g}]")
    return bp


def random_breakpoints(rng, count: Optional[int] = None, max_log_slope: float = math.log(8.0)):
    """Random PL conjugator with 8-32 interior breakpoints.

    Raw slopes are log-uniform in [1/8, 8]; renormalizing to g(1) = 1 rescales
    them by a factor in [1/8, 8], so final slopes stay inside [1/64, 64].
    """
    rng = as_rng(rng)
    m = int(rng.integers(8, 33)) if count is None else count
    u = np.sort(rng.uniform(0.0, 1.0, size=m))
    u = np.concatenate([[0.0], u, [1.0]])
    du = np.diff(u)
    slopes = np.exp(rng.uniform(-max_log_slope, max_log_slope, size=len(du)))
    dv = slopes * du
    v = np.concatenate([[0.0], np.cumsum(dv) / dv.sum()])
    v[-1] = 1.0
    return np.column_stack([u, v])


@dataclass(frozen=True, eq=False)
class CircleHomeo:
    q: int
    p: int
    breakpoints: np.ndarray
    seed: Optional[int] = None

    def g(self, t):
        t = np.asarray(t, dtype=float)
        f = np.floor(t)
        return f + np.interp(t - f, self.breakpoints[:, 0], self.breakpoints[:, 1])

    def g_inv(self, t):
        t = np.asarray(t, dtype=float)
        f = np.floor(t)
        return f + np.interp(t - f, self.breakpoints[:, 1], self.breakpoints[:, 0])

    def lift(self, t):
        """Lift F of h to R: F(t + 1) = F(t) + 1."""
        return self.g(self.g_inv(t) + self.q / self.p)

    def lift_iterate(self, t, m: int):
        t = np.asarray(t, dtype=float)
        for _ in range(m):
            t = self.lift(t)
        return t

    def orbit_turns(self, t0):
        """Lifted iterates F^1(t0), ..., F^p(t0)."""
        out = np.empty(self.p)
        t = float(t0)
        for i in range(self.p):
            t = float(self.lift(t))
            out[i] = t
        return out

    def as_map(self) -> PeriodicMap:
        def func(X):
            return turns_to_points(self.lift(points_to_turns(X)))

        return PeriodicMap(1, self.p, func, "circle-homeo", {"circle": self.to_dict()})

    def to_dict(self):
        return {"q": self.q, "p": self.p, "breakpoints": self.breakpoints.tolist(), "seed": self.seed}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["q"]), int(d["p"]), _validate_breakpoints(d["breakpoints"]), d.get("seed"))


def build_pl_conjugacy(q: int, p: int, g_breakpoints=None, seed=None) -> CircleHomeo:
    """Conjugate of the rotation by q/p turns under a PL homeomorphism g.

    ``g_breakpoints`` is a list of (u, g(u)) pairs on [0, 1]; the endpoints
    (0, 0) and (1, 1) are added when missing.  Without breakpoints a random
    conjugator is drawn from ``seed``.
    """
    if p < 2:
        raise ValueError("period must be >= 2")
    if math.gcd(q, p) != 1:
        raise ValueError(f"gcd({q}, {p}) != 1: rotation by {q}/{p} has a smaller period")
    if g_breakpoints is None:
        bp = random_breakpoints(as_rng(seed))
    else:
        bp = g_breakpoints
    return CircleHomeo(int(q) % p, int(p), _validate_breakpoints(bp), seed)


def _circular_layout(turns):
    # sort by angle, ties by iterate index; gaps[j] runs from sorted j to sorted j+1
    t = np.mod(turns, 1.0)
    order = np.lexsort((np.arange(len(t)), t))
    s = t[order]
    gaps = TWO_PI * np.diff(np.concatenate([s, [s[0] + 1.0]]))
    return order, gaps


def arc_gaps(points) -> np.ndarray:
    """Lengths of the arcs between circularly adjacent orbit points (radians, sum 2*pi)."""
    X = np.asarray(getattr(points, "points", points), dtype=float)
    _, gaps = _circular_layout(points_to_turns(X))
    if gaps.min() < COINCIDENCE_TOL:
        raise DegenerateOrbit("orbit points coincide")
    return gaps


@dataclass(frozen=True)
class WitnessChord:
    base_turn: float
    indices: tuple
    points: np.ndarray
    chord: float
    window_sum: float
    antipodal: bool

    def to_dict(self):
        return {
            "base_turn": self.base_turn,
            "indices": list(self.indices),
            "points": self.points.tolist(),
            "chord": self.chord,
            "window_sum": self.window_sum,
            "antipodal": self.antipodal,
        }


def _as_turn(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return float(x) % 1.0
    return float(points_to_turns(x))


def window_sums(gaps, k):
    """Sum of k consecutive gaps starting at each position (cyclic)."""
    ext = np.concatenate([gaps, gaps[:k]])
    c = np.concatenate([[0.0], np.cumsum(ext)])
    return c[k : k + len(gaps)] - c[: len(gaps)]


def witness_chord(h: CircleHomeo, x) -> WitnessChord:
    """An orbit chord of length >= d_p for odd period p = 2k+1.

    Sorts the orbit of x around the circle and takes the heaviest window of k
    consecutive gaps whose length lies in [2*pi*k/p, pi]; its endpoints are
    at least d_p apart.  The windows average exactly 2*pi*k/p, so if none
    qualifies some window exceeds pi while another falls below it; the arc
    between their starting points then contains y with h^m(y) = -y, which is
    located by root finding and returned as an antipodal chord.
    """
    p = h.p
    if p % 2 == 0:
        raise ValueError("witness_chord needs an odd period; use antipodal_search")
    k = (p - 1) // 2
    t0 = _as_turn(x)
    turns = h.orbit_turns(t0)
    order, gaps = _circular_layout(turns)
    if gaps.min() < COINCIDENCE_TOL:
        raise DegenerateOrbit("orbit points coincide")
    sums = window_sums(gaps, k)
    floor = TWO_PI * k / p
    admissible = (sums >= floor - 1e-12) & (sums <= math.pi)
    iterate = np.arange(1, p + 1)
    if admissible.any():
        j = int(np.flatnonzero(admissible)[np.argmax(sums[admissible])])
        a, b = order[j], order[(j + k) % p]
        pts = turns_to_points(turns[[a, b]])
        return WitnessChord(t0, (int(iterate[a]), int(iterate[b])), pts,
                            float(np.linalg.norm(pts[0] - pts[1])), float(sums[j]), False)

    # iterate offset between window endpoints; the same for every window
    m = int((iterate[order[k % p]] - iterate[order[0]]) % p)
    lo = int(np.argmin(sums))
    hi = int(np.argmax(sums))
    t_lo, t_hi = turns[order[lo]] % 1.0, turns[order[hi]] % 1.0
    span = (t_hi - t_lo) % 1.0

    def excess(s):
        t = t_lo + s
        return (float(h.lift_iterate(t, m)) - t) % 1.0 - 0.5

    s = brentq(excess, 0.0, span, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    y = t_lo + s
    pts = turns_to_points([y, float(h.lift_iterate(y, m))])
    chord = float(np.linalg.norm(pts[0] - pts[1]))
    return WitnessChord(y % 1.0, (0, m), pts, chord, math.pi, True)


def antipodal_search(h: CircleHomeo):
    """A point x with h^k(x) = -x for even period p = 2k, and its angle in turns.

    psi(t) = (F^k(t) - t mod 1) - 1/2 changes sign between t and h^k(t)
    because the two arcs they cut off add up to a full turn.
    """
    if h.p % 2:
        raise ValueError("antipodal_search needs an even period")
    k = h.p // 2

    def psi(t):
        return (float(h.lift_iterate(t, k)) - t) % 1.0 - 0.5

    v0 = psi(0.0)
    if v0 == 0.0:
        return turns_to_points(0.0), 0.0
    span = v0 + 0.5
    if psi(span) == 0.0:
        t = span
    else:
        t = brentq(psi, 0.0, span, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    return turns_to_points(t % 1.0), t % 1.0
