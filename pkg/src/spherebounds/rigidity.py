"""Adversarial search against polygon rigidity.

A cyclic chain x_1, ..., x_p of unit vectors with every consecutive chord at
most the regular p-gon side, and lambda*x_1 + x_2 + ... + x_p = 0 for some
lambda >= 1, has to be a regular planar p-gon.  The search below tries hard
to find a chain meeting both constraints that is *not* regular.
"""

from typing import NamedTuple

import numpy as np
from scipy.optimize import least_squares, minimize

from spherebounds._random import child_seeds, as_rng, random_sphere_points
from spherebounds.constants import polygon_side, regular_configuration
from spherebounds.geometry import is_regular_pgon

FEASIBILITY_TOL = 1e-9
REGULARITY_TOL = 1e-6


def chain_residuals(X, lam):
    """(balance residual, worst chord excess over the p-gon side)."""
    X = np.asarray(X, dtype=float)
    p = len(X)
    b = lam * X[0] + X[1:].sum(0)
    chords = np.linalg.norm(np.roll(X, -1, axis=0) - X, axis=1)
    return float(np.linalg.norm(b)), float(max(0.0, (chords - polygon_side(p)).max()))


def _unpack(z, p, d):
    Y = z[:-1].reshape(p, d)
    ny = np.sqrt((Y * Y).sum(1, keepdims=True))
    s = z[-1]
    return Y / ny, ny, 1.0 + s * s, s


def _penalty(z, p, d, rho, mu):
    X, ny, lam, s = _unpack(z, p, d)
    gX = np.zeros_like(X)

    b = lam * X[0] + X[1:].sum(0)
    gX[0] += mu * 2 * lam * b
    gX[1:] += mu * 2 * b
    gs = mu * 2 * float(b @ X[0]) * 2 * s

    nxt = np.r_[1:p, 0]
    diff = X[nxt] - X
    c = np.sqrt((diff * diff).sum(1))
    u = diff / c[:, None]
    v = np.maximum(c - rho, 0.0)
    slack = rho - c
    # d/dc of  mu*v^2 - slack^2
    dc = mu * 2 * v + 2 * slack
    w = dc[:, None] * u
    gX += w[np.r_[p - 1, 0 : p - 1]] - w

    mean = X.mean(0)
    Z = X - mean
    U, S, Vt = np.linalg.svd(Z, full_matrices=False)
    Z2 = (U[:, :2] * S[:2]) @ Vt[:2]
    planar = float((S[2:] ** 2).sum())
    gX -= 2 * (Z - Z2)
    gX -= 2 * mean / p

    irregular = float((slack**2).sum()) + planar + float(mean @ mean)
    J = -irregular + mu * (float(b @ b) + float((v * v).sum()))
    gY = (gX - (gX * X).sum(1, keepdims=True) * X) / ny
    return J, np.concatenate([gY.ravel(), [gs]])


def _restore(z, p, d, rho):
    def fun(w):
        X, _, lam, _ = _unpack(w, p, d)
        b = lam * X[0] + X[1:].sum(0)
        diff = X[nxt] - X
        c = np.sqrt((diff * diff).sum(1))
        return np.concatenate([b, np.maximum(c - rho, 0.0)])

    nxt = np.r_[1:p, 0]
    return least_squares(fun, z, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=100).x


class RigidityTrial(NamedTuple):
    n: int
    p: int
    lam: float
    balance: float
    chord_excess: float
    feasible: bool
    regular: bool
    irregularity: float
    points: np.ndarray


def rigidity_trial(n, p, seed, mus=(1e3, 1e6), maxiter=200) -> RigidityTrial:
    """One penalty-method restart maximizing irregularity, then feasibility restoration."""
    d = n + 1
    rho = polygon_side(p)
    rng = as_rng(seed)
    if rng.random() < 0.5:
        X0 = regular_configuration("pgon", p, d, rng) + 0.1 * rng.standard_normal((p, d))
    else:
        X0 = random_sphere_points(p, d, rng)
    z = np.concatenate([X0.ravel(), [0.3 * rng.standard_normal()]])
    for mu in mus:
        z = minimize(_penalty, z, args=(p, d, rho, mu), jac=True, method="L-BFGS-B",
                     options={"maxiter": maxiter, "ftol": 1e-15, "gtol": 1e-12}).x
    z = _restore(z, p, d, rho)
    X, _, lam, _ = _unpack(z, p, d)
    bal, exc = chain_residuals(X, lam)
    feasible = bal <= FEASIBILITY_TOL and exc <= FEASIBILITY_TOL
    rep = is_regular_pgon(X, REGULARITY_TOL)
    return RigidityTrial(n, p, float(lam), bal, exc, feasible, rep.regular, rep.worst_residual(), X)


def rigidity_search(n, p, restarts, seed=0):
    """All trials for one (n, p); a counterexample is a feasible, non-regular trial."""
    return [rigidity_trial(n, p, s) for s in child_seeds(seed, restarts)]
