"""Seeded verification sweeps, one per bound, and the conjecture scan.

Every check returns a :class:`VerificationReport`.  Reports carry witnesses:
small JSON objects holding enough data to rebuild the extremal object and
recompute its metric, so a stored report can be re-verified later.
"""

from dataclasses import dataclass, field
import json
import math
import time

import numpy as np

from spherebounds._random import child_seeds, random_sphere_points
from spherebounds.circle import (
    CircleHomeo,
    antipodal_search,
    build_pl_conjugacy,
    turns_to_points,
    witness_chord,
)
from spherebounds.constants import (
    extremal_lengths,
    jung_radius,
    polygon_diameter,
    polygon_side,
    regular_configuration,
    simplex_edge,
)
from spherebounds.errors import BalancedOrbit, ResolutionError, SolverFailure
from spherebounds.geometry import (
    caratheodory_reduce,
    is_regular_pgon,
    origin_hull_distance,
    pairwise_distances,
    set_diameter,
    smallest_enclosing_cap,
)
from spherebounds.isometry import is_prime, random_periodic_isometry, shift_exact
from spherebounds.maps import map_from_dict, random_projective_conjugate
from spherebounds.orbits import (
    circle_degree,
    weighted_balance_residual,
    maximize_orbit_diameter,
    maximize_shift,
    orbit,
    solve_weighted_balance,
)
from spherebounds.rigidity import REGULARITY_TOL, chain_residuals, rigidity_search

SCHEMA = 1
CHECK_IDS = ("T1.1", "T1.2", "T1.3", "T1.4", "L2.2", "L2.4", "L2.6", "L2.7", "C3.1", "conjecture", "question")
DEFAULT_TOLERANCES = {"closed": 1e-9, "optimizer": 1e-6, "weighted_balance": 1e-7, "antipodal": 1e-10, "witness": 1e-9}
MAX_WITNESSES = 5


def _plain(obj):
    """Convert numpy scalars/arrays inside ``obj`` to JSON-native types."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


@dataclass
class CheckConfig:
    check_id: str
    n: int = 1
    p: int = 2
    samples: int = 20
    budget: int = 32
    seed: int = 0
    tolerances: dict = field(default_factory=dict)

    def tol(self, name):
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def validate(self):
        if self.check_id not in CHECK_IDS:
            raise ValueError(f"unknown check id {self.check_id!r}; expected one of {', '.join(CHECK_IDS)}")
        if self.samples < 1 or self.budget < 1:
            raise ValueError("samples and budget must be positive")
        if self.n < 1:
            raise ValueError("sphere dimension must be >= 1")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ValueError(f"unknown tolerance names {sorted(unknown)}")
        cid, n, p = self.check_id, self.n, self.p
        if cid != "L2.7" and p < 2:
            raise ValueError("period must be >= 2")
        if cid in ("T1.1", "C3.1", "L2.2", "conjecture") and not is_prime(p):
            raise ValueError(f"{cid} needs a prime period, got {p}")
        if cid in ("T1.4", "L2.2") and n != 1:
            raise ValueError(f"{cid} runs on S^1 only; use n=1")
        if cid == "T1.3" and p != 3:
            raise ValueError("T1.3 runs with p=3 only")
        if cid == "question" and (n, p) != (3, 5):
            raise ValueError("the Question statistic is defined for n=3, p=5")
        if cid == "L2.6" and p < 3:
            raise ValueError("L2.6 needs p >= 3")
        return self

    def params(self):
        return {"n": self.n, "p": self.p, "samples": self.samples, "budget": self.budget,
                "tolerances": {k: self.tol(k) for k in DEFAULT_TOLERANCES}}

    @classmethod
    def from_report(cls, d):
        prm = d["params"]
        return cls(d["check_id"], prm["n"], prm["p"], prm["samples"], prm["budget"], d["seed"],
                   dict(prm.get("tolerances", {})))


@dataclass
class VerificationReport:
    check_id: str
    params: dict
    seed: int
    passed: bool
    min_margin: float
    witnesses: list
    per_sample_stats: list
    runtime_ms: float
    summary: dict = field(default_factory=dict)

    def to_dict(self):
        return _plain({
            "schema": SCHEMA,
            "check_id": self.check_id,
            "params": self.params,
            "seed": self.seed,
            "pass": self.passed,
            "min_margin": self.min_margin,
            "summary": self.summary,
            "witnesses": self.witnesses,
            "per_sample_stats": self.per_sample_stats,
            "runtime_ms": self.runtime_ms,
        })

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(d["check_id"], d["params"], d["seed"], d["pass"], d["min_margin"], d["witnesses"],
                   d["per_sample_stats"], d["runtime_ms"], d.get("summary", {}))


class _Tally:
    """Accumulates margins against tolerances; pass iff every margin >= -tol."""

    def __init__(self):
        self.min_margin = math.inf
        self.failures = 0

    def add(self, margin, tol):
        margin = float(margin)
        self.min_margin = min(self.min_margin, margin)
        ok = margin >= -tol
        self.failures += not ok
        return ok

    def fail(self):
        self.failures += 1

    @property
    def passed(self):
        return self.failures == 0


def _keep_worst(witnesses, w, key="margin"):
    witnesses.append(w)
    witnesses.sort(key=lambda v: v[key])
    del witnesses[MAX_WITNESSES:]


def _sample_map(n, p, seed, index, conjugates=True):
    rng = np.random.default_rng(seed)
    iso = random_periodic_isometry(n, p, rng)
    if conjugates and index % 2 == 1:
        return random_projective_conjugate(iso, rng)
    return iso.as_map()


def _random_coprime(p, rng):
    while True:
        q = int(rng.integers(1, p))
        if math.gcd(q, p) == 1:
            return q


def _triangle_angles(P):
    out = []
    for i in range(3):
        a, b, c = P[i], P[(i + 1) % 3], P[(i + 2) % 3]
        u, v = b - a, c - a
        cosang = float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))
        out.append(math.acos(max(-1.0, min(1.0, cosang))))
    return out


def simplex_volume(P) -> float:
    """Volume of the simplex spanned by the rows of P (k+1 points in R^k)."""
    P = np.asarray(P, dtype=float)
    k = P.shape[0] - 1
    if P.shape[1] != k:
        return 0.0
    return abs(float(np.linalg.det(P[1:] - P[0]))) / math.factorial(k)


# --- individual checks -------------------------------------------------------


def _check_t11(cfg, seeds, tally, witnesses, stats):
    rho = polygon_side(cfg.p)
    tc, to = cfg.tol("closed"), cfg.tol("optimizer")
    for i, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        unit = i % 4 == 0
        iso = random_periodic_isometry(cfg.n, cfg.p, rng, unit_multipliers=unit)
        shift = shift_exact(iso)
        st = {"index": i, "multipliers": list(iso.spectrum.multipliers), "fixed_dim": iso.spectrum.fixed_dim,
              "shift": shift, "margin": shift - rho, "ok": tally.add(shift - rho, tc)}
        mdict = iso.as_map().to_dict()
        _keep_worst(witnesses, {"type": "shift", "map": mdict, "shift": shift, "margin": shift - rho})
        if unit:
            st["equality_error"] = abs(shift - rho)
            st["ok"] &= tally.add(-abs(shift - rho), tc)
            # first vector of the first rotation block, pushed through the conjugator
            x = iso.conjugator[:, iso.spectrum.fixed_dim]
            orb = orbit(iso.as_map(), x)
            if cfg.p >= 3:
                rep = is_regular_pgon(orb.points, cfg.tol("optimizer"))
                regular, resid = rep.regular, rep.worst_residual()
            else:
                resid = float(np.linalg.norm(orb.points[0] + orb.points[1]))
                regular = resid <= tc
            st["regular_orbit"] = regular
            if not regular:
                tally.fail()
                st["ok"] = False
            if sum(w["type"] == "regular_orbit" for w in witnesses) < 2 or not regular:
                witnesses.append({"type": "regular_orbit", "map": mdict, "x": x, "residual": resid,
                                  "regular": regular, "margin": -resid})
        if i % 4 == 1:
            h = random_projective_conjugate(iso, rng)
            est = maximize_shift(h, seed=int(rng.integers(2**32)))
            st["conjugate_shift"] = est.shift
            st["ok"] &= tally.add(est.shift - rho, to)
            _keep_worst(witnesses, {"type": "displacement", "map": h.to_dict(), "x": est.x,
                                    "displacement": est.shift, "margin": est.shift - rho})
        stats.append(st)
    return {"rho_p": rho}


def _check_t12(cfg, seeds, tally, witnesses, stats):
    t_n = simplex_edge(cfg.n)
    t_prev = simplex_edge(cfg.n - 1)
    report_prev = cfg.n not in (1, 3, 7)
    to = cfg.tol("optimizer")
    prev_margins = []
    for i, s in enumerate(seeds):
        h = _sample_map(cfg.n, cfg.p, s, i)
        est = maximize_orbit_diameter(h, cfg.budget, seed=s)
        st = {"index": i, "kind": h.kind, "theta": est.theta, "margin": est.theta - t_n,
              "ok": tally.add(est.theta - t_n, to)}
        if report_prev:
            st["margin_t_n_minus_1"] = est.theta - t_prev
            prev_margins.append(est.theta - t_prev)
        stats.append(st)
        _keep_worst(witnesses, {"type": "orbit_diameter", "map": h.to_dict(), "x": est.x,
                                "diameter": est.theta, "margin": est.theta - t_n})
    out = {"t_n": t_n}
    if report_prev:
        out.update(t_n_minus_1=t_prev, min_margin_t_n_minus_1=min(prev_margins), asserted_t_n_minus_1=False)
    return out


def _check_t13(cfg, seeds, tally, witnesses, stats):
    d3 = math.sqrt(3.0)
    to = cfg.tol("optimizer")
    for i, s in enumerate(seeds):
        h = _sample_map(cfg.n, 3, s, i)
        est = maximize_orbit_diameter(h, cfg.budget, seed=s)
        st = {"index": i, "kind": h.kind, "theta": est.theta, "margin": est.theta - d3,
              "ok": tally.add(est.theta - d3, to)}
        _keep_worst(witnesses, {"type": "orbit_diameter", "map": h.to_dict(), "x": est.x,
                                "diameter": est.theta, "margin": est.theta - d3})
        try:
            sol = solve_weighted_balance(h, cfg.budget, seed=s, tol=cfg.tol("weighted_balance"))
        except SolverFailure as exc:
            tally.fail()
            st.update(ok=False, solver_failure=str(exc))
            stats.append(st)
            continue
        tri = orbit(h, sol.x).points
        hd = origin_hull_distance(tri).distance
        max_angle = max(_triangle_angles(tri))
        st.update(hull_distance=hd, max_angle=max_angle)
        st["ok"] &= tally.add(to - hd, 0.0)
        st["ok"] &= tally.add(max_angle - math.pi / 3, to)
        st["ok"] &= tally.add(math.pi / 2 - max_angle, to)
        if i < 2:
            witnesses.append({"type": "triangle", "map": h.to_dict(), "x": sol.x, "max_angle": max_angle,
                              "hull_distance": hd, "margin": max_angle - math.pi / 3})
        stats.append(st)
    return {"d_3": d3}


def _check_t14(cfg, seeds, tally, witnesses, stats):
    p = cfg.p
    d_p = polygon_diameter(p)
    tc = cfg.tol("closed")
    antipodal = 0
    for i, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        q = _random_coprime(p, rng)
        h = build_pl_conjugacy(q, p, seed=int(rng.integers(2**32)))
        if p % 2:
            w = witness_chord(h, float(rng.random()))
            antipodal += w.antipodal
            st = {"index": i, "q": q, "chord": w.chord, "window_sum": w.window_sum, "antipodal": w.antipodal,
                  "margin": w.chord - d_p, "ok": tally.add(w.chord - d_p, tc)}
            _keep_worst(witnesses, {"type": "witness_chord", "circle": h.to_dict(), "base_turn": w.base_turn,
                                    "indices": list(w.indices), "chord": w.chord, "margin": w.chord - d_p})
        else:
            x, t = antipodal_search(h)
            k = p // 2
            y = h.as_map().iterates(x, k)[-1]
            resid = float(np.linalg.norm(y + x))
            diam = float(np.linalg.norm(y - x))
            st = {"index": i, "q": q, "turn": t, "residual": resid, "margin": diam - 2.0,
                  "ok": tally.add(diam - 2.0, tc) & tally.add(cfg.tol("antipodal") - resid, 0.0)}
            _keep_worst(witnesses, {"type": "antipodal", "circle": h.to_dict(), "turn": t, "k": k,
                                    "residual": resid, "margin": -resid})
        stats.append(st)
    out = {"d_p": d_p}
    if p % 2:
        out["antipodal_fallbacks"] = antipodal
    return out


def _check_l22(cfg, seeds, tally, witnesses, stats):
    skipped = 0
    for i, s in enumerate(seeds):
        rng = np.random.default_rng(s)
        q = _random_coprime(cfg.p, rng)
        h = build_pl_conjugacy(q, cfg.p, seed=int(rng.integers(2**32)))
        st = {"index": i, "q": q}
        try:
            deg = circle_degree(h.as_map())
        except BalancedOrbit:
            skipped += 1
            st.update(skipped="balanced orbit", ok=True)
            stats.append(st)
            continue
        except ResolutionError as exc:
            tally.fail()
            st.update(ok=False, error=str(exc))
            stats.append(st)
            continue
        st.update(degree=deg.degree, divisible=deg.divisible_by_p, samples=deg.samples,
                  ok=tally.add(0.0 if deg.divisible_by_p else -1.0, 0.0))
        stats.append(st)
        if deg.degree != 0 and sum(w["type"] == "degree" for w in witnesses) < MAX_WITNESSES:
            witnesses.append({"type": "degree", "circle": h.to_dict(), "degree": deg.degree,
                              "margin": 0.0 if deg.divisible_by_p else -1.0})
    if tally.min_margin == math.inf:
        tally.min_margin = 0.0
    return {"skipped_balanced": skipped}


def _check_l24(cfg, seeds, tally, witnesses, stats):
    tl, to = cfg.tol("weighted_balance"), cfg.tol("optimizer")
    for i, s in enumerate(seeds):
        h = _sample_map(cfg.n, cfg.p, s, i)
        st = {"index": i, "kind": h.kind}
        try:
            sol = solve_weighted_balance(h, cfg.budget, seed=s, tol=tl)
        except SolverFailure as exc:
            tally.fail()
            st.update(ok=False, error=str(exc))
            stats.append(st)
            continue
        hd = origin_hull_distance(orbit(h, sol.x).points).distance
        st.update(lam=sol.lam, residual=sol.residual, hull_distance=hd, margin=tl - sol.residual,
                  ok=tally.add(tl - sol.residual, 0.0) & tally.add(to - hd, 0.0))
        stats.append(st)
        _keep_worst(witnesses, {"type": "weighted_balance", "map": h.to_dict(), "x": sol.x, "lambda": sol.lam,
                                "residual": sol.residual, "hull_distance": hd, "margin": tl - sol.residual})
    return {}


def _check_l26(cfg, seeds, tally, witnesses, stats):
    trials = rigidity_search(cfg.n, cfg.p, cfg.samples, seed=cfg.seed)
    feasible = 0
    for i, tr in enumerate(trials):
        st = {"index": i, "lambda": tr.lam, "balance": tr.balance, "chord_excess": tr.chord_excess,
              "feasible": tr.feasible, "regular": tr.regular, "irregularity": tr.irregularity}
        if tr.feasible:
            feasible += 1
            margin = REGULARITY_TOL - tr.irregularity
            st.update(margin=margin, ok=tally.add(margin, 0.0))
            _keep_worst(witnesses, {"type": "rigidity", "points": tr.points, "lambda": tr.lam,
                                    "balance": tr.balance, "chord_excess": tr.chord_excess,
                                    "irregularity": tr.irregularity, "margin": margin})
        else:
            st["ok"] = True
        stats.append(st)
    if tally.min_margin == math.inf:
        tally.min_margin = REGULARITY_TOL
    return {"feasible_trials": feasible, "counterexamples": tally.failures}


def jung_test_set(n, seed, index=0):
    """Random point set on S^n with diameter below the simplex edge t_n.

    Every third set is near-extremal: n+1 vertices of a regular simplex pulled
    slightly toward their centre, plus random points drawn near the centre and
    kept only while the diameter stays below t_n.
    """
    rng = np.random.default_rng(seed)
    d = n + 1
    t_n, delta = simplex_edge(n), jung_radius(n)
    size = int(rng.integers(2, 33))
    if index % 3 == 0:
        V = regular_configuration("simplex", n, d, rng)[: n + 1]
        c = V.mean(0)
        c /= np.linalg.norm(c)
        V = V + float(rng.uniform(1e-6, 0.05)) * c
        V /= np.linalg.norm(V, axis=1, keepdims=True)
        pts = list(V)
        for _ in range(4 * size):
            if len(pts) >= size:
                break
            w = c + float(rng.uniform(0.0, 1.0)) * (rng.dirichlet(np.ones(n + 1)) @ V - c)
            w /= np.linalg.norm(w)
            if np.linalg.norm(np.array(pts) - w, axis=1).max() < t_n:
                pts.append(w)
        return np.array(pts)
    c = random_sphere_points(1, d, rng)[0]
    alpha = 2 * math.asin(min(1.0, float(rng.uniform(0.1, 1.0)) * delta / 2))
    while True:
        U = rng.standard_normal((size, d))
        U -= np.outer(U @ c, c)
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        theta = alpha * np.sqrt(rng.random(size))
        X = np.cos(theta)[:, None] * c + np.sin(theta)[:, None] * U
        if set_diameter(X) < t_n:
            return X
        alpha *= 0.95


def _check_l27(cfg, seeds, tally, witnesses, stats):
    delta = jung_radius(cfg.n)
    to = cfg.tol("optimizer")
    for i, s in enumerate(seeds):
        X = jung_test_set(cfg.n, s, i)
        cap = smallest_enclosing_cap(X, seed=s)
        hd = origin_hull_distance(X).distance
        margin = delta - cap.chordal_radius
        st = {"index": i, "size": len(X), "diameter": set_diameter(X), "radius": cap.chordal_radius,
              "hull_distance": hd, "margin": margin,
              "ok": tally.add(margin, to) & (hd >= 1e-8)}
        if hd < 1e-8:
            tally.fail()
        stats.append(st)
        _keep_worst(witnesses, {"type": "cap", "points": X, "center": cap.center, "radius": cap.chordal_radius,
                                "hull_distance": hd, "margin": margin})
    return {"delta_n": delta, "t_n": simplex_edge(cfg.n)}


def _check_c31(cfg, seeds, tally, witnesses, stats):
    d_p = polygon_diameter(cfg.p)
    tc, to = cfg.tol("closed"), cfg.tol("optimizer")
    for i, s in enumerate(seeds):
        h = _sample_map(cfg.n, cfg.p, s, i, conjugates=False)
        est = maximize_orbit_diameter(h, cfg.budget, seed=s)
        probes = random_sphere_points(1000, h.dim, s)
        P = h.iterates(probes)
        probe_max = float(np.sqrt(((P[:, :, None] - P[:, None]) ** 2).sum(-1)).max())
        over = max(est.theta, probe_max) - d_p
        st = {"index": i, "theta": est.theta, "probe_max": probe_max, "margin": est.theta - d_p,
              "ok": tally.add(est.theta - d_p, to) & tally.add(to - abs(est.theta - d_p), 0.0)
              & tally.add(-over, tc)}
        stats.append(st)
        _keep_worst(witnesses, {"type": "orbit_diameter", "map": h.to_dict(), "x": est.x,
                                "diameter": est.theta, "margin": est.theta - d_p})
    return {"d_p": d_p}


def _question_stats(h, seed, probes=64):
    X = random_sphere_points(probes, h.dim, seed)
    hits = 0
    contained = 0
    for x in X:
        pts = orbit(h, x).points
        if not origin_hull_distance(pts).contains_origin:
            continue
        contained += 1
        red = caratheodory_reduce(pts)
        if len(red.indices) == 5 and simplex_volume(red.points) >= 1e-8:
            hits += 1
    return {"probes": probes, "hull_contains_origin": contained / probes, "nondegenerate_simplex": hits / probes}


def conjecture_scan(n, p, family_samples, budget, seed, tolerances=None, question=None):
    """Orbital-diameter estimates over projective conjugates of random periodic isometries.

    Margins against d_p are asserted only where the lower bound is proven
    (n = 1 or p in {2, 3}); elsewhere low estimates are only flagged.  For
    n=3, p=5 each map also gets the fraction of probe orbits whose reduced
    hull is a nondegenerate 4-simplex around the origin.
    """
    cfg = CheckConfig("conjecture" if question is None else "question", n, p, family_samples, budget, seed,
                      dict(tolerances or {})).validate()
    start = time.perf_counter()
    d_p = polygon_diameter(p)
    to = cfg.tol("optimizer")
    asserted = n == 1 or p in (2, 3)
    with_question = (n, p) == (3, 5) if question is None else question
    tally = _Tally()
    witnesses, stats = [], []
    flagged = []
    for i, s in enumerate(child_seeds(seed, family_samples)):
        rng = np.random.default_rng(s)
        h = random_projective_conjugate(random_periodic_isometry(n, p, rng), rng)
        st = {"index": i}
        if cfg.check_id == "conjecture":
            est = maximize_orbit_diameter(h, budget, seed=s)
            margin = est.theta - d_p
            st.update(theta=est.theta, margin=margin)
            if asserted:
                st["ok"] = tally.add(margin, to)
            else:
                tally.min_margin = min(tally.min_margin, margin)
                st["ok"] = True
            if margin < -to:
                flagged.append(i)
            _keep_worst(witnesses, {"type": "orbit_diameter", "map": h.to_dict(), "x": est.x,
                                    "diameter": est.theta, "margin": margin})
        if with_question:
            st["question"] = _question_stats(h, s)
        stats.append(st)
    summary = {"d_p": d_p, "asserted": asserted, "flagged_for_rerun": flagged}
    if with_question:
        fr = [st["question"]["nondegenerate_simplex"] for st in stats]
        summary["question"] = {"maps": len(fr), "mean_fraction": float(np.mean(fr)), "max_fraction": float(np.max(fr)),
                               "maps_with_all_probes_nondegenerate": int(sum(f == 1.0 for f in fr))}
    if tally.min_margin == math.inf:
        tally.min_margin = 0.0
    return VerificationReport(cfg.check_id, cfg.params(), seed, tally.passed, tally.min_margin, witnesses, stats,
                              (time.perf_counter() - start) * 1e3, summary)


_CHECKS = {
    "T1.1": _check_t11,
    "T1.2": _check_t12,
    "T1.3": _check_t13,
    "T1.4": _check_t14,
    "L2.2": _check_l22,
    "L2.4": _check_l24,
    "L2.6": _check_l26,
    "L2.7": _check_l27,
    "C3.1": _check_c31,
}


def run_check(cfg: CheckConfig) -> VerificationReport:
    """Run one check; deterministic given ``cfg`` (runtime aside)."""
    cfg.validate()
    if cfg.check_id == "conjecture":
        return conjecture_scan(cfg.n, cfg.p, cfg.samples, cfg.budget, cfg.seed, cfg.tolerances)
    if cfg.check_id == "question":
        return conjecture_scan(cfg.n, cfg.p, cfg.samples, cfg.budget, cfg.seed, cfg.tolerances, question=True)
    start = time.perf_counter()
    tally = _Tally()
    witnesses, stats = [], []
    seeds = child_seeds(cfg.seed, cfg.samples)
    summary = _CHECKS[cfg.check_id](cfg, seeds, tally, witnesses, stats)
    if tally.min_margin == math.inf:
        tally.min_margin = 0.0
    return VerificationReport(cfg.check_id, cfg.params(), cfg.seed, tally.passed, tally.min_margin, witnesses, stats,
                              (time.perf_counter() - start) * 1e3, summary)


# --- witness re-verification -------------------------------------------------


def _circle_points(h: CircleHomeo, base_turn, indices):
    out = []
    for i in indices:
        out.append(turns_to_points(float(h.lift_iterate(base_turn, int(i)))))
    return out


def verify_witness(w, tol=None):
    """Recompute a stored witness; returns a dict of (stored, recomputed) pairs that disagree."""
    tol = DEFAULT_TOLERANCES["witness"] if tol is None else tol
    kind = w["type"]
    got = {}
    if kind == "shift":
        got["shift"] = shift_exact(np.array(w["map"]["isometry"]["matrix"]))
    elif kind == "displacement":
        h = map_from_dict(w["map"])
        x = np.array(w["x"])
        got["displacement"] = float(np.linalg.norm(h(x) - x))
    elif kind == "regular_orbit":
        pts = orbit(map_from_dict(w["map"]), w["x"]).points
        if len(pts) >= 3:
            got["residual"] = is_regular_pgon(pts).worst_residual()
        else:
            got["residual"] = float(np.linalg.norm(pts[0] + pts[1]))
    elif kind == "orbit_diameter":
        got["diameter"] = orbit(map_from_dict(w["map"]), w["x"]).diameter
    elif kind == "triangle":
        pts = orbit(map_from_dict(w["map"]), w["x"]).points
        got["max_angle"] = max(_triangle_angles(pts))
        got["hull_distance"] = origin_hull_distance(pts).distance
    elif kind == "weighted_balance":
        h = map_from_dict(w["map"])
        got["residual"] = weighted_balance_residual(h, np.array(w["x"]), w["lambda"])
        got["hull_distance"] = origin_hull_distance(orbit(h, w["x"]).points).distance
    elif kind == "witness_chord":
        h = CircleHomeo.from_dict(w["circle"])
        a, b = _circle_points(h, w["base_turn"], w["indices"])
        got["chord"] = float(np.linalg.norm(a - b))
    elif kind == "antipodal":
        h = CircleHomeo.from_dict(w["circle"])
        x, y = _circle_points(h, w["turn"], [0, w["k"]])
        got["residual"] = float(np.linalg.norm(x + y))
    elif kind == "degree":
        got["degree"] = circle_degree(CircleHomeo.from_dict(w["circle"]).as_map()).degree
    elif kind == "rigidity":
        X = np.array(w["points"])
        got["balance"], got["chord_excess"] = chain_residuals(X, w["lambda"])
        got["irregularity"] = is_regular_pgon(X, REGULARITY_TOL).worst_residual()
    elif kind == "cap":
        X = np.array(w["points"])
        got["radius"] = float(np.linalg.norm(X - np.array(w["center"]), axis=1).max())
        got["hull_distance"] = origin_hull_distance(X).distance
    else:
        raise ValueError(f"unknown witness type {kind!r}")
    return {k: (w[k], v) for k, v in got.items() if not abs(float(w[k]) - float(v)) <= tol}


def replay(report: dict, rerun: bool = True):
    """Re-verify every witness of a stored report and, with ``rerun``, re-run its check.

    Returns a list of human-readable mismatch descriptions (empty when all agree).
    """
    problems = []
    for i, w in enumerate(report["witnesses"]):
        bad = verify_witness(w)
        if bad:
            problems.append(f"witness {i} ({w['type']}): {bad}")
    if rerun:
        fresh = run_check(CheckConfig.from_report(report)).to_dict()
        for key in ("pass", "min_margin", "witnesses", "per_sample_stats", "summary"):
            if fresh[key] != report.get(key):
                problems.append(f"re-run differs in {key!r}")
    return problems


__all__ = [
    "CHECK_IDS",
    "CheckConfig",
    "VerificationReport",
    "conjecture_scan",
    "extremal_lengths",
    "jung_test_set",
    "replay",
    "run_check",
    "simplex_volume",
    "verify_witness",
]
