"""Command-line front end.

Exit codes: 0 pass, 1 check failed (or replay mismatch), 2 usage error.
Data goes to stdout or --out; logs go to stderr.
"""

import argparse
import json
import logging
import sys

import numpy as np

from spherebounds.constants import extremal_lengths
from spherebounds.errors import InvalidMapError
from spherebounds.isometry import RotationSpectrum, build_block_isometry
from spherebounds.lab import CHECK_IDS, CheckConfig, VerificationReport, conjecture_scan, replay, run_check
from spherebounds.maps import map_from_dict
from spherebounds.orbits import orbit

log = logging.getLogger("spherebounds")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="spherebounds", description="Extremal orbit bounds for periodic maps of spheres.")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constants", help="print the extremal lengths as JSON")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--n", type=int, required=True)

    k = sub.add_parser("check", help="run one verification sweep")
    k.add_argument("--id", dest="check_id", choices=CHECK_IDS, required=True)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--p", type=int, required=True)
    k.add_argument("--samples", type=int, required=True)
    k.add_argument("--seed", type=int, required=True)
    k.add_argument("--budget", type=int, default=32)
    k.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="tolerance override")
    k.add_argument("--out")

    s = sub.add_parser("scan", help="orbital-diameter scan over projective conjugates")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--budget", type=int, default=32)
    s.add_argument("--out")

    o = sub.add_parser("orbit", help="export an orbit as CSV")
    o.add_argument("--map", dest="map_path", required=True, help="JSON map description")
    o.add_argument("--x", required=True, help="comma-separated coordinates of the base point")
    o.add_argument("--out", required=True)

    r = sub.add_parser("replay", help="re-verify a stored report")
    r.add_argument("--report", required=True)
    r.add_argument("--no-rerun", action="store_true", help="only re-verify witnesses")
    return ap


def _emit(report: VerificationReport, out):
    text = report.to_json(indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
        log.info("report written to %s", out)
    else:
        print(text)
    log.info("%s pass=%s min_margin=%.3e runtime=%.0f ms", report.check_id, report.passed,
             report.min_margin, report.runtime_ms)
    return 0 if report.passed else 1


def _parse_tolerances(items):
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"tolerance override {item!r} is not NAME=VALUE")
        out[name] = float(value)
    return out


def _load_map(path):
    with open(path) as fh:
        d = json.load(fh)
    if "kind" in d:
        return map_from_dict(d)
    # bare rotation spectrum, optionally with a conjugating rotation
    conj = d.get("conjugator")
    spectrum = RotationSpectrum(int(d["n"]), int(d["p"]), int(d["fixed_dim"]), tuple(d["multipliers"]))
    return build_block_isometry(spectrum, None if conj is None else np.array(conj, dtype=float)).as_map()


def dispatch(args) -> int:
    if args.command == "constants":
        print(json.dumps(extremal_lengths(args.p, args.n).to_dict(), indent=2))
        return 0
    if args.command == "check":
        cfg = CheckConfig(args.check_id, args.n, args.p, args.samples, args.budget, args.seed,
                          _parse_tolerances(args.tol))
        return _emit(run_check(cfg), args.out)
    if args.command == "scan":
        return _emit(conjecture_scan(args.n, args.p, args.samples, args.budget, args.seed), args.out)
    if args.command == "orbit":
        h = _load_map(args.map_path)
        x = np.array([float(v) for v in args.x.split(",")])
        if x.shape != (h.dim,):
            raise ValueError(f"base point needs {h.dim} coordinates, got {x.size}")
        orb = orbit(h, x)
        orb.to_csv(args.out)
        log.info("orbit of length %d written to %s (diameter %.12f)", orb.p, args.out, orb.diameter)
        return 0
    if args.command == "replay":
        with open(args.report) as fh:
            report = json.load(fh)
        problems = replay(report, rerun=not args.no_rerun)
        for line in problems:
            log.error("%s", line)
        log.info("%d witnesses checked, %d problems", len(report["witnesses"]), len(problems))
        return 1 if problems else 0
    raise ValueError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    try:
        return dispatch(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError, InvalidMapError) as exc:
        print(f"spherebounds: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
