"""Command-line front end.

Exit codes: 0 certified / success, 1 not certified / failed check,
2 usage or internal error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Sequence

import numpy as np

from . import acceptance, ci, elliptic, obstruction, spinlift
from .certificate import dumps

# "ci search" and "elliptic exceptional-set" read naturally; map them onto the flat commands.
_ALIASES = {("ci", "search"): "search", ("elliptic", "exceptional-set"): "exceptional-set"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


class UsageError(Exception):
    pass


def _degrees(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"degrees must be comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="exocert", description="Certify hypotheses for exotic diffeomorphisms "
                                            "and nontrivial Dehn twists on spin 4-manifolds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("elliptic", help="certify an elliptic surface E(n)_{i,j}")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--i", type=int, default=1)
    e.add_argument("--j", type=int, default=1)
    e.add_argument("--check", choices=("exotic", "dehn"), required=True)
    e.add_argument("--seed", type=int, default=obstruction.DEFAULT_SEED)
    e.add_argument("--json", action="store_true")

    c = sub.add_parser("ci", help="certify a complete intersection surface")
    c.add_argument("--ambient", type=int, help="n for CP^n; inferred from the degrees if omitted")
    c.add_argument("--degrees", type=_degrees, required=True, help="comma-separated, e.g. 8,29")
    c.add_argument("--check", choices=("exotic", "dehn"), required=True)
    c.add_argument("--seed", type=int, default=obstruction.DEFAULT_SEED)
    c.add_argument("--json", action="store_true")

    x = sub.add_parser("exceptional-set", help="recompute the residue-coverage exceptional set")
    x.add_argument("--variant", type=int, choices=(1, 2), required=True)
    x.add_argument("--bound", type=int, required=True)
    x.add_argument("--json", action="store_true")

    d = sub.add_parser("verify-dehn-loop", help="lift the commutator loop to Spin(4)")
    d.add_argument("--samples", type=int, default=4096)
    d.add_argument("--trace", metavar="FILE", help="write the lifted loop as CSV")
    d.add_argument("--json", action="store_true")

    s = sub.add_parser("search", help="list complete intersections passing a certificate")
    s.add_argument("--ambient", type=int, required=True)
    s.add_argument("--max-degree", type=int, required=True)
    s.add_argument("--target", choices=("exotic", "dehn"), required=True)
    s.add_argument("--max-candidates", type=int, default=ci.MAX_CANDIDATES)
    s.add_argument("--json", action="store_true")

    t = sub.add_parser("selftest", help="run the acceptance criteria")
    t.add_argument("--only", choices=acceptance.MODULES)
    t.add_argument("--json", action="store_true")
    return p


def _emit_certificate(cert, as_json: bool) -> int:
    print(cert.dumps() if as_json else cert.render(), end="" if as_json else "\n")
    return 0 if cert.passed else 1


def _cmd_elliptic(args) -> int:
    surface = elliptic.EllipticSurface(args.n, args.i, args.j)
    certify = elliptic.certify_exotic if args.check == "exotic" else elliptic.certify_dehn
    return _emit_certificate(certify(surface, seed=args.seed), args.json)


def _cmd_ci(args) -> int:
    ambient = args.ambient if args.ambient is not None else len(args.degrees) + 2
    surface = ci.CompleteIntersection(ambient, args.degrees)
    certify = ci.certify_exotic if args.check == "exotic" else ci.certify_dehn
    return _emit_certificate(certify(surface, seed=args.seed), args.json)


def _cmd_exceptional(args) -> int:
    pairs = elliptic.exceptional_set(args.bound, args.variant)
    if args.json:
        print(dumps({"kind": "exceptional_set", "variant": args.variant, "bound": args.bound,
                     "pairs": [list(p) for p in pairs]}), end="")
    else:
        for i, j in pairs:
            print(f"({i},{j})")
    return 0


def _cmd_dehn_loop(args) -> int:
    loop = spinlift.commutator_loop(args.samples)
    cls = spinlift.loop_pi1_class(loop)
    full = spinlift.loop_pi1_class(spinlift.full_turn_loop(args.samples))
    err = 0.0
    for t in loop.times:
        h = spinlift.h2(float(t))
        err = max(err, float(np.max(np.abs(spinlift.SIGMA1 @ h @ spinlift.SIGMA1.T - h.T))))
    ends_ok = spinlift.homotopy_endpoints_ok()
    if args.trace:
        lifted = spinlift.lift_path(loop)
        with open(args.trace, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "qL0", "qL1", "qL2", "qL3", "qR0", "qR1", "qR2", "qR3"])
            for t, row in zip(loop.times, lifted):
                w.writerow([f"{t:.12g}", *(f"{v:.12g}" for v in row)])
    verdict = "nontrivial" if cls == 1 else "trivial"
    if args.json:
        print(dumps({"kind": "dehn_loop", "samples": args.samples, "commutator_class": cls,
                     "full_turn_class": full, "relation_max_error": err,
                     "homotopy_endpoints_ok": bool(ends_ok), "verdict": verdict}), end="")
    else:
        print(f"samples: {args.samples}")
        print(f"h2^-2 class: {full}")
        print(f"relation sigma1 h2 sigma1^-1 = h2^-1: max error {err:.2e}")
        print(f"homotopy endpoints: {'ok' if ends_ok else 'MISMATCH'}")
        print(f"π₁ class: {verdict}")
    return 0 if cls == 1 else 1


def _cmd_search(args) -> int:
    found = ci.search_multidegrees(args.ambient, args.max_degree, args.target,
                                   max_candidates=args.max_candidates)
    if args.json:
        print(dumps({"kind": "search", "ambient": args.ambient, "max_degree": args.max_degree,
                     "target": args.target, "results": [list(x.degrees) for x in found]}), end="")
    else:
        for x in found:
            print(x.name)
        print(f"{len(found)} found")
    return 0


def _cmd_selftest(args) -> int:
    outcomes = acceptance.run(args.only)
    passed = all(o.passed for o in outcomes)
    if args.json:
        print(dumps({"kind": "selftest", "passed": passed,
                     "criteria": [o.to_json() for o in outcomes]}), end="")
    else:
        for o in outcomes:
            print(o.line())
        print(f"{sum(o.passed for o in outcomes)}/{len(outcomes)} criteria passed")
    return 0 if passed else 1


_COMMANDS = {
    "elliptic": _cmd_elliptic,
    "ci": _cmd_ci,
    "exceptional-set": _cmd_exceptional,
    "verify-dehn-loop": _cmd_dehn_loop,
    "search": _cmd_search,
    "selftest": _cmd_selftest,
}


def _normalize(argv: list[str]) -> list[str]:
    if len(argv) >= 2 and (argv[0], argv[1]) in _ALIASES:
        return [_ALIASES[(argv[0], argv[1])], *argv[2:]]
    return argv


def main(argv: Sequence[str] | None = None) -> int:
    argv = _normalize(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 2
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"exocert: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
