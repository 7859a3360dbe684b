"""Command-line surface: batch computation and verification.

Commands: check, jinv, hv, hvprime, integral, repcheck.
Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .scalars import RootData
from .pbw import Color
from .serialize import scalar_payload, tensor_payload


def _build_ring(args) -> RootData:
    if args.ell < 3:
        raise ValueError(f"ell must be >= 3, got {args.ell}")
    eta = Fraction(args.eta)
    return RootData(args.ell, eta=eta, backend=args.backend, tol=args.tol)


def _parse_colors(spec: str) -> list[Color]:
    from .diagrams import parse_color
    return [Color(parse_color(tok)) for tok in spec.split(",") if tok.strip()]


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_check(args) -> int:
    from . import checks
    ring = _build_ring(args)
    rng = random.Random(args.seed)
    report = checks.run_all(ring, rng, samples=args.samples,
                            large_l=args.opt_in_large_l)
    lines = []
    ok = True
    for item in report:
        status = item["status"]
        if status == "fail":
            ok = False
        lines.append(f"[{status.upper():4s}] {item['name']}" +
                     (f"  ({item['detail']})" if item.get("detail") else ""))
    lines.append("overall: " + ("PASS" if ok else "FAIL"))
    _emit(args, {"ell": ring.ell, "checks": report,
                 "overall": "pass" if ok else "fail"}, lines)
    return 0 if ok else 1


def cmd_jinv(args) -> int:
    from .diagrams import parse_diagram, universal_invariant
    ring = _build_ring(args) if args.ell_given else None
    text = open(args.input).read()
    d = parse_diagram(text, ring)
    J = universal_invariant(d)
    payload = {"ell": d.ring.ell, "open_component": d.open_component,
               "invariant": tensor_payload(J)}
    lines = [f"ell = {d.ring.ell}", f"components = {len(d.components)}",
             f"J = {J!r}"]
    _emit(args, payload, lines)
    return 0


def cmd_hv(args) -> int:
    from .diagrams import parse_diagram
    from .manifolds import SurgeryPresentation, hv_result
    ring = _build_ring(args) if args.ell_given else None
    d = parse_diagram(open(args.input).read(), ring)
    p = SurgeryPresentation(d)
    res = hv_result(p, cut=None)
    val = res["value"]["approx"]
    lines = [f"HV = {res['value'].get('exact', val)}",
             f"  approx = {val[0]:+.12g}{val[1]:+.12g}i",
             f"  b+ = {res['b_plus']}, b- = {res['b_minus']}"]
    _emit(args, res, lines)
    return 0


def cmd_hvprime(args) -> int:
    from .diagrams import parse_diagram
    from .manifolds import SurgeryPresentation, hv_result
    ring = _build_ring(args) if args.ell_given else None
    d = parse_diagram(open(args.input).read(), ring)
    p = SurgeryPresentation(d)
    res = hv_result(p, cut=args.cut)
    val = res["value"]["approx"]
    lines = [f"HV' (cut component {args.cut}) = {res['value'].get('exact', val)}",
             f"  approx = {val[0]:+.12g}{val[1]:+.12g}i",
             f"  b+ = {res['b_plus']}, b- = {res['b_minus']}"]
    _emit(args, res, lines)
    return 0


def cmd_integral(args) -> int:
    from .integrals import mu, mu_mod, solve_z
    from .pbw import tilde_basis, AlgElem
    ring = _build_ring(args)
    colors = _parse_colors(args.colors)
    payload = {"ell": ring.ell, "colors": []}
    lines = [f"ell = {ring.ell}, eta = {ring.eta}"]
    for a in colors:
        entry = {"color": str(a.lift())}
        lines.append(f"color {a}:")
        z = solve_z(ring, a)
        entry["z"] = [[str(m), scalar_payload(c)] for m, c in sorted(
            z.terms.items(), key=lambda kv: (kv[0].nE, kv[0].nF, str(kv[0].gamma)))]
        lines.append(f"  z_a = {z!r}")
        one = AlgElem(ring, a, {tilde_basis(ring)[0]: ring.one}, clean=False)
        lines.append(f"  mu'(1) = mu(z_a) = {mu_mod(ring, a, one)}")
        entry["mu_mod_1"] = scalar_payload(mu_mod(ring, a, one))
        payload["colors"].append(entry)
    _emit(args, payload, lines)
    return 0


def cmd_repcheck(args) -> int:
    from .diagrams import parse_diagram
    from .repeval import rep_evaluate_link
    ring = _build_ring(args) if args.ell_given else None
    d = parse_diagram(open(args.input).read(), ring)
    ring = d.ring
    lines = []
    payload = {"ell": ring.ell, "assignments": []}
    ok = True
    lp = ring.ellprime
    ncomp = len(d.components)
    assignments = [dict.fromkeys(range(ncomp), k) for k in range(lp)] \
        if args.all_modules else [dict.fromkeys(range(ncomp), 0)]
    for assignment in assignments:
        vj, vd = rep_evaluate_link(ring, d, assignment)
        same = (vj - vd).is_zero()
        ok = ok and same
        lines.append(f"modules {sorted(assignment.values())}: universal = "
                     f"{vj.to_complex():.10g}, direct = {vd.to_complex():.10g}, "
                     f"agree = {same}")
        payload["assignments"].append({
            "modules": list(assignment.values()),
            "universal": scalar_payload(vj),
            "direct": scalar_payload(vd),
            "agree": same,
        })
    payload["overall"] = "pass" if ok else "fail"
    lines.append("overall: " + ("PASS" if ok else "FAIL"))
    _emit(args, payload, lines)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hvsl2",
        description="Universal link invariants and Hennings-Virelizier "
                    "3-manifold invariants of graded quantum sl2 at a root of unity")
    ap.add_argument("--ell", type=int, default=4, help="root order (>= 3)")
    ap.add_argument("--eta", default="1", help="integral normalization (rational)")
    ap.add_argument("--backend", choices=("exact", "approx"), default="exact")
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--opt-in-large-l", action="store_true",
                    help="run triple-tensor identities at ell' > 3")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the axiom and invariance suites")
    p.add_argument("--samples", type=int, default=25)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("jinv", help="universal invariant of a diagram file")
    p.add_argument("input")
    p.set_defaults(func=cmd_jinv)

    p = sub.add_parser("hv", help="HV invariant of a surgery presentation file")
    p.add_argument("input")
    p.set_defaults(func=cmd_hv)

    p = sub.add_parser("hvprime", help="HV' invariant (cut one component)")
    p.add_argument("input")
    p.add_argument("--cut", type=int, required=True)
    p.set_defaults(func=cmd_hvprime)

    p = sub.add_parser("integral", help="print mu / mu' / z_a tables")
    p.add_argument("--colors", default="1/2", help="comma separated colors")
    p.set_defaults(func=cmd_integral)

    p = sub.add_parser("repcheck", help="two-pipeline link evaluation comparison")
    p.add_argument("input")
    p.add_argument("--all-modules", action="store_true")
    p.set_defaults(func=cmd_repcheck)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    args = ap.parse_args(argv)
    args.ell_given = any(tok.startswith("--ell") for tok in argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
