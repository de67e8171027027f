"""Command line interface: analyze, reduce, verify-paper, export."""

from __future__ import annotations

import argparse
import json
import sys

from .cones import Cone, Fan
from .gmpoly import (
    PolyError,
    fixed_ideal,
    poly_str,
    projectivized_fixed_points,
    reichstein_fixed_points,
    saturated_blowup_exceptional,
    saturation_origin,
    strict_transform_exceptional,
    tangent_cone,
)
from .gms import vargit_locus
from .model import Model, ModelError, load_model
from .reduction import ReductionError, dumps_trace, reduce, union_json, verify_trace
from .stacks import (
    StackError,
    ToricUnion,
    classify_gerbe,
    max_locus,
    monomial_partition,
    stable_locus,
)

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2


def _cone(c: Cone) -> list:
    return [list(r) for r in c.rays]


def _cones(cs) -> list:
    return [_cone(c) for c in sorted(cs, key=lambda c: (len(c.rays), c.rays))]


def analyze(m: Model) -> dict:
    out: dict = {"model": m.kind, "name": m.name}
    if m.kind == "fan":
        X = m.obj
        out["stabilizer_dims"] = [
            {"cone": _cone(c), "dim": X.stab_dims[c]} for c in X.fan.sorted()
        ]
        out["max_locus"] = _cones(max_locus(X))
        out["stability"] = stable_locus(X).to_json()
        out["gerbe"] = classify_gerbe(X)
    elif m.kind == "monomial":
        U = ToricUnion.from_monomial(m.obj)
        P = monomial_partition(U)
        out["union"] = union_json(U)
        out["stable_cones"] = _cones(U.stable_cones)
        out["stable"] = U.is_stable()
        out["max_unstable_dim"] = P.n
        out["center"] = _cones(P.center_cones)
    elif m.kind == "gm_poly":
        X = m.obj
        tc = tangent_cone(X.generators, X.n)
        plus, minus = saturation_origin(X)
        rf = reichstein_fixed_points(X)
        se = saturated_blowup_exceptional(X, m.options.get("degree_bound"))
        out["weights"] = list(X.weights)
        out["fixed_ideal"] = [poly_str(g) for g in fixed_ideal(X)]
        out["initial_forms"] = [poly_str(g) for g in tc.initial]
        out["tangent_cone"] = {"generators": [poly_str(g) for g in tc.generators], "method": tc.method}
        out["fixed_points"] = [
            {"weight": f.weight, "locus": f.locus.to_json()} for f in projectivized_fixed_points(tc.generators, X.weights)
        ]
        out["saturation_of_origin"] = {
            "plus": [poly_str(g) for g in plus],
            "minus": [poly_str(g) for g in minus],
            "plus_exceptional": strict_transform_exceptional(plus, X.n).to_json(),
            "minus_exceptional": strict_transform_exceptional(minus, X.n).to_json(),
        }
        out["reichstein"] = {
            "exceptional": rf.exceptional.to_json(),
            "fixed_points": [list(p) for p in rf.points()],
            "good_quotient_failure": rf.good_quotient_failure,
            "witness_coordinates": sorted(j + 1 for j in rf.witness) if rf.witness else None,
        }
        out["saturated_blowup_exceptional"] = se.locus.to_json()
    else:
        a, i, j = m.obj
        r = vargit_locus(a, i, j, m.options.get("degree_bound"))
        out["vargit"] = {"a": a, "i": i, "j": j, "case": r.case, "P1": r.p1, "P2": r.p2, "open": r.open_point}
    return out


def _divisor(m: Model, spec: str | None) -> list:
    if m.kind not in ("fan", "monomial"):
        raise ModelError("reduce works on fan and monomial models")
    raw = spec if spec is not None else m.options.get("divisor")
    if raw is None or raw == "":
        return []
    idx = [int(x) for x in raw.split(",")] if isinstance(raw, str) else list(raw)
    rays = m.rays
    out = []
    for k in idx:
        if not 0 <= k < len(rays):
            raise ModelError(f"divisor index {k} out of range (0..{len(rays) - 1})")
        out.append(rays[k])
    return out


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="stabreduce", description="Stabilizer reduction for toric quotient stacks.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("analyze", help="stabilizers, stability and fixed-point data of a model")
    p.add_argument("file")
    p = sub.add_parser("reduce", help="run the reduction and print the trace")
    p.add_argument("file")
    p.add_argument("--divisor", help="comma separated ray indices of the initial divisor")
    p.add_argument("--no-charts", action="store_true", help="omit invariant charts from the trace")
    sub.add_parser("verify-paper", help="recheck the built-in worked examples")
    p = sub.add_parser("export", help="export the fan of a model")
    p.add_argument("file")
    p.add_argument("--format", choices=("dot", "json"), default="json")
    args = ap.parse_args(argv)

    try:
        if args.cmd == "verify-paper":
            from .checks import run_checks

            results = run_checks()
            width = max(len(n) for n, _, _ in results)
            for name, ok, detail in results:
                print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}")
            return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_VERIFY
        m = load_model(args.file)
        if args.cmd == "analyze":
            print(json.dumps(analyze(m), indent=2, sort_keys=True, ensure_ascii=False))
            return EXIT_OK
        if args.cmd == "reduce":
            tr = reduce(m.obj, _divisor(m, args.divisor))
            sys.stdout.write(dumps_trace(tr, charts=not args.no_charts))
            v = verify_trace(tr)
            if not v.ok:
                for name, _, detail in v.failures():
                    print(f"verification failed: {name} {detail}".rstrip(), file=sys.stderr)
                return EXIT_VERIFY
            return EXIT_OK
        if args.cmd == "export":
            if m.kind == "fan":
                fan = m.obj.fan
            elif m.kind == "monomial":
                fan = ToricUnion.from_monomial(m.obj).ambient
            else:
                raise ModelError("export needs a fan or monomial model")
            if args.format == "dot":
                sys.stdout.write(fan.to_dot())
            else:
                print(json.dumps(fan.to_json(), sort_keys=True))
            return EXIT_OK
    except (ModelError, StackError, ReductionError, PolyError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
