"""Built-in worked examples, rechecked end to end by ``stabreduce verify-paper``."""

from __future__ import annotations

from typing import Callable

from .cones import Cone, Fan
from .gmpoly import (
    CoordinateLocus,
    Graded1TAction,
    projectivized_fixed_points,
    reichstein_fixed_points,
    saturated_blowup_exceptional,
    saturation_origin,
    strict_transform_exceptional,
    tangent_cone,
)
from .gms import (
    chart_monomial_str,
    gms_blowup_check,
    invariant_chart,
    pullback_monomial,
    pushforward_generators,
    vargit_closed_form,
    vargit_locus,
)
from .reduction import reduce, verify_trace
from .saturation import exceptional_direction, reichstein_fan, saturation
from .stacks import DiagonalizableGroup, MonomialStack, ToricStack, classify_gerbe, stable_locus

Result = tuple[bool, str]


def orthant_stack(weights, torsion=(), torsion_weights=()) -> ToricStack:
    rows = [list(weights)] if weights and isinstance(weights[0], int) else [list(r) for r in weights]
    n = len(rows[0]) if rows else len(torsion_weights[0])
    G = DiagonalizableGroup(n, tuple(map(tuple, rows)), tuple(torsion), tuple(map(tuple, torsion_weights)))
    return ToricStack(Fan.orthant(n), G)


def e(i: int, n: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


def check_a1_weight_one() -> Result:
    X = orthant_stack([1])
    ray = Cone.of(e(0, 1))
    sat = saturation(X, [ray])
    st = reichstein_fan(X, [ray])
    rep = stable_locus(X)
    ok = sat.cones == X.fan.cones and st.after.fan.is_empty() and rep.classification == "not_stable"
    return ok, f"saturation={len(sat.cones)}/{len(X.fan)} cones, output={len(st.after.fan)} cones, {rep.classification}"


def check_a2_opposite() -> Result:
    X = orthant_stack([1, -1])
    center = Cone.of(e(0, 2), e(1, 2))
    st = reichstein_fan(X, [center])
    u = (1, 1)
    want = Fan(2, frozenset([Cone.zero(2), Cone.of(u)]))
    chart = invariant_chart(X, center).generators == ((1, 1),)
    tame = classify_gerbe(st.after) == "tame"
    gone = sorted(exceptional_direction(center, c) for c in st.deleted if len(c.rays) == 2)
    ok = st.after.fan == want and chart and tame and gone == [(0, 1), (1, 0)]
    return ok, f"output={st.after.fan}, deleted exceptional points={gone}"


def check_a3_weights_1_1_m1() -> Result:
    X = orthant_stack([1, 1, -1])
    center = Cone.of(e(0, 3), e(1, 3), e(2, 3))
    st = reichstein_fan(X, [center])
    u = (1, 1, 1)
    sat_ok = set(st.saturation.minimal) == {Cone.of(e(2, 3)), Cone.of(e(0, 3), e(1, 3))}
    mx_ok = set(st.after.fan.maximal_cones) == {Cone.of(e(0, 3), u), Cone.of(e(1, 3), u)}
    chart = Cone.of(e(0, 3), e(1, 3), u)
    pb = pullback_monomial((1, 0, 1), chart, [u])
    names = ["x", "y", "z"]
    total = chart_monomial_str(pb["total"], chart, names)
    strict = chart_monomial_str(pb["strict"], chart, names)
    ok = sat_ok and mx_ok and strict == "(x/z)" and total == "(x/z)*z^2"
    return ok, f"strict transform ({strict}), fiber product ({total})"


def check_mu2() -> Result:
    X = orthant_stack([], torsion=(2,), torsion_weights=[(1, 1)])
    center = Cone.of(e(0, 2), e(1, 2))
    chart = invariant_chart(X, center).generators
    st = reichstein_fan(X, [center])
    v = gms_blowup_check(st)
    degs = all(
        {sum(m) for m in pushforward_generators(X, center, (1, 1), i)} == {2 * ((i + 1) // 2)} for i in range(1, 6)
    )
    ok = set(chart) == {(2, 0), (1, 1), (0, 2)} and v.d == 2 and v.ok and degs
    ok = ok and set(v.degree_one_generators) == {(2, 0), (1, 1), (0, 2)}
    return ok, f"chart={list(chart)}, d={v.d}, blowup ideal={v.degree_one_generators}"


def _points(fixed) -> list[tuple[int, ...]]:
    return sorted(f.point() for f in fixed if f.is_point)


def check_ex_false() -> Result:
    X = Graded1TAction.parse((-1, 1, 3), ["x1*x3^2 + x2^5"])
    tc = tangent_cone(X.generators, 3)
    fixed = _points(projectivized_fixed_points(tc.generators, X.weights))
    plus, minus = saturation_origin(X)
    p0 = strict_transform_exceptional(plus, 3).points()
    p2 = strict_transform_exceptional(minus, 3).points()
    rf = reichstein_fixed_points(X).points()
    se = saturated_blowup_exceptional(X).locus
    want_se = CoordinateLocus(3, (frozenset({2}),), (frozenset({0}), frozenset({1})))
    ok = (
        fixed == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
        and p0 == [(0, 0, 1)]
        and p2 == [(1, 0, 0)]
        and rf == [(0, 1, 0)]
        and se == want_se
        and not se.points()
    )
    return ok, f"fixed={fixed}, Reichstein fixed={rf}, saturated exceptional={se}"


def check_ex_false2() -> Result:
    X = Graded1TAction.parse((-1, 1, 3, 2, 7), ["x1*x3^2 + x2^5", "x1*x5 + x4^3"])
    tc = tangent_cone(X.generators, 5)
    fixed = projectivized_fixed_points(tc.generators, X.weights)
    r = reichstein_fixed_points(X)
    se = saturated_blowup_exceptional(X).locus
    want_se = CoordinateLocus(5, (frozenset({2, 4}),), (frozenset({0}), frozenset({1, 3})))
    ok = (
        len(fixed) == 5
        and r.witness == frozenset({1, 3})
        and sorted(r.points()) == [(0, 0, 0, 1, 0), (0, 1, 0, 0, 0)]
        and se == want_se
        and not se.points()
    )
    return ok, f"{len(fixed)} fixed points, P(W) on coordinates {sorted(j + 1 for j in r.witness or [])}, saturated exceptional={se}"


def check_vargit() -> Result:
    bad = []
    for a in range(1, 4):
        for i in range(1, 4):
            for j in range(-6, 7):
                if vargit_locus(a, i, j).case != vargit_closed_form(a, i, j):
                    bad.append((a, i, j))
    named = (
        vargit_locus(1, 1, 0).case == "minus_P2"
        and vargit_locus(1, 1, -1).case == "minus_P1"
        and vargit_locus(2, 2, -1).case == "minus_both"
    )
    return not bad and named, f"{3 * 3 * 13} grid cases, mismatches={bad}"


def check_monomial() -> Result:
    G = DiagonalizableGroup.torus([1, -1, 0])
    X = MonomialStack(3, (frozenset({0, 1}), frozenset({2})), G)
    tr = reduce(X)
    v = verify_trace(tr)
    pieces = sorted(p["classification"] for p in tr.final_pieces())
    centers = tr.stages[0].step.centers if tr.stages else ()
    ok = (
        tr.steps == 1
        and centers == (Cone.of(e(0, 3), e(1, 3), e(2, 3)),)
        and pieces == ["gerbe_over_tame", "tame"]
        and v.ok
    )
    return ok, f"{tr.steps} step, center={[c.label() for c in centers]}, final={pieces}"


CHECKS: list[tuple[str, Callable[[], Result]]] = [
    ("A^1 with weight 1", check_a1_weight_one),
    ("A^2 with weights (1,-1)", check_a2_opposite),
    ("A^3 with weights (1,1,-1)", check_a3_weights_1_1_m1),
    ("mu_2 on A^2", check_mu2),
    ("G_m on x1*x3^2 + x2^5", check_ex_false),
    ("G_m on the two-equation threefold", check_ex_false2),
    ("variation of GIT on P(1,a)", check_vargit),
    ("V(x,y) ∪ V(z) with weights (1,-1,0)", check_monomial),
]


def run_checks() -> list[tuple[str, bool, str]]:
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, ok, detail))
    return out
