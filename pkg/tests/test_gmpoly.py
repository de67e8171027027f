import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import e, orthant
from stabreduce.cones import Cone
from stabreduce.gmpoly import (
    CoordinateLocus,
    Graded1TAction,
    PolyError,
    fixed_ideal,
    initial_forms,
    parse_polynomial,
    poly_str,
    projectivized_fixed_points,
    reichstein_fixed_points,
    repfixed_certificate,
    saturated_blowup_exceptional,
    saturation_origin,
    strict_transform_exceptional,
    tangent_cone,
    to_poly,
    variables,
    weight_of,
)
from stabreduce.saturation import reichstein_fan

F = "x1*x3^2 + x2^5"
G = "x1*x5 + x4^3"
EX = Graded1TAction.parse((-1, 1, 3), [F])
EX2 = Graded1TAction.parse((-1, 1, 3, 2, 7), [F, G])


def ideal(gens, n):
    return sorted(poly_str(to_poly(g, n)) for g in gens)


def test_weight_of():
    assert weight_of(F, (-1, 1, 3)) == 5
    assert weight_of(G, (-1, 1, 3, 2, 7)) == 6
    assert weight_of("1", (1, 2)) == 0
    with pytest.raises(PolyError):
        weight_of("x1 + x2", (1, 2))
    with pytest.raises(PolyError):
        Graded1TAction.parse((1, 2), ["x1 + x2"])


monomial = st.lists(st.integers(0, 3), min_size=3, max_size=3)


@settings(max_examples=50, deadline=None)
@given(monomial, monomial, st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_weight_additive(a, b, w):
    x = variables(3)
    fa = x[0] ** a[0] * x[1] ** a[1] * x[2] ** a[2]
    fb = x[0] ** b[0] * x[1] ** b[1] * x[2] ** b[2]
    assert weight_of(fa * fb, w) == weight_of(fa, w) + weight_of(fb, w)


def test_parse_errors():
    with pytest.raises(PolyError):
        parse_polynomial("x1 + y", 2)
    with pytest.raises(PolyError):
        parse_polynomial("x3", 2)
    assert poly_str(parse_polynomial("2*x1^2 - x2", 2)) == "2*x1^2 - x2"


def test_fixed_ideal():
    assert ideal(fixed_ideal(EX), 3) == sorted(["x1", "x2", "x3", poly_str(to_poly(F, 3))])
    triv = Graded1TAction.parse((0, 0), ["x1^2 - x2"])
    assert ideal(fixed_ideal(triv), 2) == ["x1^2 - x2"]
    assert ideal(fixed_ideal(Graded1TAction((1, 0))), 2) == ["x1"]


def test_tangent_cone():
    tc = tangent_cone(EX.generators, 3)
    assert tc.method == "initial_forms" and ideal(tc.generators, 3) == ["x1*x3^2"]
    # the initial forms of the pair are x1*x3^2, x1*x5 but they fail the codimension guard
    assert ideal(initial_forms(EX2.generators), 5) == ["x1*x3^2", "x1*x5"]
    with pytest.raises(PolyError):
        tangent_cone(EX2.generators, 5, exact=False)
    tc2 = tangent_cone(EX2.generators, 5)
    assert tc2.method == "groebner"
    assert ideal(tc2.generators, 5) == ["x1*x3^2", "x1*x5", "x3^2*x4^3"]
    hom = [to_poly("x1^2 - x2*x3", 3)]
    assert ideal(tangent_cone(hom, 3).generators, 3) == ["x1^2 - x2*x3"]


def test_fixed_points():
    tc = tangent_cone(EX.generators, 3)
    pts = sorted(f.point() for f in projectivized_fixed_points(tc.generators, EX.weights))
    assert pts == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    tc2 = tangent_cone(EX2.generators, 5)
    assert len(projectivized_fixed_points(tc2.generators, EX2.weights)) == 5
    fp = projectivized_fixed_points([to_poly("x1", 2)], (1, 2))
    assert [f.point() for f in fp] == [(0, 1)]
    # equal weights give a positive-dimensional fixed component
    fp = projectivized_fixed_points([], (1, 1, 2))
    assert sorted(len(f.coords) for f in fp) == [1, 2]


def test_saturation_origin():
    plus, minus = saturation_origin(EX)
    assert ideal(plus, 3) == sorted([poly_str(to_poly(F, 3)), "x1"])
    assert ideal(minus, 3) == sorted([poly_str(to_poly(F, 3)), "x2", "x3"])
    plus, minus = saturation_origin(EX2)
    assert "x1" in ideal(plus, 5)
    assert {"x2", "x3", "x4", "x5"} <= set(ideal(minus, 5))
    plus, minus = saturation_origin(Graded1TAction((1, -1)))
    assert ideal(plus, 2) == ["x2"] and ideal(minus, 2) == ["x1"]


def test_strict_transforms():
    plus, minus = saturation_origin(EX)
    assert strict_transform_exceptional(plus, 3).points() == [(0, 0, 1)]
    assert strict_transform_exceptional(minus, 3).points() == [(1, 0, 0)]
    line = [to_poly("x2", 3), to_poly("x3", 3)]
    assert strict_transform_exceptional(line, 3).points() == [(1, 0, 0)]


def test_reichstein_fixed_points():
    r = reichstein_fixed_points(EX)
    assert r.points() == [(0, 1, 0)]
    r2 = reichstein_fixed_points(EX2)
    assert r2.good_quotient_failure and r2.witness == frozenset({1, 3})
    assert sorted(r2.points()) == [(0, 0, 0, 1, 0), (0, 1, 0, 0, 0)]
    with pytest.raises(PolyError):
        reichstein_fixed_points(Graded1TAction((1, 0)))


def test_saturated_exceptional_examples():
    s = saturated_blowup_exceptional(EX).locus
    assert s == CoordinateLocus(3, (frozenset({2}),), (frozenset({0}), frozenset({1})))
    assert str(s) == "V(x3) \\ (V(x1) ∪ V(x2))"
    assert not s.points()
    s2 = saturated_blowup_exceptional(EX2).locus
    assert s2 == CoordinateLocus(5, (frozenset({2, 4}),), (frozenset({0}), frozenset({1, 3})))
    assert not s2.points()
    s3 = saturated_blowup_exceptional(Graded1TAction((1, -1))).locus
    assert s3 == CoordinateLocus(2, (frozenset(),), (frozenset({0}), frozenset({1})))
    with pytest.raises(PolyError):
        saturated_blowup_exceptional(EX, degree_bound=2)


def toric_exceptional_strata(w):
    """Strata of the exceptional P^(n-1) kept by the toric transform, as supports."""
    n = len(w)
    top = Cone.of(*[e(i, n) for i in range(n)])
    st = reichstein_fan(orthant(list(w)), [top])
    u = top.barycenter()
    out = set()
    for c in st.after.fan.cones:
        if u in c.rays:
            vanish = {i for i in range(n) if e(i, n) in c.rays}
            out.add(frozenset(range(n)) - vanish)
    return out


@pytest.mark.parametrize("seed", range(30))
def test_smooth_representations(seed):
    rng = random.Random(8000 + seed)
    n = rng.randint(2, 4)
    w = tuple(rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(n))
    X = Graded1TAction(w)
    r = reichstein_fixed_points(X)
    assert r.points() == [] and r.fixed == ()
    s = saturated_blowup_exceptional(X).locus
    assert not s.points()
    assert s <= r.exceptional
    assert s.strata == toric_exceptional_strata(w)


def test_repfixed_certificate():
    cert = repfixed_certificate([[1, -1]])
    by = {c["character"]: c for c in cert}
    assert by[(1,)]["cocharacter"] == (1,) and by[(1,)]["plus"] == {0}
    assert by[(-1,)]["cocharacter"] == (-1,) and by[(-1,)]["plus"] == {1}
    cert = repfixed_certificate([[1, 0, 0], [0, 1, 0]])
    by = {c["character"]: c for c in cert}
    assert by[(1, 0)]["cocharacter"] == (1, 0)
    assert (0, 0) not in by
    assert all(c["covers"] for c in cert)
