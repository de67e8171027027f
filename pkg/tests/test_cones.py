import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import solve_independent
from stabreduce.cones import (
    Cone,
    Fan,
    FanError,
    cone_contains,
    dumps_fan,
    fan_from_json,
    faces,
    is_smooth_cone,
    orbit_closure_cones,
    star_subdivision,
)


def e(i, n):
    return tuple(int(j == i) for j in range(n))


def test_cone_contains_examples():
    c = Cone.of((1, 0), (0, 1))
    assert cone_contains(c, (1, 1)) and cone_contains(c, (1, 1), relint=True)
    assert cone_contains(c, (1, 0)) and not cone_contains(c, (1, 0), relint=True)
    assert not cone_contains(Cone.of((1, 0), (1, 1)), (-1, 0))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_cone_contains_against_cramer(v):
    c = Cone.of((1, 0, 0), (1, 1, 0), (1, 2, 3))
    a = solve_independent(list(c.rays), v)
    assert cone_contains(c, v) == all(x >= 0 for x in a)
    assert cone_contains(c, v, relint=True) == all(x > 0 for x in a)


def test_faces():
    assert faces(Cone.of((1,))) == [Cone.zero(1), Cone.of((1,))]
    assert len(faces(Cone.of((1, 0), (0, 1)))) == 4
    assert len(faces(Cone.of(e(0, 3), e(1, 3), e(2, 3)))) == 8
    with pytest.raises(FanError):
        faces(Cone.of((1, 1), (1, -1)))


def test_is_smooth():
    assert is_smooth_cone(Cone.of((1, 0), (0, 1)))
    assert not is_smooth_cone(Cone.of((1, 1), (1, -1)))
    assert is_smooth_cone(Cone.of((2, 1)))


def test_rays_are_primitive_and_sorted():
    c = Cone.of((0, 2), (3, 0))
    assert c.rays == ((0, 1), (1, 0))
    with pytest.raises(FanError):
        Cone.of((0, 0))


def test_star_subdivision_plane():
    F = Fan.orthant(2)
    G = star_subdivision(F, Cone.of((1, 0), (0, 1)))
    assert set(G.maximal_cones) == {Cone.of((1, 0), (1, 1)), Cone.of((0, 1), (1, 1))}


def test_star_subdivision_space():
    F = Fan.orthant(3)
    top = Cone.of(e(0, 3), e(1, 3), e(2, 3))
    G = star_subdivision(F, top)
    u = (1, 1, 1)
    want = {Cone.of(e(i, 3), e(j, 3), u) for i, j in [(0, 1), (0, 2), (1, 2)]}
    assert set(G.maximal_cones) == want


def test_star_subdivision_ray_and_errors():
    F = Fan.orthant(2)
    assert star_subdivision(F, Cone.of((1, 0))) == F
    with pytest.raises(FanError):
        star_subdivision(F, Cone.of((1, 1)))


def test_orbit_closure():
    F = Fan.orthant(2)
    assert orbit_closure_cones(F, Cone.of((1, 0))) == {Cone.of((1, 0)), Cone.of((1, 0), (0, 1))}
    assert orbit_closure_cones(F, Cone.zero(2)) == F.cones
    G = star_subdivision(Fan.orthant(3), Cone.of(e(0, 3), e(1, 3), e(2, 3)))
    t = Cone.of(e(0, 3), e(1, 3))
    assert orbit_closure_cones(G, t) == {t, Cone.of(e(0, 3), e(1, 3), (1, 1, 1))}
    with pytest.raises(FanError):
        orbit_closure_cones(F, Cone.of((1, 1)))


def random_smooth_fan(rng, n):
    """Orthant fan with a few random star subdivisions."""
    F = Fan.orthant(n)
    for _ in range(rng.randint(0, 3)):
        c = rng.choice([c for c in F.cones if len(c.rays) >= 2])
        F = star_subdivision(F, c)
    return F


@pytest.mark.parametrize("seed", range(25))
def test_subdivision_invariants(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    F = random_smooth_fan(rng, n)
    c = rng.choice([c for c in F.cones if len(c.rays) >= 1])
    G = star_subdivision(F, c)
    assert len(G.maximal_cones) >= len(F.maximal_cones)
    assert G.is_smooth()
    # support unchanged: barycenters of old maximal cones are covered, new rays lie in old cones
    for m in F.maximal_cones:
        assert any(cone_contains(k, m.barycenter()) for k in G.maximal_cones)
    for m in G.maximal_cones:
        assert any(cone_contains(k, m.barycenter()) for k in F.maximal_cones)
    # faces and stars agree
    for t in G.cones:
        for s in orbit_closure_cones(G, t):
            assert t in faces(s)


def test_json_round_trip_and_dot():
    G = star_subdivision(Fan.orthant(3), Cone.of(e(0, 3), e(1, 3)))
    doc = json.loads(dumps_fan(G))
    assert fan_from_json(doc) == G
    dot = G.to_dot()
    nodes = [ln.split()[0] for ln in dot.splitlines() if "[label=" in ln]
    assert len(nodes) == len(G.cones) == len(set(nodes))
    assert dot.count("->") == sum(len(c.rays) for c in G.cones)


def test_fan_rejects_missing_faces():
    with pytest.raises(FanError):
        Fan(2, frozenset([Cone.of((1, 0), (0, 1))]))
    with pytest.raises(FanError):
        Fan.from_maximal(2, [[(1, 0), (0, 1), (1, 1)]])
