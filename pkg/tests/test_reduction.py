import json
import random
from dataclasses import replace
from pathlib import Path

import pytest

from helpers import e, orthant, random_stable_orthant
from stabreduce.cones import Cone, Fan
from stabreduce.model import load_model
from stabreduce.reduction import (
    ReductionError,
    as_union,
    dumps_trace,
    reduce,
    trace_to_json,
    union_json,
    verify_trace,
)
from stabreduce.stacks import DiagonalizableGroup, MonomialStack, ToricStack, ToricUnion

GOLDEN = Path(__file__).parent / "golden"


def test_refuses_unstable_input():
    with pytest.raises(ReductionError):
        reduce(orthant([1]))
    with pytest.raises(ReductionError):
        reduce(orthant([1, 0]))


def test_opposite_weights_one_step():
    tr = reduce(orthant([1, -1]))
    assert tr.steps == 1
    assert [p["classification"] for p in tr.final_pieces()] == ["tame"]
    assert tr.final.cones == {Cone.zero(2), Cone.of((1, 1))}
    v = verify_trace(tr)
    assert v.ok, v.failures()


def test_monomial_example():
    X = MonomialStack(3, (frozenset({0, 1}), frozenset({2})), DiagonalizableGroup.torus([1, -1, 0]))
    tr = reduce(X)
    assert tr.steps == 1
    assert tr.stages[0].step.centers == (Cone.of(e(0, 3), e(1, 3), e(2, 3)),)
    assert sorted(p["classification"] for p in tr.final_pieces()) == ["gerbe_over_tame", "tame"]
    assert verify_trace(tr).ok


def test_zero_step_trace():
    tr = reduce(ToricStack(Fan.orthant(2), DiagonalizableGroup(2, (), (2,), ((1, 1),))))
    assert tr.steps == 0
    v = verify_trace(tr)
    assert v.ok
    assert [p["classification"] for p in tr.final_pieces()] == ["tame"]


def test_corrupted_divisor_is_caught():
    tr = reduce(orthant([1, -1]))
    st = tr.stages[0]
    bad_step = replace(st.step, exceptional=frozenset())
    bad = replace(tr, stages=(replace(st, step=bad_step),), final_divisor=frozenset())
    v = verify_trace(bad)
    assert not v.ok
    assert any("divisor update" in name for name, _, _ in v.failures())


def test_corrupted_final_is_caught():
    tr = reduce(orthant([1, -1]))
    bad = replace(tr, final=as_union(orthant([1, -1])))
    assert not verify_trace(bad).ok


def test_divisor_rays_must_exist():
    with pytest.raises(ReductionError):
        reduce(orthant([1, -1]), [(1, 1)])


def lift_union(U: ToricUnion) -> ToricUnion:
    """U × A^1 with the extra coordinate of weight zero."""
    n = U.n
    t = e(n, n + 1)

    def lift(c):
        return Cone(n + 1, tuple(r + (0,) for r in c.rays))

    amb = Fan.from_maximal(n + 1, [Cone(n + 1, lift(c).rays + (t,)) for c in U.ambient.maximal_cones]) \
        if U.ambient.cones else Fan(n + 1, frozenset())
    cones = set()
    for c in U.cones:
        cones |= {lift(c), Cone(n + 1, lift(c).rays + (t,))}
    return ToricUnion(amb, U.group.product_trivial(), tuple(lift(c) for c in U.components), frozenset(cones))


@pytest.mark.parametrize("seed", range(15))
def test_trace_properties(seed):
    rng = random.Random(5000 + seed)
    X = random_stable_orthant(rng, nmax=4, rmax=2)
    tr = reduce(X)
    v = verify_trace(tr)
    assert v.ok, v.failures()
    # idempotence
    assert reduce(tr.final).steps == 0
    # divisor independence
    rays = X.fan.rays
    E0 = rng.sample(rays, rng.randint(0, len(rays)))
    tr2 = reduce(X, E0)
    assert [s.cones for s in tr2.stacks()] == [s.cones for s in tr.stacks()]
    assert verify_trace(tr2).ok
    # product with A^1
    trA = reduce(lift_union(as_union(X)))
    assert trA.steps == tr.steps
    for a, b in zip(trA.stacks(), tr.stacks()):
        assert a.cones == lift_union(b).cones


@pytest.mark.parametrize("name", ["a2_weights_1_-1", "a3_weights_1_1_-1", "xz_yz_weights_1_-1_0", "a2_mu2"])
def test_golden_traces(name):
    m = load_model(name)
    tr = reduce(m.obj)
    assert dumps_trace(tr) == (GOLDEN / f"{name}.trace.json").read_text()


def test_golden_content():
    doc = json.loads((GOLDEN / "a2_weights_1_-1.trace.json").read_text())
    assert doc["format"] == "stabreduce-trace/1"
    assert len(doc["steps"]) == 1
    step = doc["steps"][0]
    assert step["center"] == [[[0, 1], [1, 0]]]
    assert step["barycenters"] == [[1, 1]]
    assert step["stab_profile_before"] == {"0": 3, "1": 1}
    assert step["gms_charts"][0]["charts"] == [{"cone": [[1, 1]], "generators": [[1, 1]]}]
    assert doc["final_pieces"][0]["classification"] == "tame"


def test_large_integers_become_strings():
    big = 2**60
    F = Fan.from_maximal(2, [Cone.of((1, big), (0, 1))])
    U = as_union(ToricStack(F, DiagonalizableGroup.torus([1, -1])))
    doc = union_json(U)
    flat = json.dumps(doc)
    assert f'"{big}"' in flat
    assert json.loads(flat) == doc


def test_trace_without_charts():
    doc = trace_to_json(reduce(orthant([1, -1])), charts=False)
    assert doc["steps"][0]["gms_charts"] == []
