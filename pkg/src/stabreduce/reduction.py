"""The stabilizer reduction loop and an independent trace verifier."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cones import Cone, Fan, is_smooth_cone
from .saturation import UnionStep, monomial_saturated_blowup, union_saturation
from .stacks import (
    MonomialStack,
    StackError,
    ToricStack,
    ToricUnion,
    classify_gerbe,
    minimal_cones,
    monomial_partition,
    stab_profile,
)

Ray = tuple[int, ...]


class ReductionError(StackError):
    pass


@dataclass(frozen=True)
class Stage:
    index: int
    n: int  # maximal stabilizer dimension of an unstable point before the step
    step: UnionStep
    divisor_before: frozenset[Ray]

    @property
    def before(self) -> ToricUnion:
        return self.step.before

    @property
    def after(self) -> ToricUnion:
        return self.step.after

    @property
    def divisor_after(self) -> frozenset[Ray]:
        return self.step.exceptional


@dataclass(frozen=True)
class ReductionTrace:
    initial: ToricUnion
    divisor: frozenset[Ray]
    stages: tuple[Stage, ...]
    final: ToricUnion
    final_divisor: frozenset[Ray]

    @property
    def steps(self) -> int:
        return len(self.stages)

    def final_pieces(self) -> list[dict]:
        """Connected components of the final stack with their classification."""
        return classify_final(self.final)

    def stacks(self) -> list[ToricUnion]:
        return [self.initial] + [s.after for s in self.stages]


def as_union(X) -> ToricUnion:
    if isinstance(X, ToricUnion):
        return X
    if isinstance(X, ToricStack):
        return ToricUnion.from_toric(X)
    if isinstance(X, MonomialStack):
        return ToricUnion.from_monomial(X)
    raise TypeError(f"cannot reduce {type(X).__name__}")


def classify_final(U: ToricUnion) -> list[dict]:
    out = []
    for idx in U.connected_components():
        piece = U.restrict_components(idx)
        dims = {piece.stab_dims[c] for c in piece.cones}
        if dims == {0}:
            kind = "tame"
        elif len(dims) == 1:
            kind = "gerbe_over_tame"
        else:
            kind = "none"
        out.append(
            {
                "components": [list(map(list, U.components[i].rays)) for i in idx],
                "stabilizer_dims": sorted(dims),
                "classification": kind,
            }
        )
    return out


def reduce(X, E0: Iterable[Sequence[int]] = ()) -> ReductionTrace:
    """Run saturated blowups until every point is stable."""
    U = as_union(X)
    if U.is_empty():
        raise ReductionError("empty stack")
    E = frozenset(tuple(r) for r in E0)
    for r in E:
        if r not in U.ambient.rays:
            raise ReductionError(f"divisor ray {r} is not a ray of the stack")
    if not U.is_stable():
        raise ReductionError("input is not stable: some component has no stable point")
    stages = []
    cur, cur_e = U, E
    limit = U.group.free_rank + 1
    while not cur.is_all_stable():
        if len(stages) >= limit:
            raise ReductionError("stabilizer dimension failed to drop")
        part = monomial_partition(cur)
        step = monomial_saturated_blowup(cur, part.center_cones, cur_e)
        stages.append(Stage(len(stages), part.n, step, cur_e))
        cur, cur_e = step.after, step.exceptional
    return ReductionTrace(U, E, tuple(stages), cur, cur_e)


# ---------------------------------------------------------------- verification


@dataclass
class Verification:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> list[tuple[str, bool, str]]:
        return [c for c in self.checks if not c[1]]


def _unstable_max(U: ToricUnion) -> int | None:
    st = U.stable_cones
    vals = [U.stab_dims[c] for c in U.cones if c not in st]
    return max(vals) if vals else None


def _image_cone(old: Fan, c: Cone) -> Cone:
    """Smallest cone of the old fan containing c (the orbit c maps into)."""
    from .cones import cone_contains

    best = None
    for k in old.cones:
        if all(cone_contains(k, r) for r in c.rays):
            if best is None or len(k.rays) < len(best.rays):
                best = k
    if best is None:
        raise ReductionError(f"{c} is not supported on the old fan")
    return best


def verify_trace(trace: ReductionTrace) -> Verification:
    """Recheck every stage of a trace from its raw cone data."""
    V = Verification()
    r = trace.initial.group.free_rank
    V.add("steps <= dim G", trace.steps <= r, f"{trace.steps} steps, rank {r}")
    V.add("input stable", trace.initial.is_stable())
    cur_e = trace.divisor
    for st in trace.stages:
        tag = f"step {st.index}"
        U, U2 = st.before, st.after
        dims = U.stab_dims
        stable = U.stable_cones
        n = _unstable_max(U)
        V.add(f"{tag}: recorded n", n == st.n, f"{n} vs {st.n}")
        want = frozenset(c for c in U.cones if c not in stable and dims[c] == n)
        got = frozenset(c for c in U.cones if any(s.is_face_of(c) for s in st.step.centers))
        V.add(f"{tag}: center is the unstable max locus", want == got)
        for c in st.step.centers:
            V.add(f"{tag}: center {c.label()} smooth", is_smooth_cone(c))
        V.add(f"{tag}: divisor input", st.divisor_before == cur_e)
        new_rays = set(st.step.barycenters) | {c.rays[0] for c in st.step.centers if len(c.rays) == 1}
        exp_e = (new_rays | set(cur_e)) & set(U2.ambient.rays)
        V.add(f"{tag}: divisor update", st.divisor_after == frozenset(exp_e))
        V.add(f"{tag}: ambient smooth", U2.ambient.is_smooth())
        sat = union_saturation(U, st.step.centers)
        C = frozenset(c for c in U.cones if any(s.is_face_of(c) for s in st.step.centers))
        pre = frozenset()
        if U2.cones:
            pre = frozenset(c for c in U2.cones if _image_cone(U.ambient, c) in C)
        V.add(f"{tag}: iso off the saturation", (U2.cones - pre) == (U.cones - sat))
        V.add(f"{tag}: output stable", U2.is_empty() or U2.is_stable())
        n2 = _unstable_max(U2) if U2.cones else None
        V.add(f"{tag}: unstable stabilizer dim drops", n2 is None or n2 < n, f"{n2} < {n}")
        cur_e = st.divisor_after
    F = trace.final
    V.add("final divisor", trace.final_divisor == cur_e)
    V.add("final all stable", F.is_all_stable())
    pieces = classify_final(F)
    V.add("final locally constant stabilizers", all(len(p["stabilizer_dims"]) == 1 for p in pieces))
    V.add("final tame or gerbe", all(p["classification"] != "none" for p in pieces))
    if all(trace.initial.stab_dims[t] == 0 for t in trace.initial.components):
        V.add("properly stable input ends tame", all(p["classification"] == "tame" for p in pieces))
    s0 = trace.initial.stable_cones
    E0, En = trace.divisor, trace.final_divisor
    off0 = frozenset(c for c in s0 if not set(c.rays) & set(E0))
    offn = frozenset(c for c in F.cones if not set(c.rays) & set(En))
    V.add("iso over the stable locus off E", off0 == offn)
    return V


# ---------------------------------------------------------------- serialization


def _num(x: int):
    return x if -(2**53) <= x <= 2**53 else str(x)


def _vec(v) -> list:
    return [_num(int(x)) for x in v]


def _cones(cs) -> list:
    return [[_vec(r) for r in c.rays] for c in sorted(cs, key=lambda c: (len(c.rays), c.rays))]


def union_json(U: ToricUnion) -> dict:
    return {
        "components": _cones(U.components),
        "cones": _cones(U.cones),
        "stabilizer_profile": {str(k): v for k, v in stab_profile(U.stab_dims.values()).items()},
    }


def trace_to_json(trace: ReductionTrace, charts: bool = True) -> dict:
    from .gms import ChartLimit, invariant_chart

    steps = []
    for st in trace.stages:
        gms = []
        if charts:
            for i, Z in enumerate(st.after.component_stacks):
                entry = {"component": _cones([st.after.components[i]])[0]}
                try:
                    entry["charts"] = [
                        {"cone": _cones([c])[0], "generators": [_vec(g) for g in invariant_chart(Z, c).generators]}
                        for c in Z.fan.maximal_cones
                    ]
                except ChartLimit as e:
                    entry["charts"] = None
                    entry["note"] = str(e)
                gms.append(entry)
        steps.append(
            {
                "index": st.index,
                "n": st.n,
                "center": _cones(st.step.centers),
                "center_structure": "reduced",
                "barycenters": [_vec(u) for u in st.step.barycenters],
                "deleted_cones": _cones(st.step.deleted),
                "exceptional_rays": [_vec(r) for r in sorted(st.divisor_after)],
                "stab_profile_before": {str(k): v for k, v in stab_profile(st.before.stab_dims.values()).items()},
                "stab_profile_after": {str(k): v for k, v in stab_profile(st.after.stab_dims.values()).items()},
                "after": union_json(st.after),
                "gms_charts": gms,
            }
        )
    return {
        "format": "stabreduce-trace/1",
        "group": trace.initial.group.to_json(),
        "initial": union_json(trace.initial),
        "initial_divisor": [_vec(r) for r in sorted(trace.divisor)],
        "steps": steps,
        "final": union_json(trace.final),
        "final_divisor": [_vec(r) for r in sorted(trace.final_divisor)],
        "final_pieces": trace.final_pieces(),
    }


def dumps_trace(trace: ReductionTrace, charts: bool = True) -> str:
    return json.dumps(trace_to_json(trace, charts), indent=2, sort_keys=True) + "\n"
