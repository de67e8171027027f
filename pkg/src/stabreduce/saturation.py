"""Saturation of orbit closures and the Reichstein transform on fans.

A point O_τ lies in the saturation of a closed invariant set C when some
one-parameter subgroup λ of G drives it into C. For toric varieties this is
decided on cones: λ(t)·x_τ has a limit in O_τ' exactly when the image of λ in
N/span(τ) lies in the relative interior of the image of τ'.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .cones import Cone, Fan, FanError, is_smooth_cone, star_subdivision
from .linalg import clear_denominators, matvec, primitive
from .polyhedral import find_point
from .stacks import (
    StackError,
    ToricStack,
    ToricUnion,
    minimal_ambient,
    minimal_cones,
    project_cone,
    stab_profile,
    upward_closure,
)

Ray = tuple[int, ...]


class UnsupportedCenter(StackError):
    pass


@dataclass(frozen=True)
class Witness:
    """A destabilizing one-parameter subgroup: coefficients in G and image in N."""

    coefficients: tuple[int, ...]
    cocharacter: Ray


def destabilizes(X: ToricStack, tau: Cone, tau2: Cone) -> Witness | None:
    """λ ∈ N_G with λ(t)·x_τ → O_τ2 as t → 0, or None.

    The equal-cone case returns None: there is nothing to move.
    """
    if not tau.is_face_of(tau2):
        raise StackError(f"{tau} is not a face of {tau2}")
    if tau == tau2:
        return None
    G = X.group
    r, n = G.free_rank, X.n
    if r == 0:
        return None
    gens = list(tau2.rays)
    k = len(gens)
    # unknowns (mu_1..mu_r, c_1..c_k): W^T mu - sum c_g g = 0
    eq = []
    for i in range(n):
        row = [G.free_weights[a][i] for a in range(r)] + [-g[i] for g in gens]
        eq.append(row)
    ineqs = []
    for j, g in enumerate(gens):
        if g in tau.rays:
            continue
        a = [0] * (r + k)
        a[r + j] = 1
        ineqs.append((tuple(a), 1, False))
    sol = find_point(eq, [0] * n, ineqs, r + k)
    if sol is None:
        return None
    mu = clear_denominators(sol[:r])
    lam = tuple(sum(G.free_weights[a][i] * mu[a] for a in range(r)) for i in range(n))
    return Witness(tuple(mu), lam)


def _check_centers(fan: Fan, centers: Sequence[Cone]) -> list[Cone]:
    cs = sorted(set(centers), key=lambda c: (len(c.rays), c.rays))
    for c in cs:
        if c not in fan:
            raise UnsupportedCenter(f"center {c} is not a cone of the fan")
        if not is_smooth_cone(c) or not c.rays:
            raise UnsupportedCenter(f"center {c} is not a smooth proper orbit closure")
    for a, b in combinations(cs, 2):
        if any(a.is_face_of(k) and b.is_face_of(k) for k in fan.cones):
            raise UnsupportedCenter(f"centers {a} and {b} meet")
    return cs


@dataclass(frozen=True)
class SaturationResult:
    minimal: tuple[Cone, ...]
    witnesses: dict  # Cone -> (target cone, Witness | None)
    cones: frozenset[Cone]


def saturation(X: ToricStack, centers: Sequence[Cone]) -> SaturationResult:
    """π^{-1}(π(C)) for C the union of the orbit closures of ``centers``."""
    for c in centers:
        if c not in X.fan:
            raise StackError(f"{c} is not a cone of the fan")
    C = upward_closure(centers, X.fan.cones)
    sat = set()
    wit: dict = {}
    for tau in sorted(X.fan.cones, key=lambda c: (len(c.rays), c.rays)):
        if tau in C:
            sat.add(tau)
            wit[tau] = (tau, None)
            continue
        for t2 in sorted(C, key=lambda c: (len(c.rays), c.rays)):
            if not tau.is_face_of(t2):
                continue
            w = destabilizes(X, tau, t2)
            if w is not None:
                sat.add(tau)
                wit[tau] = (t2, w)
                break
    mins = tuple(minimal_cones(sat))
    return SaturationResult(mins, {m: wit[m] for m in mins}, frozenset(sat))


def saturated_cones(X: ToricStack, centers: Sequence[Cone]) -> frozenset[Cone]:
    return saturation(X, centers).cones


@dataclass(frozen=True)
class TransformStep:
    """One Reichstein transform of a toric stack."""

    before: ToricStack
    centers: tuple[Cone, ...]
    barycenters: tuple[Ray, ...]
    subdivided: Fan
    saturation: SaturationResult
    deleted: frozenset[Cone]
    after: ToricStack
    exceptional: frozenset[Ray]

    def profile_before(self) -> dict[int, int]:
        return stab_profile(self.before.stab_dims.values())

    def profile_after(self) -> dict[int, int]:
        return stab_profile(self.after.stab_dims.values())


def reichstein_fan(
    X: ToricStack, centers: Sequence[Cone], exceptional: Iterable[Ray] = ()
) -> TransformStep:
    """Saturated blowup of X along the union of the orbit closures of ``centers``.

    The fan is star-subdivided at each center of dimension at least two; then
    the strict transform of the saturation is deleted. Saturation cones that
    contain a center have empty strict transform and delete nothing.
    """
    cs = _check_centers(X.fan, centers)
    sat = saturation(X, cs)
    F = X.fan
    bary = []
    for c in cs:
        if len(c.rays) >= 2:
            F = star_subdivision(F, c)
            bary.append(c.barycenter())
    deleted = set()
    for tau in sat.minimal:
        if any(c.is_face_of(tau) for c in cs):
            continue
        deleted |= F.star(tau)
    out = Fan(X.n, frozenset(F.cones) - deleted)
    after = ToricStack(out, X.group)
    new_e = set(bary) | {c.rays[0] for c in cs if len(c.rays) == 1} | set(exceptional)
    new_e &= set(out.rays)
    return TransformStep(X, tuple(cs), tuple(sorted(bary)), F, sat, frozenset(deleted), after, frozenset(new_e))


def exceptional_direction(center: Cone, chart: Cone) -> tuple[int, ...]:
    """Coordinate point of P(V_center) matching an exceptional cone.

    A cone spanned by the barycenter u and the center's generators other than
    g_i is the fixed point where only the coordinate dual to g_i is nonzero.
    Returns the 0/1 support vector over the center's generators.
    """
    u = center.barycenter()
    if u not in chart.rays:
        raise FanError("cone does not contain the barycenter")
    return tuple(0 if g in chart.rays else 1 for g in center.rays)


# ---------------------------------------------------------------- unions


@dataclass(frozen=True)
class UnionStep:
    """Saturated blowup of a union of orbit closures, done component by component."""

    before: ToricUnion
    centers: tuple[Cone, ...]
    barycenters: tuple[Ray, ...]
    ambient: Fan  # subdivided ambient fan
    component_steps: tuple  # per input component: TransformStep | None (component inside C)
    deleted: frozenset[Cone]
    after: ToricUnion
    exceptional: frozenset[Ray]
    saturation: frozenset[Cone]


def _union_centers(U: ToricUnion, centers: Sequence[Cone]) -> list[Cone]:
    cs = sorted(set(centers), key=lambda c: (len(c.rays), c.rays))
    for c in cs:
        if c not in U.cones:
            raise UnsupportedCenter(f"center {c} is not in the stack")
    return _check_centers(U.ambient, cs)


def union_saturation(U: ToricUnion, centers: Sequence[Cone]) -> frozenset[Cone]:
    """Saturation of a union of orbit closures, computed on each component."""
    sat = set()
    for i, t in enumerate(U.components):
        Z, B = U.component_stacks[i], U.bases[i]
        zc = []
        for s in centers:
            rho = s.join(t)
            if rho in U.cones:
                zc.append(project_cone(B, t, rho))
        if not zc:
            continue
        zsat = saturated_cones(Z, zc)
        for c in U.component_cones(i):
            if project_cone(B, t, c) in zsat:
                sat.add(c)
    return frozenset(sat)


def monomial_saturated_blowup(
    U: ToricUnion, centers: Sequence[Cone], exceptional: Iterable[Ray] = ()
) -> UnionStep:
    """Saturated blowup of a union along disjoint smooth orbit closures."""
    cs = _union_centers(U, centers)
    amb = U.ambient
    bary = []
    for c in cs:
        if len(c.rays) >= 2:
            amb = star_subdivision(amb, c)
            bary.append(c.barycenter())
    steps = []
    new_cones: set[Cone] = set()
    deleted: set[Cone] = set()
    comps = []
    for i, t in enumerate(U.components):
        Z, B = U.component_stacks[i], U.bases[i]
        if any(s.is_face_of(t) for s in cs):
            steps.append(None)
            deleted |= {c for c in amb.cones if t.is_face_of(c)}
            continue
        zc = []
        for s in cs:
            rho = s.join(t)
            if rho in U.cones:
                zc.append(project_cone(B, t, rho))
        st = reichstein_fan(Z, zc)
        steps.append(st)
        keep = st.after.fan.cones
        lifted = set()
        proj_seen = set()
        for c in amb.cones:
            if not t.is_face_of(c):
                continue
            p = project_cone(B, t, c)
            if p in keep:
                lifted.add(c)
                proj_seen.add(p)
            elif p in st.deleted:
                deleted.add(c)
        if proj_seen != set(keep):
            raise StackError(f"component {t}: transform does not lift to the ambient")
        if lifted:
            comps.append((t, frozenset(lifted)))
        new_cones |= lifted
    new_amb = minimal_ambient(amb, new_cones)
    after = ToricUnion(new_amb, U.group, tuple(t for t, _ in comps), frozenset(new_cones))
    for t, lifted in comps:
        i = after.components.index(t)
        if after.component_cones(i) != lifted:
            raise StackError(f"component {t} is not closed in the transformed union")
    new_e = set(bary) | {c.rays[0] for c in cs if len(c.rays) == 1} | set(exceptional)
    new_e &= set(new_amb.rays)
    sat = union_saturation(U, cs)
    return UnionStep(
        U, tuple(cs), tuple(sorted(bary)), amb, tuple(steps), frozenset(deleted - new_cones), after,
        frozenset(new_e), sat,
    )
