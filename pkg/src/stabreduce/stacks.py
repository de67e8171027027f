"""Toric quotient stacks [X(Σ)/G] and unions of their orbit closures.

A diagonalizable group G acts on a toric variety through characters of the
dense torus. Everything here is decided on cones: the orbit of a cone σ is a
point of the stack, its closure is the star of σ.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .cones import Cone, Fan, FanError, is_smooth_cone
from .linalg import (
    LinalgError,
    as_int_matrix,
    intersection_dim,
    inverse,
    kernel_lattice,
    matvec,
    rank,
    smith_normal_form,
)


class StackError(ValueError):
    pass


# ---------------------------------------------------------------- groups


@dataclass(frozen=True)
class DiagonalizableGroup:
    """G = D(A) with A = Z^r ⊕ ⊕ Z/d_k, acting on coordinates of M = Z^n.

    ``free_weights[i][j]`` is the i-th free component of the weight of the
    j-th basis character of M; ``torsion_weights[k][j]`` is its class mod
    ``torsion[k]``.
    """

    n: int
    free_weights: tuple[tuple[int, ...], ...] = ()
    torsion: tuple[int, ...] = ()
    torsion_weights: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        fw = tuple(tuple(int(x) for x in row) for row in self.free_weights)
        tw = tuple(tuple(int(x) for x in row) for row in self.torsion_weights)
        if any(len(row) != self.n for row in fw + tw):
            raise StackError("weight rows must have one entry per coordinate")
        if len(tw) != len(self.torsion):
            raise StackError("one torsion weight row per torsion factor")
        if any(d < 2 for d in self.torsion):
            raise StackError("torsion orders must be at least 2")
        tw = tuple(tuple(x % d for x in row) for row, d in zip(tw, self.torsion))
        object.__setattr__(self, "free_weights", fw)
        object.__setattr__(self, "torsion_weights", tw)
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))

    @classmethod
    def torus(cls, weights: Sequence[Sequence[int]] | Sequence[int]) -> "DiagonalizableGroup":
        """A torus from an r × n weight matrix (a flat list means r = 1)."""
        rows = [list(weights)] if weights and isinstance(weights[0], int) else [list(r) for r in weights]
        return cls(len(rows[0]), tuple(tuple(r) for r in rows))

    @classmethod
    def from_presentation(
        cls, relations: Sequence[Sequence[int]], weights: Sequence[Sequence[int]]
    ) -> "DiagonalizableGroup":
        """A = Z^s / (rows of ``relations``), weights given as an s × n matrix."""
        W = as_int_matrix(weights)
        s = len(W)
        n = len(W[0]) if W else 0
        if not relations:
            return cls(n, tuple(tuple(r) for r in W))
        R = as_int_matrix(relations, s)
        D, P, Q = smith_normal_form(R)
        Qinv = [[int(x) for x in row] for row in inverse(Q)]
        # in the coordinates y = Q^{-1} x the relations are diagonal
        Y = [[sum(Qinv[i][k] * W[k][j] for k in range(s)) for j in range(n)] for i in range(s)]
        diag = [abs(D[i][i]) if i < len(D) else 0 for i in range(s)]
        free, tors, tw = [], [], []
        for i in range(s):
            d = diag[i]
            if d == 1:
                continue
            if d == 0:
                free.append(tuple(Y[i]))
            else:
                tors.append(d)
                tw.append(tuple(Y[i]))
        return cls(n, tuple(free), tuple(tors), tuple(tw))

    @property
    def free_rank(self) -> int:
        return len(self.free_weights)

    @cached_property
    def weight_rank(self) -> int:
        return rank([list(r) for r in self.free_weights]) if self.free_weights else 0

    @property
    def kernel_dim(self) -> int:
        """Dimension of the kernel of G → T."""
        return self.free_rank - self.weight_rank

    def cocharacter_span(self) -> list[list[int]]:
        """Spanning vectors of N_G ⊗ Q inside N ⊗ Q."""
        return [list(r) for r in self.free_weights]

    def weight_of(self, m: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        free = tuple(sum(a * b for a, b in zip(row, m)) for row in self.free_weights)
        tors = tuple(
            sum(a * b for a, b in zip(row, m)) % d for row, d in zip(self.torsion_weights, self.torsion)
        )
        return free, tors

    def is_invariant(self, m: Sequence[int]) -> bool:
        f, t = self.weight_of(m)
        return not any(f) and not any(t)

    @cached_property
    def invariant_lattice(self) -> list[tuple[int, ...]]:
        """Basis of K = {m ∈ M : m is G-invariant}."""
        n, t = self.n, len(self.torsion)
        rows = [list(r) + [0] * t for r in self.free_weights]
        for k, (row, d) in enumerate(zip(self.torsion_weights, self.torsion)):
            rows.append(list(row) + [-d if j == k else 0 for j in range(t)])
        if not rows:
            return [tuple(int(i == j) for j in range(n)) for i in range(n)]
        ker = kernel_lattice(rows, n + t)
        return [tuple(v[:n]) for v in ker]

    def project(self, B: Sequence[Sequence[int]]) -> "DiagonalizableGroup":
        """Action on a quotient torus whose character lattice has basis rows of B."""
        m = len(B)
        fw = tuple(tuple(sum(row[j] * b[j] for j in range(self.n)) for b in B) for row in self.free_weights)
        tw = tuple(
            tuple(sum(row[j] * b[j] for j in range(self.n)) for b in B) for row in self.torsion_weights
        )
        return DiagonalizableGroup(m, fw, self.torsion, tw)

    def product_trivial(self, extra: int = 1) -> "DiagonalizableGroup":
        """Same group acting with weight zero on extra coordinates."""
        z = (0,) * extra
        return DiagonalizableGroup(
            self.n + extra,
            tuple(r + z for r in self.free_weights),
            self.torsion,
            tuple(r + z for r in self.torsion_weights),
        )

    def to_json(self) -> dict:
        weights = []
        for j in range(self.n):
            weights.append([r[j] for r in self.free_weights] + [r[j] for r in self.torsion_weights])
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "weights": weights}


# ---------------------------------------------------------------- toric stacks


def _stab_dim(group: DiagonalizableGroup, sigma: Cone) -> int:
    span = [list(r) for r in sigma.rays]
    gspan = group.cocharacter_span()
    inter = intersection_dim(span, gspan, group.n) if span and gspan else 0
    return group.kernel_dim + inter


@dataclass(frozen=True)
class ToricStack:
    fan: Fan
    group: DiagonalizableGroup

    def __post_init__(self):
        if self.fan.n != self.group.n:
            raise StackError(f"group acts on Z^{self.group.n}, fan lives in Z^{self.fan.n}")
        for c in self.fan.maximal_cones:
            if not is_smooth_cone(c):
                raise StackError(f"{c} is not smooth")

    @property
    def n(self) -> int:
        return self.fan.n

    def stabilizer_dim(self, sigma: Cone) -> int:
        return stabilizer_dim(self, sigma)

    @cached_property
    def stab_dims(self) -> dict[Cone, int]:
        return {c: _stab_dim(self.group, c) for c in self.fan.cones}

    def is_empty(self) -> bool:
        return self.fan.is_empty()


def stabilizer_dim(X: ToricStack, sigma: Cone) -> int:
    if sigma not in X.fan:
        raise StackError(f"{sigma} is not a cone of the fan")
    return X.stab_dims[sigma] if "stab_dims" in X.__dict__ else _stab_dim(X.group, sigma)


def minimal_cones(cones: Iterable[Cone]) -> list[Cone]:
    cs = sorted(set(cones), key=lambda c: (len(c.rays), c.rays))
    out: list[Cone] = []
    for c in cs:
        if not any(m.is_face_of(c) for m in out):
            out.append(c)
    return out


def upward_closure(cones: Iterable[Cone], within: Iterable[Cone]) -> frozenset[Cone]:
    mins = minimal_cones(cones)
    return frozenset(c for c in within if any(m.is_face_of(c) for m in mins))


def max_locus(X: ToricStack) -> list[Cone]:
    """Minimal cones of maximal stabilizer dimension; their stars are disjoint."""
    if X.is_empty():
        raise StackError("empty stack")
    dims = X.stab_dims
    top = max(dims.values())
    mins = minimal_cones(c for c, d in dims.items() if d == top)
    for a, b in combinations(mins, 2):
        if any(a.is_face_of(c) and b.is_face_of(c) for c in X.fan.cones):
            raise StackError(f"maximal-stabilizer cones {a} and {b} share an orbit closure")
    return mins


@dataclass(frozen=True)
class StabilityReport:
    d: int  # stabilizer dimension of the generic orbit
    N: int  # maximal stabilizer dimension
    stable_cones: frozenset[Cone]
    classification: str  # properly_stable | stable_not_proper | not_stable

    def to_json(self) -> dict:
        return {
            "generic_stabilizer_dim": self.d,
            "max_stabilizer_dim": self.N,
            "classification": self.classification,
            "stable_cones": [[list(r) for r in c.rays] for c in sorted(self.stable_cones, key=_key)],
        }


def _key(c: Cone):
    return (len(c.rays), c.rays)


def stable_locus(X: ToricStack) -> StabilityReport:
    from .saturation import saturated_cones

    if X.is_empty():
        raise StackError("empty stack")
    zero = Cone.zero(X.n)
    if zero not in X.fan:
        raise StackError("fan lacks the zero cone")
    dims = X.stab_dims
    d = dims[zero]
    N = max(dims.values())
    bad = minimal_cones(c for c, k in dims.items() if k > d)
    sat = saturated_cones(X, bad) if bad else frozenset()
    stable = frozenset(X.fan.cones) - sat
    if not stable:
        cls = "not_stable"
    elif d == 0:
        cls = "properly_stable"
    else:
        cls = "stable_not_proper"
    return StabilityReport(d, N, stable, cls)


def classify_gerbe(X: ToricStack) -> str:
    """tame | gerbe_over_tame | none, from the stabilizer dimensions."""
    dims = set(X.stab_dims.values())
    if not dims or dims == {0}:
        return "tame"
    if len(dims) == 1:
        return "gerbe_over_tame"
    return "none"


def stab_profile(dims: Iterable[int]) -> dict[int, int]:
    return dict(sorted(Counter(dims).items()))


# ---------------------------------------------------------------- unions


def projection_basis(tau: Cone) -> list[tuple[int, ...]]:
    """Rows B with v ↦ B v an iso N / span(tau) ≅ Z^(n - dim tau)."""
    if not tau.rays:
        return [tuple(int(i == j) for j in range(tau.dim_ambient)) for i in range(tau.dim_ambient)]
    return kernel_lattice([list(r) for r in tau.rays], tau.dim_ambient)


def project_cone(B, tau: Cone, kappa: Cone) -> Cone:
    m = len(B)
    rays = tuple(tuple(matvec(B, r)) for r in kappa.rays if r not in tau.rays)
    return Cone(m, rays)


@dataclass(frozen=True)
class ToricUnion:
    """A reduced union of orbit closures V(τ_i) of a smooth toric variety.

    ``cones`` lists the orbits belonging to the union; component i consists
    of the cones containing ``components[i]``.
    """

    ambient: Fan
    group: DiagonalizableGroup
    components: tuple[Cone, ...]
    cones: frozenset[Cone]

    def __post_init__(self):
        object.__setattr__(self, "cones", frozenset(self.cones))
        object.__setattr__(self, "components", tuple(sorted(set(self.components), key=_key)))
        if not self.ambient.is_smooth():
            raise StackError("ambient fan must be smooth")
        if self.group.n != self.ambient.n:
            raise StackError("group and ambient dimension differ")
        for a, b in combinations(self.components, 2):
            if a.is_face_of(b) or b.is_face_of(a):
                raise StackError(f"components {a} and {b} are nested")
        for c in self.cones:
            if c not in self.ambient:
                raise StackError(f"{c} is not an ambient cone")
            if not any(t.is_face_of(c) for t in self.components):
                raise StackError(f"{c} lies on no component")
        for i, t in enumerate(self.components):
            if t not in self.cones:
                raise StackError(f"component {t} has no generic orbit")
            for c in self.component_cones(i):
                extra = [r for r in c.rays if r not in t.rays]
                for k in range(len(extra)):
                    for sub in combinations(extra, k):
                        if Cone(self.n, t.rays + sub) not in self.cones:
                            raise StackError(f"component {t} is not closed at {c}")

    @property
    def n(self) -> int:
        return self.ambient.n

    @classmethod
    def from_toric(cls, X: ToricStack) -> "ToricUnion":
        if X.is_empty():
            return cls(X.fan, X.group, (), frozenset())
        return cls(X.fan, X.group, (Cone.zero(X.n),), X.fan.cones)

    @classmethod
    def from_monomial(cls, X: "MonomialStack") -> "ToricUnion":
        n = X.n
        amb = Fan.orthant(n)
        e = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        comps = tuple(Cone(n, tuple(e[j] for j in sorted(S))) for S in X.supports)
        cones = frozenset(c for c in amb.cones if any(t.is_face_of(c) for t in comps))
        return cls(amb, X.group, comps, cones)

    def is_empty(self) -> bool:
        return not self.cones

    def component_cones(self, i: int) -> frozenset[Cone]:
        t = self.components[i]
        return frozenset(c for c in self.cones if t.is_face_of(c))

    def components_at(self, c: Cone) -> list[int]:
        return [i for i, t in enumerate(self.components) if t.is_face_of(c)]

    @cached_property
    def bases(self) -> list[list[tuple[int, ...]]]:
        return [projection_basis(t) for t in self.components]

    def component_stack(self, i: int) -> ToricStack:
        t, B = self.components[i], self.bases[i]
        cones = [project_cone(B, t, c) for c in self.component_cones(i)]
        return ToricStack(Fan(len(B), frozenset(cones)), self.group.project(B))

    @cached_property
    def component_stacks(self) -> list[ToricStack]:
        return [self.component_stack(i) for i in range(len(self.components))]

    @cached_property
    def stab_dims(self) -> dict[Cone, int]:
        return {c: _stab_dim(self.group, c) for c in self.cones}

    @cached_property
    def stable_cones(self) -> frozenset[Cone]:
        """Cones stable in every component through them."""
        per = []
        for i, Z in enumerate(self.component_stacks):
            per.append(stable_locus(Z).stable_cones)
        out = set()
        for c in self.cones:
            ok = True
            for i in self.components_at(c):
                if project_cone(self.bases[i], self.components[i], c) not in per[i]:
                    ok = False
                    break
            if ok:
                out.add(c)
        return frozenset(out)

    def is_stable(self) -> bool:
        """Every component meets the stable locus."""
        st = self.stable_cones
        return all(t in st for t in self.components)

    def is_all_stable(self) -> bool:
        return self.stable_cones == self.cones

    def connected_components(self) -> list[list[int]]:
        k = len(self.components)
        parent = list(range(k))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for c in self.cones:
            idx = self.components_at(c)
            for a in idx[1:]:
                parent[find(a)] = find(idx[0])
        groups: dict[int, list[int]] = {}
        for i in range(k):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def restrict_components(self, idx: Sequence[int]) -> "ToricUnion":
        comps = tuple(self.components[i] for i in idx)
        cones = frozenset(c for c in self.cones if any(t.is_face_of(c) for t in comps))
        return ToricUnion(minimal_ambient(self.ambient, cones), self.group, comps, cones)

    def as_toric_stack(self) -> ToricStack:
        """The single-component case as a toric stack over the quotient lattice."""
        if len(self.components) != 1:
            raise StackError("not irreducible")
        return self.component_stacks[0]

    def to_json(self) -> dict:
        amb = self.ambient.rays
        index = {r: i for i, r in enumerate(amb)}
        return {
            "rays": [list(r) for r in amb],
            "components": [sorted(index[r] for r in t.rays) for t in self.components],
            "cones": sorted(sorted(index[r] for r in c.rays) for c in self.cones),
        }


def minimal_ambient(ambient: Fan, cones: Iterable[Cone]) -> Fan:
    cones = list(cones)
    if not cones:
        return Fan(ambient.n, frozenset())
    return Fan.from_maximal(ambient.n, cones)


# ---------------------------------------------------------------- monomial stacks


@dataclass(frozen=True)
class MonomialStack:
    """[X/G] with X ⊂ A^n a union of coordinate subspaces V(x_j : j ∈ S)."""

    n: int
    supports: tuple[frozenset[int], ...]
    group: DiagonalizableGroup

    def __post_init__(self):
        sups = tuple(sorted({frozenset(s) for s in self.supports}, key=lambda s: (len(s), sorted(s))))
        if not sups:
            raise StackError("at least one component is required")
        for s in sups:
            if any(j < 0 or j >= self.n for j in s):
                raise StackError(f"support {sorted(s)} out of range")
        for a, b in combinations(sups, 2):
            if a <= b or b <= a:
                raise StackError("component supports must be pairwise incomparable")
        if self.group.n != self.n:
            raise StackError("group acts on a different number of coordinates")
        object.__setattr__(self, "supports", sups)

    def point_stab_dim(self, zeros: Iterable[int]) -> int:
        """Stabilizer dimension at points whose vanishing coordinates are ``zeros``."""
        T = set(zeros)
        if not any(S <= T for S in self.supports):
            raise StackError("point is not on the union")
        cols = [j for j in range(self.n) if j not in T]
        W = [[row[j] for j in cols] for row in self.group.free_weights]
        return self.group.free_rank - (rank(W) if cols and W else 0)


@dataclass(frozen=True)
class Partition:
    """Stratification by stabilizer dimension and stability of a union."""

    N: int
    n: int | None
    stable: dict[int, frozenset[Cone]]
    le_n: frozenset[Cone]
    stable_n_closure: frozenset[Cone]
    star: frozenset[Cone]
    star_closure: frozenset[Cone]
    center: frozenset[Cone]

    @property
    def center_cones(self) -> list[Cone]:
        return minimal_cones(self.center)


def monomial_partition(X: "MonomialStack | ToricUnion") -> Partition:
    U = ToricUnion.from_monomial(X) if isinstance(X, MonomialStack) else X
    if U.is_empty():
        raise StackError("empty stack")
    dims = U.stab_dims
    st = U.stable_cones
    N = max(dims.values())
    unstable = [c for c in U.cones if c not in st]
    stable_by = {}
    for c in st:
        stable_by.setdefault(dims[c], set()).add(c)
    stable_by = {k: frozenset(v) for k, v in sorted(stable_by.items())}
    if not unstable:
        return Partition(N, None, stable_by, frozenset(), frozenset(), frozenset(), frozenset(), frozenset())
    n = max(dims[c] for c in unstable)
    le_n = frozenset(c for c in U.cones if dims[c] <= n)
    sn_closure = upward_closure(stable_by.get(n, ()), U.cones)
    star = le_n - sn_closure
    star_closure = upward_closure(star, U.cones)
    center = frozenset(c for c in star_closure if dims[c] == n)
    return Partition(N, n, stable_by, le_n, sn_closure, star, star_closure, center)
