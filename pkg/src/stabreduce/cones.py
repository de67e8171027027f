"""Rational polyhedral cones and fans with exact membership tests."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .linalg import elementary_divisors, primitive, rank, solve, transpose
from .polyhedral import find_point

Ray = tuple[int, ...]


class FanError(ValueError):
    pass


def _ray(v: Sequence[int]) -> Ray:
    r = primitive(v)
    if not any(r):
        raise FanError("zero vector is not a ray")
    return r


@dataclass(frozen=True, order=True)
class Cone:
    """A cone given by primitive generators, kept sorted."""

    dim_ambient: int
    rays: tuple[Ray, ...]

    def __post_init__(self):
        rs = tuple(sorted({_ray(r) for r in self.rays}))
        for r in rs:
            if len(r) != self.dim_ambient:
                raise FanError(f"ray {r} does not live in Z^{self.dim_ambient}")
        object.__setattr__(self, "rays", rs)

    @classmethod
    def of(cls, *rays: Sequence[int], n: int | None = None) -> "Cone":
        if n is None:
            if not rays:
                raise FanError("ambient dimension needed for the zero cone")
            n = len(rays[0])
        return cls(n, tuple(tuple(r) for r in rays))

    @classmethod
    def zero(cls, n: int) -> "Cone":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return rank([list(r) for r in self.rays]) if self.rays else 0

    def __len__(self) -> int:
        return len(self.rays)

    def __contains__(self, ray) -> bool:
        return tuple(ray) in self.rays

    def is_face_of(self, other: "Cone") -> bool:
        """Face relation inside a simplicial fan: generator inclusion."""
        return set(self.rays) <= set(other.rays)

    def join(self, other: "Cone") -> "Cone":
        return Cone(self.dim_ambient, self.rays + other.rays)

    def without(self, ray) -> "Cone":
        return Cone(self.dim_ambient, tuple(r for r in self.rays if r != tuple(ray)))

    def barycenter(self) -> Ray:
        if not self.rays:
            raise FanError("zero cone has no barycenter")
        return tuple(sum(c) for c in zip(*self.rays))

    def span(self) -> list[list[int]]:
        return [list(r) for r in self.rays]

    def label(self) -> str:
        return "{" + ",".join("(" + ",".join(map(str, r)) + ")" for r in self.rays) + "}"

    def __repr__(self) -> str:
        return f"Cone{self.label()}"


def cone_contains(c: Cone, v: Sequence[int], relint: bool = False) -> bool:
    """Exact test of v ∈ c (or v in the relative interior of c)."""
    v = [Fraction(x) for x in v]
    if len(v) != c.dim_ambient:
        raise FanError("dimension mismatch")
    k = len(c.rays)
    if k == 0:
        return not any(v)
    eq = transpose(c.span(), k)
    ineqs = [(tuple(int(i == j) for j in range(k)), 0, relint) for i in range(k)]
    return find_point(eq, v, ineqs, k) is not None


def is_smooth_cone(c: Cone) -> bool:
    """Generators are part of a lattice basis."""
    if not c.rays:
        return True
    ed = elementary_divisors(c.span())
    return len(ed) == len(c.rays) and all(d == 1 for d in ed)


def faces(c: Cone) -> list[Cone]:
    if not is_smooth_cone(c):
        raise FanError(f"{c} is not smooth")
    out = []
    for k in range(len(c.rays) + 1):
        for sub in combinations(c.rays, k):
            out.append(Cone(c.dim_ambient, sub))
    return sorted(out, key=_cone_key)


def _cone_key(c: Cone):
    return (len(c.rays), c.rays)


def relint_point(c: Cone) -> Ray:
    return c.barycenter() if c.rays else tuple([0] * c.dim_ambient)


def minimal_containing(cones: Iterable[Cone], v: Sequence[int]) -> Cone | None:
    """The cone whose relative interior contains v, among a fan's cones."""
    for c in sorted(cones, key=_cone_key):
        if cone_contains(c, v, relint=True):
            return c
    return None


@dataclass(frozen=True)
class Fan:
    """A finite set of simplicial cones closed under taking faces."""

    n: int
    cones: frozenset[Cone] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "cones", frozenset(self.cones))
        for c in self.cones:
            if c.dim_ambient != self.n:
                raise FanError("cone in the wrong ambient space")
            if c.rays and len(c.rays) != c.dim:
                raise FanError(f"{c} is not simplicial")
            for k in range(len(c.rays)):
                for sub in combinations(c.rays, k):
                    if Cone(self.n, sub) not in self.cones:
                        raise FanError(f"{c} has a face missing from the fan")

    @classmethod
    def from_maximal(cls, n: int, maximal: Iterable[Cone | Sequence[Sequence[int]]]) -> "Fan":
        cones: set[Cone] = set()
        any_given = False
        for m in maximal:
            any_given = True
            c = m if isinstance(m, Cone) else Cone(n, tuple(tuple(r) for r in m))
            if c.rays and len(c.rays) != c.dim:
                raise FanError(f"{c} is not simplicial")
            for k in range(len(c.rays) + 1):
                for sub in combinations(c.rays, k):
                    cones.add(Cone(n, sub))
        if not any_given:
            return cls(n, frozenset())
        return cls(n, frozenset(cones))

    @classmethod
    def orthant(cls, n: int, coords: Iterable[int] | None = None) -> "Fan":
        idx = range(n) if coords is None else coords
        basis = [tuple(int(i == j) for j in range(n)) for i in idx]
        return cls.from_maximal(n, [Cone(n, tuple(basis))])

    @classmethod
    def empty(cls, n: int) -> "Fan":
        return cls(n, frozenset())

    def __contains__(self, c) -> bool:
        return c in self.cones

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.cones)

    def sorted(self) -> list[Cone]:
        return sorted(self.cones, key=_cone_key)

    @cached_property
    def maximal_cones(self) -> list[Cone]:
        cs = self.sorted()
        return [c for c in cs if not any(c != d and c.is_face_of(d) for d in cs)]

    @cached_property
    def rays(self) -> list[Ray]:
        return sorted({r for c in self.cones for r in c.rays})

    def is_empty(self) -> bool:
        return not self.cones

    def is_smooth(self) -> bool:
        return all(is_smooth_cone(c) for c in self.maximal_cones)

    def star(self, tau: Cone) -> frozenset[Cone]:
        """Cones containing tau as a face: the orbit closure of tau."""
        return frozenset(c for c in self.cones if tau.is_face_of(c))

    def containing(self, rays: Iterable[Ray]) -> frozenset[Cone]:
        rs = set(rays)
        return frozenset(c for c in self.cones if rs <= set(c.rays))

    def restrict(self, keep: Iterable[Cone]) -> "Fan":
        return Fan(self.n, frozenset(keep))

    def to_json(self) -> dict:
        rays = self.rays
        index = {r: i for i, r in enumerate(rays)}
        return {
            "dimension": self.n,
            "rays": [list(r) for r in rays],
            "cones": [sorted(index[r] for r in c.rays) for c in self.maximal_cones],
        }

    def to_dot(self, name: str = "fan") -> str:
        """Face poset of the fan as a DOT digraph (edges point to facets)."""
        rays = self.rays
        index = {r: i for i, r in enumerate(rays)}

        def node(c: Cone) -> str:
            return "_".join(["c"] + [str(index[r]) for r in c.rays])

        lines = [f"digraph {name} {{"]
        for i, r in enumerate(rays):
            lines.append(f'  // ray {i} = ({",".join(map(str, r))})')
        for c in self.sorted():
            lbl = "{" + ",".join(str(index[r]) for r in c.rays) + "}"
            lines.append(f'  {node(c)} [label="{lbl}"];')
        for c in self.sorted():
            for r in c.rays:
                lines.append(f"  {node(c)} -> {node(c.without(r))};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"Fan(n={self.n}, maximal={[c.label() for c in self.maximal_cones]})"


def fan_from_json(doc: dict) -> Fan:
    n = int(doc["dimension"])
    rays = [tuple(int(x) for x in r) for r in doc["rays"]]
    cones = [Cone(n, tuple(rays[i] for i in c)) for c in doc["cones"]]
    return Fan.from_maximal(n, cones) if cones else Fan(n, frozenset([Cone.zero(n)]))


def dumps_fan(fan: Fan) -> str:
    return json.dumps(fan.to_json(), sort_keys=True)


def star_subdivision(fan: Fan, sigma0: Cone) -> Fan:
    """Star subdivision at the barycenter of a smooth cone of the fan."""
    if sigma0 not in fan:
        raise FanError(f"{sigma0} is not a cone of the fan")
    if not is_smooth_cone(sigma0):
        raise FanError(f"{sigma0} is not smooth")
    if len(sigma0.rays) <= 1:
        return fan
    u = sigma0.barycenter()
    out: set[Cone] = set()
    for s in fan.cones:
        if not sigma0.is_face_of(s):
            out.add(s)
            continue
        for k in range(len(s.rays) + 1):
            for sub in combinations(s.rays, k):
                tau = Cone(fan.n, sub)
                if sigma0.is_face_of(tau):
                    continue
                out.add(tau)
                out.add(Cone(fan.n, sub + (u,)))
    return Fan(fan.n, frozenset(out))


def orbit_closure_cones(fan: Fan, tau: Cone) -> frozenset[Cone]:
    if tau not in fan:
        raise FanError(f"{tau} is not a cone of the fan")
    return fan.star(tau)
