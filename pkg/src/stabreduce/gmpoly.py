"""G_m acting linearly on A^n, with invariant subschemes cut out by polynomials.

Exceptional loci of blowups at the origin live in P^(n-1). Every locus
produced here is a union of coordinate subspaces minus another such union,
which is decided exactly by listing coordinate strata
T_s = {x : x_j != 0 iff j ∈ s}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import sympy
from sympy import Poly, groebner, symbols
from sympy.parsing.sympy_parser import parse_expr

from .gms import default_bound


class PolyError(ValueError):
    pass


class LocusError(PolyError):
    """A locus is not a union of coordinate strata."""


_GRAMMAR = re.compile(r"^[\sx0-9+\-*^()]+$")


def variables(n: int):
    return symbols(f"x1:{n + 1}")


def parse_polynomial(text: str, n: int) -> Poly:
    """Parse integer polynomials in x1..xn written with +, -, *, ^ and parentheses."""
    if not _GRAMMAR.match(text):
        raise PolyError(f"unexpected characters in {text!r}")
    for m in re.finditer(r"x(\d+)", text):
        k = int(m.group(1))
        if not 1 <= k <= n:
            raise PolyError(f"variable x{k} outside x1..x{n}")
    xs = variables(n)
    local = {f"x{i + 1}": x for i, x in enumerate(xs)}
    expr = parse_expr(text.replace("^", "**"), local_dict=local, evaluate=True)
    try:
        p = Poly(expr, *xs, domain="ZZ")
    except sympy.polys.polyerrors.PolynomialError as e:
        raise PolyError(str(e)) from e
    return p


def to_poly(f, n: int) -> Poly:
    if isinstance(f, Poly):
        return Poly(f.as_expr(), *variables(n), domain="QQ")
    if isinstance(f, str):
        return Poly(parse_polynomial(f, n).as_expr(), *variables(n), domain="QQ")
    return Poly(f, *variables(n), domain="QQ")


def poly_str(f: Poly) -> str:
    return str(f.as_expr()).replace("**", "^")


def weight_of(f, w: Sequence[int]) -> int:
    """Common weight of the monomials of a homogeneous polynomial."""
    p = to_poly(f, len(w))
    if p.is_zero:
        raise PolyError("zero polynomial has no weight")
    ws = {sum(a * b for a, b in zip(m, w)) for m in p.monoms()}
    if len(ws) != 1:
        raise PolyError(f"{poly_str(p)} is not homogeneous for weights {list(w)}")
    return ws.pop()


@dataclass(frozen=True)
class Graded1TAction:
    """X = V(generators) ⊂ A^n with G_m acting by the given weights."""

    weights: tuple[int, ...]
    generators: tuple[Poly, ...] = ()

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        gens = tuple(to_poly(g, len(w)) for g in self.generators)
        gens = tuple(g for g in gens if not g.is_zero)
        for g in gens:
            weight_of(g, w)
        object.__setattr__(self, "generators", gens)

    @property
    def n(self) -> int:
        return len(self.weights)

    @classmethod
    def parse(cls, weights: Sequence[int], texts: Iterable[str]) -> "Graded1TAction":
        n = len(weights)
        return cls(tuple(weights), tuple(parse_polynomial(t, n) for t in texts))


def fixed_ideal(X: Graded1TAction) -> list[Poly]:
    xs = variables(X.n)
    out = list(X.generators)
    for j, wj in enumerate(X.weights):
        if wj != 0:
            out.append(Poly(xs[j], *xs, domain="QQ"))
    return out


# ---------------------------------------------------------------- tangent cones


def initial_form(f: Poly) -> Poly:
    degs = [sum(m) for m in f.monoms()]
    low = min(degs)
    terms = [(m, c) for m, c in f.terms() if sum(m) == low]
    return Poly.from_dict(dict(terms), *f.gens, domain=f.domain)


def initial_forms(gens: Sequence[Poly]) -> list[Poly]:
    return [initial_form(g) for g in gens if not g.is_zero]


def _monomial_codim(monos: list[tuple[int, ...]], n: int) -> int:
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in monos]
    if any(not s for s in supports):
        return n + 1  # unit ideal
    for k in range(n + 1):
        for cover in combinations(range(n), k):
            c = set(cover)
            if all(s & c for s in supports):
                return k
    return n


def codim(gens: Sequence[Poly], n: int) -> int:
    """Codimension of the ideal in k[x1..xn] via its initial monomial ideal."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return 0
    xs = variables(n)
    G = groebner([g.as_expr() for g in gens], *xs, order="grevlex")
    lead = [Poly(p, *xs).monoms(order="grevlex")[0] for p in G.exprs]
    return _monomial_codim(lead, n)


@dataclass(frozen=True)
class TangentCone:
    generators: tuple[Poly, ...]
    method: str  # "initial_forms" or "groebner"
    initial: tuple[Poly, ...]


def exact_tangent_cone(gens: Sequence[Poly], n: int) -> list[Poly]:
    """Tangent cone at the origin as the special fiber of the rescaling family."""
    xs = variables(n)
    t, s = symbols("_t _s")
    fam = []
    for g in gens:
        if g.is_zero:
            continue
        e = g.as_expr()
        low = min(sum(m) for m in g.monoms())
        scaled = sympy.expand(e.subs({x: t * x for x in xs}, simultaneous=True) / t**low)
        fam.append(scaled)
    if not fam:
        return []
    G = groebner(fam + [1 - s * t], s, t, *xs, order="lex")
    special = []
    for p in G.exprs:
        if p.has(s):
            continue
        q = sympy.expand(p.subs(t, 0))
        if q != 0:
            special.append(q)
    if not special:
        return []
    R = groebner(special, *xs, order="grevlex")
    return [Poly(p, *xs, domain="QQ") for p in R.exprs]


def tangent_cone(gens: Sequence[Poly], n: int, exact: bool = True) -> TangentCone:
    """Tangent cone of V(gens) at the origin.

    When the initial forms cut out the expected codimension they generate the
    tangent cone. Otherwise the cone is computed exactly by a Gröbner
    elimination, or an error is raised when ``exact`` is false.
    """
    gens = [to_poly(g, n) for g in gens]
    gens = [g for g in gens if not g.is_zero]
    ins = initial_forms(gens)
    if not ins or codim(ins, n) == len(ins):
        return TangentCone(tuple(ins), "initial_forms", tuple(ins))
    if not exact:
        raise PolyError("initial forms do not cut the expected codimension")
    return TangentCone(tuple(exact_tangent_cone(gens, n)), "groebner", tuple(ins))


# ---------------------------------------------------------------- coordinate loci


def _restrict(gens: Sequence[Poly], zero: Iterable[int], n: int) -> list:
    xs = variables(n)
    sub = {xs[j]: 0 for j in zero}
    out = []
    for g in gens:
        e = sympy.expand(g.as_expr().subs(sub))
        if e != 0:
            out.append(e)
    return out


def _stratum_status(gens: Sequence[Poly], s: frozenset[int], n: int) -> str:
    """'full', 'empty' or 'partial' for V(gens) ∩ T_s."""
    xs = variables(n)
    rest = _restrict(gens, [j for j in range(n) if j not in s], n)
    if not rest:
        return "full"
    for e in rest:
        if len(Poly(e, *xs).terms()) == 1:
            return "empty"
    z = symbols("_z")
    prod = sympy.Integer(1)
    for j in s:
        prod *= xs[j]
    G = groebner(rest + [1 - z * prod], z, *xs, order="grevlex")
    if G.exprs == [1]:
        return "empty"
    return "partial"


def coordinate_components(gens: Sequence[Poly], n: int, allowed: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Irreducible components of V(gens) ⊂ P^(n-1) as vanishing-coordinate sets.

    Only points supported on ``allowed`` are considered.
    """
    gens = [to_poly(g, n) for g in gens]
    pool = sorted(range(n) if allowed is None else set(allowed))
    full = []
    for k in range(1, len(pool) + 1):
        for s in combinations(pool, k):
            fs = frozenset(s)
            st = _stratum_status(gens, fs, n)
            if st == "partial":
                raise LocusError(f"locus meets the stratum {sorted(j + 1 for j in s)} in a non-coordinate set")
            if st == "full":
                full.append(fs)
    maximal = [s for s in full if not any(s < t for t in full)]
    return sorted((frozenset(range(n)) - s for s in maximal), key=lambda v: (len(v), sorted(v)))


def _support_sets(n: int):
    for k in range(1, n + 1):
        for s in combinations(range(n), k):
            yield frozenset(s)


@dataclass(frozen=True)
class CoordinateLocus:
    """(∪ V(P_i)) minus (∪ V(S_k)) in P^(n-1); sets hold vanishing coordinates."""

    n: int
    positive: tuple[frozenset[int], ...]
    negative: tuple[frozenset[int], ...] = ()

    def contains_support(self, s: frozenset[int]) -> bool:
        if not s:
            return False
        return any(not (s & P) for P in self.positive) and all(s & S for S in self.negative)

    @cached_property
    def strata(self) -> frozenset[frozenset[int]]:
        return frozenset(s for s in _support_sets(self.n) if self.contains_support(s))

    def is_empty(self) -> bool:
        return not self.strata

    def __eq__(self, other) -> bool:
        return isinstance(other, CoordinateLocus) and self.n == other.n and self.strata == other.strata

    def __hash__(self):
        return hash((self.n, self.strata))

    def __le__(self, other: "CoordinateLocus") -> bool:
        return self.strata <= other.strata

    def canonical(self) -> "CoordinateLocus":
        full = frozenset(range(self.n))
        pos = {P for P in self.positive if P != full}
        pos = {P for P in pos if not any(S <= P for S in self.negative)}
        pos = [P for P in pos if not any(Q < P for Q in pos)]
        if not pos:
            return CoordinateLocus(self.n, ())
        common = frozenset.intersection(*pos)
        neg = set()
        for S in self.negative:
            if all(S | P == full for P in pos):
                continue
            neg.add(S - common)
        neg = [S for S in neg if not any(T < S for T in neg)]
        key = lambda v: (len(v), sorted(v))
        return CoordinateLocus(self.n, tuple(sorted(pos, key=key)), tuple(sorted(neg, key=key)))

    def points(self) -> list[tuple[int, ...]]:
        """Coordinate points e_i in the locus, as projective coordinates."""
        out = []
        for i in range(self.n):
            if self.contains_support(frozenset([i])):
                out.append(tuple(int(j == i) for j in range(self.n)))
        return out

    def __str__(self) -> str:
        c = self.canonical()

        def V(S):
            return "V(" + ",".join(f"x{j + 1}" for j in sorted(S)) + ")" if S else f"P^{self.n - 1}"

        if not c.positive:
            return "∅"
        pos = " ∪ ".join(V(P) for P in c.positive)
        if not c.negative:
            return pos
        if any(not S for S in c.negative):
            return "∅"
        neg = " ∪ ".join(V(S) for S in c.negative)
        if len(c.positive) > 1:
            pos = f"({pos})"
        return f"{pos} \\ ({neg})" if len(c.negative) > 1 else f"{pos} \\ {neg}"

    def to_json(self) -> dict:
        c = self.canonical()
        return {
            "n": self.n,
            "positive": [sorted(j + 1 for j in P) for P in c.positive],
            "negative": [sorted(j + 1 for j in S) for S in c.negative],
            "text": str(self),
        }


# ---------------------------------------------------------------- fixed points


def weight_groups(w: Sequence[int]) -> dict[int, frozenset[int]]:
    groups: dict[int, set[int]] = {}
    for j, x in enumerate(w):
        groups.setdefault(x, set()).add(j)
    return {k: frozenset(v) for k, v in sorted(groups.items())}


@dataclass(frozen=True)
class FixedComponent:
    weight: int
    coords: frozenset[int]
    locus: CoordinateLocus

    @property
    def is_point(self) -> bool:
        return len(self.coords) == 1

    def point(self) -> tuple[int, ...]:
        (i,) = self.coords
        return tuple(int(j == i) for j in range(self.locus.n))


def projectivized_fixed_points(gens: Sequence[Poly], w: Sequence[int]) -> list[FixedComponent]:
    """G_m-fixed components of V(gens) ⊂ P(V): one per weight, where nonempty."""
    n = len(w)
    out = []
    for chi, g in weight_groups(w).items():
        comps = coordinate_components(gens, n, allowed=g)
        if not comps:
            continue
        out.append(FixedComponent(chi, g, CoordinateLocus(n, tuple(comps)).canonical()))
    return out


def saturation_origin(X: Graded1TAction) -> tuple[list[Poly], list[Poly]]:
    """Ideals of the points flowing to the origin under t → 0 and t → ∞."""
    xs = variables(X.n)

    def ideal(pred):
        extra = [Poly(xs[j], *xs, domain="QQ") for j, wj in enumerate(X.weights) if pred(wj)]
        return list(X.generators) + extra

    return ideal(lambda x: x <= 0), ideal(lambda x: x >= 0)


def strict_transform_exceptional(gens: Sequence[Poly], n: int) -> CoordinateLocus:
    """P(C_0 Z): where the strict transform of Z meets the exceptional divisor."""
    tc = tangent_cone(gens, n)
    return CoordinateLocus(n, tuple(coordinate_components(tc.generators, n))).canonical()


def projectivized_tangent_cone(X: Graded1TAction) -> CoordinateLocus:
    tc = tangent_cone(X.generators, X.n)
    return CoordinateLocus(X.n, tuple(coordinate_components(tc.generators, X.n))).canonical()


@dataclass(frozen=True)
class ReichsteinFixedPoints:
    fixed: tuple[FixedComponent, ...]  # fixed components of the transform's exceptional divisor
    exceptional: CoordinateLocus  # exceptional divisor of the Reichstein transform
    witness: frozenset[int] | None  # coordinates of a P(W) blocking a good quotient

    def points(self) -> list[tuple[int, ...]]:
        return [f.point() for f in self.fixed if f.is_point]

    @property
    def good_quotient_failure(self) -> bool:
        return self.witness is not None


def _require_isolated_origin(X: Graded1TAction) -> None:
    if any(wj == 0 for wj in X.weights):
        raise PolyError("the fixed locus must be the origin: zero weights are not allowed")


def reichstein_fixed_points(X: Graded1TAction) -> ReichsteinFixedPoints:
    """Fixed points left on the Reichstein transform along the origin.

    These are the fixed points of P(C_0 X) that avoid the strict transforms
    of the two halves of the saturation of the origin.
    """
    _require_isolated_origin(X)
    n, w = X.n, X.weights
    pc = projectivized_tangent_cone(X)
    negs = []
    for Z in saturation_origin(X):
        negs.extend(strict_transform_exceptional(Z, n).positive)
    exc = CoordinateLocus(n, pc.positive, tuple(negs)).canonical()
    fixed = []
    for chi, g in weight_groups(w).items():
        outside = frozenset(range(n)) - g
        pos = tuple(P | outside for P in exc.positive)
        loc = CoordinateLocus(n, pos, exc.negative).canonical()
        if not loc.is_empty():
            fixed.append(FixedComponent(chi, g, loc))
    coords = frozenset(j for f in fixed for j in f.coords if _has_point(f.locus, j))
    witness = None
    for k in range(len(coords), 1, -1):
        for W in combinations(sorted(coords), k):
            Ws = frozenset(W)
            if len({w[j] for j in Ws}) < 2:
                continue
            subs = [frozenset(s) for r in range(1, k + 1) for s in combinations(W, r)]
            if all(exc.contains_support(s) for s in subs):
                witness = Ws
                break
        if witness is not None:
            break
    return ReichsteinFixedPoints(tuple(fixed), exc, witness)


def _has_point(loc: CoordinateLocus, j: int) -> bool:
    return loc.contains_support(frozenset([j]))


# ---------------------------------------------------------------- saturated blowup


def invariant_supports(w: Sequence[int], degree: int) -> list[frozenset[int]]:
    """Minimal supports of weight-zero monomials of total degree at most ``degree``."""
    n = len(w)
    found: set[frozenset[int]] = set()

    def rec(j, left, acc, supp):
        if j == n:
            if acc == 0 and supp:
                found.add(frozenset(supp))
            return
        for e in range(left + 1):
            rec(j + 1, left - e, acc + e * w[j], supp + ([j] if e else []))

    rec(0, degree, 0, [])
    return sorted((s for s in found if not any(t < s for t in found)), key=lambda v: (len(v), sorted(v)))


def unstable_locus(w: Sequence[int], supports: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    """Zero locus of invariant monomials, as vanishing sets of its components."""
    n = len(w)
    keep = [s for s in _support_sets(n) if not any(a <= s for a in supports)]
    maximal = [s for s in keep if not any(s < t for t in keep)]
    return sorted((frozenset(range(n)) - s for s in maximal), key=lambda v: (len(v), sorted(v)))


@dataclass(frozen=True)
class SaturatedExceptional:
    locus: CoordinateLocus
    degree: int
    unstable: tuple[frozenset[int], ...]


def saturated_blowup_exceptional(X: Graded1TAction, degree_bound: int | None = None) -> SaturatedExceptional:
    """Exceptional divisor of the saturated blowup at the origin: P(C_0 X) minus Z.

    Z is the common zero locus of invariant monomials. Minimal supports of
    weight-zero monomials are pairs of opposite signs, found in degree at most
    2 max|w|; the search stops once that degree is passed and the locus has
    been stable for two consecutive degrees.
    """
    _require_isolated_origin(X)
    if degree_bound is None:
        degree_bound = default_bound(16)
    w = X.weights
    need = 2 * max(abs(x) for x in w)
    prev = None
    Z = None
    deg = 0
    for deg in range(1, degree_bound + 1):
        Z = unstable_locus(w, invariant_supports(w, deg))
        if prev is not None and Z == prev and deg >= need:
            break
        prev = Z
    else:
        raise PolyError(f"invariant supports did not stabilize by degree {degree_bound}")
    pc = projectivized_tangent_cone(X)
    loc = CoordinateLocus(X.n, pc.positive, tuple(Z)).canonical()
    return SaturatedExceptional(loc, deg, tuple(Z))


# ---------------------------------------------------------------- representations


def repfixed_certificate(W: Sequence[Sequence[int]]) -> list[dict]:
    """For each nonzero character χ, λ = χ puts the χ-eigenspace in V_λ^+.

    Hence no fixed point of P(V) survives the Reichstein transform along V^G.
    """
    rows = [list(r) for r in W]
    n = len(rows[0]) if rows else 0
    cols = [tuple(r[j] for r in rows) for j in range(n)]
    out = []
    for chi in sorted(set(cols)):
        if not any(chi):
            continue
        lam = chi
        pair = [sum(a * b for a, b in zip(lam, c)) for c in cols]
        plus = frozenset(j for j in range(n) if pair[j] > 0)
        minus = frozenset(j for j in range(n) if pair[j] < 0)
        coords = frozenset(j for j in range(n) if cols[j] == chi)
        out.append(
            {
                "character": chi,
                "cocharacter": lam,
                "plus": plus,
                "minus": minus,
                "coords": coords,
                "covers": coords <= plus,
            }
        )
    return out
