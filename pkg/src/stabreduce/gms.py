"""Good moduli spaces of toric stacks through invariant monoids.

The good moduli space of [X_σ/G] is Spec k[σ^∨ ∩ K] where K is the lattice of
G-invariant characters, so everything reduces to Hilbert bases.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .cones import Cone, Fan
from .linalg import dot, kernel_lattice, rank
from .polyhedral import hilbert_basis
from .saturation import TransformStep
from .stacks import StackError, ToricStack

Vec = tuple[int, ...]

CHART_RANK_LIMIT = 6


class ChartLimit(StackError):
    pass


class GMSUnsupported(StackError):
    pass


def default_bound(fallback: int) -> int:
    env = os.environ.get("STABREDUCE_DEGREE_BOUND")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return fallback


@dataclass(frozen=True)
class InvariantChart:
    cone: Cone
    generators: tuple[Vec, ...]  # minimal generators of σ^∨ ∩ K (units appear with both signs)
    relations: tuple[Vec, ...]  # lattice of relations among the generators

    def monomials(self, names: Sequence[str] | None = None) -> list[str]:
        return [monomial_str(g, names) for g in self.generators]


def monomial_str(m: Sequence[int], names: Sequence[str] | None = None) -> str:
    names = list(names) if names else [f"x{i + 1}" for i in range(len(m))]
    num, den = [], []
    for e, x in zip(m, names):
        if e > 0:
            num.append(x if e == 1 else f"{x}^{e}")
        elif e < 0:
            den.append(x if e == -1 else f"{x}^{-e}")
    top = "*".join(num) or "1"
    if not den:
        return top
    bottom = "*".join(den)
    return f"{top}/{bottom}" if len(den) == 1 else f"{top}/({bottom})"


def _lattice_inequalities(K: list[Vec], rows: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[dot(r, b) for b in K] for r in rows]


def _lift(K: list[Vec], y: Sequence[int]) -> Vec:
    n = len(K[0]) if K else 0
    return tuple(sum(y[j] * K[j][i] for j in range(len(K))) for i in range(n))


def invariant_chart(X: ToricStack, sigma: Cone) -> InvariantChart:
    """Generators and relations of the invariant monoid σ^∨ ∩ K."""
    if X.n > CHART_RANK_LIMIT:
        raise ChartLimit(f"rank {X.n} exceeds the chart limit {CHART_RANK_LIMIT}")
    if sigma not in X.fan:
        raise StackError(f"{sigma} is not a cone of the fan")
    K = X.group.invariant_lattice
    if not K:
        return InvariantChart(sigma, (), ())
    A = _lattice_inequalities(K, sigma.rays)
    hb = hilbert_basis(A, len(K)) if A else hilbert_basis([], len(K))
    gens = sorted({_lift(K, y) for y in hb.all_generators()})
    rel = kernel_lattice([list(c) for c in zip(*gens)], len(gens)) if gens else []
    return InvariantChart(sigma, tuple(gens), tuple(rel))


# ---------------------------------------------------------------- blowups


def _affine_cone(X: ToricStack) -> Cone:
    mx = X.fan.maximal_cones
    if len(mx) != 1:
        raise GMSUnsupported("blowup comparison needs an affine input (one maximal cone)")
    return mx[0]


def rees_basis(X: ToricStack, sigma: Cone, u: Sequence[int], d: int) -> list[tuple[Vec, int]]:
    """Hilbert basis of {(m, k) : m ∈ σ^∨ ∩ K, 0 <= d k <= <m, u>}."""
    K = X.group.invariant_lattice
    q = len(K)
    rows = [[dot(r, b) for b in K] + [0] for r in sigma.rays]
    rows.append([0] * q + [1])
    rows.append([dot(u, b) for b in K] + [-d])
    hb = hilbert_basis(rows, q + 1)
    out = []
    for z in hb.all_generators():
        out.append((_lift(K, z[:q]), z[q]))
    return sorted(out, key=lambda t: (t[1], t[0]))


def pushforward_generators(X: ToricStack, sigma: Cone, u: Sequence[int], k: int) -> list[Vec]:
    """Monomial generators of π_*(I^k) where ord along I is <m, u>."""
    if k == 0:
        return [()]
    return sorted(m for m, j in rees_basis(X, sigma, u, k) if j == 1)


def chart_cones(F: Fan, a: Sequence[int], u: Sequence[int], d: int) -> frozenset[Cone]:
    """Cones where the section χ^a t of I^d does not vanish."""
    u = tuple(u)
    out = set()
    for c in F.cones:
        if all(dot(a, v) == (d if v == u else 0) for v in c.rays):
            out.add(c)
    return frozenset(out)


def _monoid_contains(gens: list[Vec], target: Vec, depth: int) -> bool:
    gens = [g for g in gens if any(g)]

    @lru_cache(maxsize=None)
    def go(t: Vec, budget: int) -> bool:
        if not any(t):
            return True
        if budget == 0:
            return False
        return any(go(tuple(a - b for a, b in zip(t, g)), budget - 1) for g in gens)

    return go(tuple(target), depth)


@dataclass
class GMSVerdict:
    d: int | None
    degree_one_generators: list[Vec] = field(default_factory=list)
    charts_cover_output: bool = False
    chart_checks: list[tuple[Vec, bool, str]] = field(default_factory=list)
    bound: int = 0

    @property
    def ok(self) -> bool:
        return self.d is not None and self.charts_cover_output and all(c[1] for c in self.chart_checks)


def gms_blowup_check(step: TransformStep, bound: int | None = None) -> GMSVerdict:
    """Compare the saturated blowup's moduli space with a blowup of the moduli space.

    Finds the least d with ⊕ π_*(I^{dn}) generated in degree one, then checks
    that the charts D+(f) for the degree-one generators f cover the output
    fan and have the expected invariant rings.
    """
    if bound is None:
        bound = default_bound(12)
    X = step.before
    sigma = _affine_cone(X)
    if len(step.centers) != 1:
        raise GMSUnsupported("blowup comparison needs a single center")
    c0 = step.centers[0]
    u = c0.barycenter()
    K = X.group.invariant_lattice
    d_found = None
    basis = []
    for d in range(1, bound + 1):
        basis = rees_basis(X, sigma, u, d)
        if all(k <= 1 for _, k in basis):
            d_found = d
            break
    verdict = GMSVerdict(d_found, bound=bound)
    if d_found is None:
        return verdict
    deg0 = [m for m, k in basis if k == 0]
    deg1 = sorted(m for m, k in basis if k == 1)
    verdict.degree_one_generators = deg1
    out = step.after.fan
    union = set()
    for a in deg1:
        union |= chart_cones(step.subdivided, a, u, d_found)
    verdict.charts_cover_output = frozenset(union) == out.cones
    for a in deg1:
        cones = chart_cones(step.subdivided, a, u, d_found)
        rays = sorted({r for c in cones for r in c.rays})
        gens = deg0 + [tuple(b - x for b, x in zip(bb, a)) for bb in deg1]
        # invariant monoid of the chart: K ∩ (rays)^∨
        A = [[dot(r, b) for b in K] for r in rays]
        hb = hilbert_basis(A, len(K)) if A else hilbert_basis([], len(K))
        want = [_lift(K, y) for y in hb.all_generators()]
        inside = all(all(dot(r, g) >= 0 for r in rays) for g in gens)
        lat_ok = rank([list(g) for g in gens] or [[0] * X.n]) == rank([list(w) for w in want] or [[0] * X.n])
        member = all(_monoid_contains(gens, w, 6) for w in want)
        ok = inside and lat_ok and member
        verdict.chart_checks.append((a, ok, f"{len(cones)} cones, {len(want)} chart generators"))
    return verdict


# ---------------------------------------------------------------- varGIT


@dataclass(frozen=True)
class VarGITResult:
    case: str  # minus_P2 | minus_P1 | minus_both | empty
    p1: bool
    p2: bool
    open_point: bool
    witnesses: dict


def vargit_locus(a: int, i: int, j: int, bound: int | None = None) -> VarGITResult:
    """Semistable locus of the weighted projective line P(1, a) twisted by (i, j).

    Invariant sections in degree k are monomials u^p v^q with p + q = ik and
    a q + j k = 0. The coordinate point where only u (resp. v) is nonzero
    survives iff some invariant section is a pure power of u (resp. v).
    """
    if a < 1 or i < 1:
        raise ValueError("need a >= 1 and i >= 1")
    if bound is None:
        bound = max(a, default_bound(a))
    bound = max(bound, a)
    p1 = p2 = opn = False
    wit = {}
    for k in range(1, bound + 1):
        if (-j * k) % a:
            continue
        q = -j * k // a
        p = i * k - q
        if q < 0 or p < 0:
            continue
        opn = True
        wit.setdefault("open", (k, p, q))
        if q == 0:
            p1 = True
            wit.setdefault("P1", (k, p, q))
        if p == 0:
            p2 = True
            wit.setdefault("P2", (k, p, q))
    # p1 and p2 together would force a*i = 0
    if not opn:
        case = "empty"
    elif p1:
        case = "minus_P2"
    elif p2:
        case = "minus_P1"
    else:
        case = "minus_both"
    return VarGITResult(case, p1, p2, opn, wit)


def vargit_closed_form(a: int, i: int, j: int) -> str:
    if j > 0 or j < -a * i:
        return "empty"
    if j == 0:
        return "minus_P2"
    if j == -a * i:
        return "minus_P1"
    return "minus_both"


# ---------------------------------------------------------------- charts of blowups


def chart_coordinates(chart: Cone) -> list[tuple[tuple[int, ...], Vec]]:
    """Dual basis of a smooth full-dimensional cone: (ray, character) pairs."""
    from .linalg import inverse

    n = chart.dim_ambient
    if len(chart.rays) != n:
        raise StackError("chart cone must be full-dimensional")
    V = [[r[i] for r in chart.rays] for i in range(n)]  # rays as columns
    Vinv = inverse(V)
    out = []
    for k, r in enumerate(chart.rays):
        m = tuple(int(x) for x in Vinv[k])
        out.append((r, m))
    return out


def pullback_monomial(a: Sequence[int], chart: Cone, exceptional: Sequence[Sequence[int]] = ()) -> dict:
    """Total and strict transform of the principal ideal (χ^a) on an affine chart.

    Returns exponents of the chart coordinates (keyed by ray) for the total
    transform, and for the strict transform with exceptional factors removed.
    """
    exc = {tuple(e) for e in exceptional}
    total = {r: dot(a, r) for r in chart.rays}
    strict = {r: (0 if r in exc else e) for r, e in total.items()}
    return {"total": total, "strict": strict}


def chart_monomial_str(exps: dict, chart: Cone, names: Sequence[str] | None = None) -> str:
    """Render Π m_r^{e_r} with each chart coordinate written as a Laurent monomial."""
    coords = dict(chart_coordinates(chart))
    parts = []
    for r in chart.rays:
        e = exps.get(r, 0)
        if e == 0:
            continue
        base = monomial_str(coords[r], names)
        if "/" in base or "*" in base:
            base = f"({base})"
        parts.append(base if e == 1 else f"{base}^{e}")
    return "*".join(parts) or "1"
