"""Exact polyhedral routines: Fourier–Motzkin feasibility and Hilbert bases."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import floor, ceil
from typing import Sequence

from .linalg import (
    LinalgError,
    clear_denominators,
    dot,
    inverse,
    kernel_lattice,
    matmul,
    nullspace,
    primitive,
    rank,
    rref,
    smith_normal_form,
    transpose,
)

# a constraint reads  coeffs . y >= rhs  (or > when strict)
Constraint = tuple[tuple[Fraction, ...], Fraction, bool]


def _normalize(c: Constraint) -> Constraint:
    a, b, s = c
    scale = next((abs(x) for x in a if x != 0), None)
    if scale is None:
        return c
    return tuple(x / scale for x in a), b / scale, s


def _pick(lo, lo_strict, hi, hi_strict) -> Fraction:
    """A deterministic value in the interval, preferring small integers."""
    if lo is None and hi is None:
        return Fraction(0)

    def ok(x):
        if lo is not None and (x < lo or (lo_strict and x == lo)):
            return False
        if hi is not None and (x > hi or (hi_strict and x == hi)):
            return False
        return True

    if ok(Fraction(0)):
        return Fraction(0)
    if lo is not None and lo > 0:
        cand = Fraction(floor(lo) + 1) if lo_strict or lo != floor(lo) else Fraction(lo)
    elif hi is not None:
        cand = Fraction(ceil(hi) - 1) if hi_strict or hi != ceil(hi) else Fraction(hi)
    else:
        cand = Fraction(0)
    if ok(cand):
        return cand
    if lo is not None and hi is not None:
        return (lo + hi) / 2
    if lo is not None:
        return lo + 1
    return hi - 1


def fourier_motzkin(constraints: Sequence[Constraint], nvars: int) -> list[Fraction] | None:
    """Exact feasibility of a system of linear inequalities.

    Returns a rational point satisfying every constraint, or None.
    """
    levels: list[list[Constraint]] = []
    cur = []
    seen = set()
    for a, b, s in constraints:
        if len(a) != nvars:
            raise LinalgError("constraint length mismatch")
        c = _normalize((tuple(Fraction(x) for x in a), Fraction(b), bool(s)))
        if c not in seen:
            seen.add(c)
            cur.append(c)
    for k in range(nvars - 1, -1, -1):
        levels.append(cur)
        pos = [c for c in cur if c[0][k] > 0]
        neg = [c for c in cur if c[0][k] < 0]
        nxt = [c for c in cur if c[0][k] == 0]
        seen = set(nxt)
        for (ap, bp, sp), (an, bn, sn) in product(pos, neg):
            # scale so the k-th coefficients are +1 and -1, then add
            fp, fn = ap[k], -an[k]
            a = tuple(x / fp + y / fn for x, y in zip(ap, an))
            b = bp / fp + bn / fn
            c = _normalize((a, b, sp or sn))
            if c not in seen:
                seen.add(c)
                nxt.append(c)
        cur = nxt
    for a, b, s in cur:
        if (s and not 0 > b) or (not s and not 0 >= b):
            return None
    y = [Fraction(0)] * nvars
    for k, cons in zip(range(nvars), reversed(levels)):
        lo = hi = None
        lo_s = hi_s = False
        for a, b, s in cons:
            if a[k] == 0:
                continue
            rest = b - sum(a[j] * y[j] for j in range(k))
            bound = rest / a[k]
            if a[k] > 0:
                if lo is None or bound > lo or (bound == lo and s):
                    lo, lo_s = bound, s
            else:
                if hi is None or bound < hi or (bound == hi and s):
                    hi, hi_s = bound, s
        y[k] = _pick(lo, lo_s, hi, hi_s)
    return y


def find_point(eq_A, eq_b, ineqs: Sequence[Constraint], nvars: int) -> list[Fraction] | None:
    """A rational point with ``eq_A x = eq_b`` and the inequalities, or None."""
    if eq_A:
        # one elimination gives a particular solution and the kernel
        R, piv = rref([list(row) + [b] for row, b in zip(eq_A, eq_b)])
        if nvars in piv:
            return None
        x0 = [Fraction(0)] * nvars
        for row, c in zip(R, piv):
            x0[c] = row[nvars]
        N = []
        for f in range(nvars):
            if f in piv:
                continue
            v = [Fraction(0)] * nvars
            v[f] = Fraction(1)
            for row, c in zip(R, piv):
                v[c] = -row[f]
            N.append(v)
    else:
        x0 = [Fraction(0)] * nvars
        N = nullspace([], nvars)
    p = len(N)
    sub = []
    for a, b, s in ineqs:
        coeffs = tuple(sum(Fraction(a[i]) * N[j][i] for i in range(nvars)) for j in range(p))
        sub.append((coeffs, Fraction(b) - dot(a, x0), s))
    if p == 0:
        ok = all((0 > b) if s else (0 >= b) for _, b, s in sub)
        return list(x0) if ok else None
    t = fourier_motzkin(sub, p)
    if t is None:
        return None
    return [x0[i] + sum(t[j] * N[j][i] for j in range(p)) for i in range(nvars)]


def extreme_rays(A: Sequence[Sequence[int]], p: int) -> list[tuple[int, ...]]:
    """Primitive extreme rays of the pointed cone {y in Q^p : A y >= 0}."""
    A = [list(r) for r in A]
    if p == 0:
        return []
    if A and rank(A) < p:
        raise LinalgError("cone is not pointed")
    if not A:
        raise LinalgError("cone is not pointed")
    rays = set()
    for rows in combinations(range(len(A)), p - 1):
        sub = [A[i] for i in rows]
        if p > 1 and rank(sub) != p - 1:
            continue
        ker = nullspace(sub, p) if sub else nullspace([], p)
        if len(ker) != 1:
            continue
        r = clear_denominators(ker[0])
        for cand in (r, tuple(-x for x in r)):
            if all(dot(row, cand) >= 0 for row in A):
                rays.add(cand)
    return sorted(rays)


def _parallelepiped_points(R: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Lattice points of the half-open parallelepiped spanned by independent rays."""
    p = len(R)
    M = transpose([list(r) for r in R], p)  # rays as columns
    D, P, Q = smith_normal_form(M)
    Pinv = inverse(P)
    Minv = inverse(M)
    ds = [abs(D[i][i]) for i in range(p)]
    pts = set()
    for coeffs in product(*[range(d) for d in ds]):
        g = [sum(Pinv[i][j] * coeffs[j] for j in range(p)) for i in range(p)]
        a = [sum(Minv[i][j] * g[j] for j in range(p)) for i in range(p)]
        a = [x - floor(x) for x in a]
        y = tuple(int(sum(M[i][j] * a[j] for j in range(p))) for i in range(p))
        if any(y):
            pts.add(y)
    return sorted(pts)


@dataclass(frozen=True)
class HilbertBasis:
    """Minimal generators of {z : A z >= 0} ∩ Z^n.

    The monoid is generated by ``generators`` together with ``± lineality``.
    """

    generators: tuple[tuple[int, ...], ...]
    lineality: tuple[tuple[int, ...], ...]

    def all_generators(self) -> list[tuple[int, ...]]:
        out = list(self.generators)
        for v in self.lineality:
            out.append(v)
            out.append(tuple(-x for x in v))
        return out


def _complement_basis(L: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    """Vectors completing a saturated lattice basis L to a basis of Z^n."""
    if not L:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    D, P, Q = smith_normal_form([list(v) for v in L])
    Qinv = inverse(Q)
    rows = [tuple(int(x) for x in r) for r in Qinv]
    return rows[len(L):]


def hilbert_basis(A: Sequence[Sequence[int]], n: int) -> HilbertBasis:
    """Hilbert basis of the monoid {z in Z^n : A z >= 0}."""
    A = [list(r) for r in A]
    L = kernel_lattice(A, n) if A else [tuple(int(i == j) for j in range(n)) for i in range(n)]
    C = _complement_basis(L, n)
    p = len(C)
    if p == 0:
        return HilbertBasis((), tuple(L))
    Ap = matmul(A, transpose([list(c) for c in C], n))
    rays = extreme_rays(Ap, p)
    cands = set(rays)
    for sub in combinations(rays, p):
        if rank([list(r) for r in sub]) < p:
            continue
        cands.update(_parallelepiped_points(list(sub)))
    cands = [c for c in cands if all(dot(row, c) >= 0 for row in Ap)]

    def in_monoid(v):
        return all(dot(row, v) >= 0 for row in Ap)

    basis = []
    for x in cands:
        reducible = False
        for h in cands:
            if h == x:
                continue
            d = tuple(a - b for a, b in zip(x, h))
            if any(d) and in_monoid(d):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    lifted = sorted(
        tuple(sum(y[j] * C[j][i] for j in range(p)) for i in range(n)) for y in basis
    )
    return HilbertBasis(tuple(lifted), tuple(L))


def monoid_member(A: Sequence[Sequence[int]], z: Sequence[int]) -> bool:
    return all(dot(row, z) >= 0 for row in A)


def primitive_ray(v) -> tuple[int, ...]:
    return primitive(v)
