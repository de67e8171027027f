"""Exact integer and rational linear algebra.

Matrices are lists of rows. Entries are ``int`` or ``Fraction``; floats are
rejected everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]
Matrix = list[list[int]]


class LinalgError(ValueError):
    pass


def _check_exact(M) -> None:
    for row in M:
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
                raise LinalgError(f"non-exact entry {x!r}")


def as_int_matrix(M: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    rows = [list(r) for r in M]
    _check_exact(rows)
    for r in rows:
        for x in r:
            if isinstance(x, Fraction) and x.denominator != 1:
                raise LinalgError(f"non-integer entry {x}")
    rows = [[int(x) for x in r] for r in rows]
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise LinalgError("ragged matrix")
    if ncols is not None and rows and len(rows[0]) != ncols:
        raise LinalgError(f"expected {ncols} columns, got {len(rows[0])}")
    return rows


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M, ncols: int | None = None):
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*M)]


def matmul(A, B):
    if not A:
        return []
    inner = len(A[0])
    if inner != len(B):
        raise LinalgError("dimension mismatch in matmul")
    if inner == 0:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def clear_denominators(v: Sequence[Fraction]) -> Vector:
    """Smallest positive integer multiple of a rational vector, made primitive."""
    den = 1
    for x in v:
        x = Fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive([int(Fraction(x) * den) for x in v])


# ---------------------------------------------------------------- rational


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    _check_exact(M)
    A = [[Fraction(x) for x in row] for row in M]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def _int_rank(M) -> int:
    # fraction-free elimination, rows kept primitive
    A = [list(row) for row in M]
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pv = A[r][c]
        for i in range(r + 1, m):
            f = A[i][c]
            if f:
                A[i] = list(primitive([pv * a - f * b for a, b in zip(A[i], A[r])]))
        r += 1
        if r == m:
            break
    return r


def rank(M) -> int:
    if not M:
        return 0
    if all(type(x) is int for row in M for x in row):
        return _int_rank(M) if M[0] else 0
    return len(rref(M)[1])


def nullspace(M, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the rational right kernel {x : M x = 0}."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(M[0])
    R, piv = rref(M)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, piv):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(A, b) -> list[Fraction] | None:
    """One rational solution of A x = b, or None."""
    if not A:
        return None if any(b) else []
    n = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, piv):
        x[p] = row[n]
    return x


def inverse(A) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise LinalgError("singular matrix")
    return [row[n:] for row in R]


def determinant(A) -> Fraction:
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


def intersection_dim(A, B, ambient: int | None = None) -> int:
    """dim(rowspace A ∩ rowspace B) over Q.

    ``A`` and ``B`` are lists of spanning vectors of the same ambient space.
    """
    dims = {len(v) for v in list(A) + list(B)}
    if ambient is not None:
        dims.add(ambient)
    if len(dims) > 1:
        raise LinalgError(f"ambient dimension mismatch: {sorted(dims)}")
    ra, rb = rank(list(A)), rank(list(B))
    return ra + rb - rank(list(A) + list(B))


# ---------------------------------------------------------------- integer


def hermite_normal_form(M) -> tuple[Matrix, Matrix]:
    """Column-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``H = M U``. ``H`` is in
    column echelon form: pivots are positive, entries left of a pivot are
    reduced into ``[0, pivot)``, and zero columns come last.
    """
    A = as_int_matrix(M)
    m = len(A)
    n = len(A[0]) if A else 0
    H = [row[:] for row in A]
    U = identity(n)

    def colop_swap(i, j):
        for R in (H, U):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def colop_add(dst, src, k):  # col dst += k * col src
        if k:
            for R in (H, U):
                for row in R:
                    row[dst] += k * row[src]

    def colop_neg(i):
        for R in (H, U):
            for row in R:
                row[i] = -row[i]

    pc = 0
    for i in range(m):
        if pc >= n:
            break
        while True:
            nz = [c for c in range(pc, n) if H[i][c] != 0]
            if not nz:
                break
            # smallest absolute value first, lowest index on ties
            c0 = min(nz, key=lambda c: (abs(H[i][c]), c))
            if c0 != pc:
                colop_swap(pc, c0)
            done = True
            for c in range(pc + 1, n):
                if H[i][c]:
                    colop_add(c, pc, -(H[i][c] // H[i][pc]))
                    if H[i][c]:
                        done = False
            if done:
                break
        if H[i][pc] == 0:
            continue
        if H[i][pc] < 0:
            colop_neg(pc)
        piv = H[i][pc]
        for c in range(pc):
            colop_add(c, pc, -(H[i][c] // piv))
        pc += 1
    return H, U


def row_hnf(rows) -> list[Vector]:
    """Canonical basis (row HNF, zero rows dropped) of the lattice spanned by rows."""
    if not rows:
        return []
    n = len(rows[0])
    H, _ = hermite_normal_form(transpose(rows, n))
    out = [tuple(c) for c in transpose(H)]
    return [v for v in out if any(v)]


def kernel_lattice(M, ncols: int | None = None) -> list[Vector]:
    """Canonical basis of the saturated lattice {x in Z^n : M x = 0}."""
    A = as_int_matrix(M)
    if not A:
        n = ncols or 0
        return [tuple(r) for r in identity(n)]
    n = len(A[0])
    if ncols is not None and ncols != n:
        raise LinalgError("column count mismatch")
    H, U = hermite_normal_form(A)
    zero_cols = [c for c in range(n) if all(H[i][c] == 0 for i in range(len(H)))]
    basis = [[U[i][c] for i in range(n)] for c in zero_cols]
    return row_hnf(basis) if basis else []


def smith_normal_form(M) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``D = P M Q`` with ``P``, ``Q`` unimodular."""
    A = as_int_matrix(M)
    m = len(A)
    n = len(A[0]) if A else 0
    D = [row[:] for row in A]
    P = identity(m)
    Q = identity(n)

    def rswap(i, j):
        D[i], D[j] = D[j], D[i]
        P[i], P[j] = P[j], P[i]

    def cswap(i, j):
        for R in (D, Q):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def radd(dst, src, k):
        if k:
            D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
            P[dst] = [a + k * b for a, b in zip(P[dst], P[src])]

    def cadd(dst, src, k):
        if k:
            for R in (D, Q):
                for row in R:
                    row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        rswap(t, i0)
        cswap(t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    radd(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    cadd(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        changed = True
            if changed:
                nz = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
                nz += [(abs(D[t][j]), t, j) for j in range(t, n) if D[t][j]]
                _, i0, j0 = min(nz)
                rswap(t, i0)
                cswap(t, j0)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            radd(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            P[t] = [-x for x in P[t]]
        t += 1
    return D, P, Q


def elementary_divisors(M) -> list[int]:
    D, _, _ = smith_normal_form(M)
    out = []
    for i in range(min(len(D), len(D[0]) if D else 0)):
        if D[i][i]:
            out.append(abs(D[i][i]))
    return out


def is_saturated_basis(vectors) -> bool:
    """True when the vectors are independent and span a saturated sublattice."""
    if not vectors:
        return True
    ed = elementary_divisors([list(v) for v in vectors])
    return len(ed) == len(vectors) and all(d == 1 for d in ed)


def integer_solution(A, b) -> list[int] | None:
    """Some integer x with A x = b, or None."""
    A = as_int_matrix(A)
    if not A:
        return None if any(b) else []
    D, P, Q = smith_normal_form(A)
    c = matvec(P, b)
    n = len(A[0])
    y = [0] * n
    for i, ci in enumerate(c):
        d = D[i][i] if i < n else 0
        if d == 0:
            if ci != 0:
                return None
            continue
        if ci % d:
            return None
        y[i] = ci // d
    return matvec(Q, y)
