from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from oracles import determinantal_divisors
from stabreduce.linalg import (
    LinalgError,
    determinant,
    elementary_divisors,
    hermite_normal_form,
    identity,
    integer_solution,
    intersection_dim,
    is_saturated_basis,
    kernel_lattice,
    matmul,
    primitive,
    rank,
    row_hnf,
    smith_normal_form,
)

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def test_hnf_identity():
    H, U = hermite_normal_form(identity(3))
    assert H == identity(3) and U == identity(3)


def test_hnf_one_by_one():
    assert hermite_normal_form([[2]]) == ([[2]], [[1]])


def test_hnf_two_by_two_det():
    H, U = hermite_normal_form([[1, 2], [3, 4]])
    assert abs(determinant(H)) == 2
    assert abs(determinant(U)) == 1
    assert H[0][1] == 0  # column echelon


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_properties(M):
    H, U = hermite_normal_form(M)
    assert abs(determinant(U)) == 1
    assert matmul(M, U) == H
    # idempotent
    H2, _ = hermite_normal_form(H)
    assert H2 == H
    # column lattice unchanged
    assert row_hnf([list(c) for c in zip(*H)]) == row_hnf([list(c) for c in zip(*M)])


def test_kernel_examples():
    assert kernel_lattice([[1, -1, 0]]) == [(1, 1, 0), (0, 0, 1)]
    assert kernel_lattice([[1]]) == []
    assert kernel_lattice([[2, -2]]) == [(1, 1)]


@settings(max_examples=150, deadline=None)
@given(matrices(3, 5))
def test_kernel_saturated_and_orthogonal(M):
    K = kernel_lattice(M)
    n = len(M[0])
    for v in K:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)
    assert len(K) == n - rank(M)
    assert is_saturated_basis(K)
    # matches sympy's rational nullspace dimension
    assert len(K) == len(Matrix(M).nullspace())


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_against_minors(M):
    D, P, Q = smith_normal_form(M)
    assert matmul(matmul(P, M), Q) == D
    assert abs(determinant(P)) == 1 and abs(determinant(Q)) == 1
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    ed = elementary_divisors(M)
    assert ed == determinantal_divisors(M)
    assert all(b % a == 0 for a, b in zip(ed, ed[1:]))


def test_intersection_examples():
    assert intersection_dim([[1, 0, 0], [0, 1, 0]], [[1, -1, 0]]) == 1
    assert intersection_dim([[0, 0, 1]], [[1, -1, 0]]) == 0


def test_intersection_mismatch():
    with pytest.raises(LinalgError):
        intersection_dim([[1, 0]], [[1, 0, 0]])


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=4),
    st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=4),
)))
def test_intersection_formula(pair):
    A, B = pair
    want = Matrix(A).rank() + Matrix(B).rank() - Matrix(A + B).rank()
    assert intersection_dim(A, B) == want
    assert intersection_dim(B, A) == want
    assert intersection_dim(A, A) == Matrix(A).rank()


def test_primitive_and_errors():
    assert primitive([4, -6, 0]) == (2, -3, 0)
    with pytest.raises(LinalgError):
        rank([[Fraction(1, 2), 1.5]])


@settings(max_examples=100, deadline=None)
@given(matrices(3, 3), st.lists(small, min_size=3, max_size=3))
def test_integer_solution(M, x):
    n = len(M[0])
    x = x[:n] + [0] * (n - len(x[:n]))
    b = [sum(a * c for a, c in zip(row, x)) for row in M]
    y = integer_solution(M, b)
    assert y is not None
    assert [sum(a * c for a, c in zip(row, y)) for row in M] == b
