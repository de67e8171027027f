"""The reference implementations agree with each other where both apply."""

from itertools import combinations

from hypothesis import given, settings, strategies as st

from oracles import cocharacters, flow_exists, invariant_monomials, invariant_supports, limit_lands_in, nullspace


def test_nullspace_example():
    assert nullspace([[1, -1, 0]], 3) == [[1, 1, 0], [0, 0, 1]]


def test_supports_example():
    # x*y and z are invariant under weights (1,-1,0)
    assert invariant_supports(((1, -1, 0),), 3) == {
        frozenset(), frozenset({0, 1}), frozenset({2}), frozenset({0, 1, 2})
    }


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=1, max_size=2)))
def test_supports_match_enumeration(W):
    n = len(W[0])
    # with entries at most 2 every circuit has exponents within the box
    box = {frozenset(j for j in range(n) if m[j]) for m in invariant_monomials(W, (), (), n, 8)}
    assert invariant_supports(W, n) == box


def test_flow_needs_large_cocharacter():
    # the smallest witness has a coefficient of absolute value above 8
    W = ((-1, 1, 0, 0), (-1, 2, -1, 1), (0, -2, -1, 2))
    tau = {(1, 0, 0, 0)}
    target = [(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0)]
    assert flow_exists(W, 4, tau, target)
    assert not any(limit_lands_in(lam, tau, target) for lam in cocharacters(W, 4, 8))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(-1, 1), min_size=n, max_size=n), min_size=1, max_size=2)))
def test_flow_matches_box_search(W):
    n = len(W[0])
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    for k in range(n):
        for tau in combinations(basis, k):
            box = any(limit_lands_in(lam, set(tau), basis) for lam in cocharacters(W, n, 4))
            assert flow_exists(W, n, set(tau), basis) == box
