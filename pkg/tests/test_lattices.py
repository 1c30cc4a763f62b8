import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import sympy_invariant_factors
from lattice_fixtures import FIXTURES
from relorders.lattices import (
    Lattice,
    LatticeCoset,
    QuotientMachine,
    UnsolvableError,
    canonical_rep,
    determinant,
    hnf,
    k_root,
    k_root_coset,
    lattice_order,
    lattice_spectrum,
    matmul,
    member,
    quotient_machine,
    smith,
    solve_completion_matrix,
    vecmat,
)


def rational_member(rows, a):
    """Membership by exact rational solving; rows are assumed independent."""
    from sympy import Matrix

    B = Matrix(rows)
    x = Matrix([a]) * B.T * (B * B.T).inv()
    if list(x * B) != list(a):
        return False
    return all(Fraction(str(c)).denominator == 1 for c in x)


def test_hnf_shape():
    rows = hnf([[4, 6], [2, 2]], 2)
    assert rows == ((2, 0), (0, 2))
    assert hnf([[2, 4], [1, 2]], 2) == ((1, 2),)


@pytest.mark.parametrize("rows, m", FIXTURES)
def test_smith_identity_and_unimodularity(rows, m):
    P, D, Q = smith(rows, m)
    assert matmul(matmul(P, rows), Q) == D
    assert abs(determinant(P)) == 1 and abs(determinant(Q)) == 1
    diag = [D[i][i] for i in range(min(len(D), m)) if D[i][i]]
    for x, y in zip(diag, diag[1:]):
        assert y % x == 0
    assert tuple(diag) == sympy_invariant_factors(rows, m)


@pytest.mark.parametrize("rows, m", FIXTURES)
def test_membership_matches_rational_solve(rows, m):
    L = Lattice(rows, m)
    for a in itertools.product(range(-4, 5), repeat=m):
        assert member(L, a) == rational_member(rows, a)


@pytest.mark.parametrize("rows, m", FIXTURES)
def test_snf_cache_identity(rows, m):
    L = Lattice(rows, m)
    s = L.snf
    assert matmul(s.Q, s.Q_inv) == [[int(i == j) for j in range(m)] for i in range(m)]


def test_divisors_and_spectrum():
    L = Lattice([[2, 0], [0, 4]], 2)
    assert L.snf.divisors == (2, 4)
    assert lattice_spectrum(L) == {1, 2, 4}
    assert lattice_spectrum(Lattice([[2, 0]], 2)) == {0, 1, 2}


def test_canonical_representative():
    L = Lattice([[2, 0], [0, 4]], 2)
    assert canonical_rep((3, 5), L) == (1, 1)
    assert lattice_order(L, (1, 1)) == 4
    assert lattice_order(L, (1, 0)) == 2
    assert lattice_order(Lattice([[2, 0]], 2), (0, 1)) == 0


def test_k_root():
    assert k_root(Lattice([[4]], 1), 2) == Lattice([[2]], 1)
    assert k_root_coset(LatticeCoset((2,), Lattice([[4]], 1)), 2) == LatticeCoset((1,), Lattice([[2]], 1))
    assert k_root_coset(LatticeCoset((1,), Lattice([[4]], 1)), 2) is None


@pytest.mark.parametrize("rows, m", FIXTURES)
@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_k_root_brute_force(rows, m, k):
    L = Lattice(rows, m)
    R = k_root(L, k)
    for a in itertools.product(range(-5, 6), repeat=m):
        assert member(R, a) == member(L, tuple(k * x for x in a))


@pytest.mark.parametrize("rows, m", FIXTURES[:10])
@pytest.mark.parametrize("k", [2, 3])
def test_k_root_coset_brute_force(rows, m, k):
    L = Lattice(rows, m)
    for rep in itertools.product(range(-2, 3), repeat=m):
        coset = LatticeCoset(rep, L)
        root = k_root_coset(coset, k)
        hits = [a for a in itertools.product(range(-6, 7), repeat=m) if tuple(k * x for x in a) in coset]
        if root is None:
            assert not hits
        else:
            assert all(a in root for a in hits)
            assert tuple(k * x for x in root.representative) in coset


def test_completion_matrix_examples():
    assert solve_completion_matrix([[1]], [[2]], Lattice([[4]], 1)) == [[2]]
    with pytest.raises(UnsolvableError):
        solve_completion_matrix([[2]], [[1]], Lattice([[2]], 1))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=2), min_size=1, max_size=3),
    st.lists(st.lists(st.integers(-4, 4), min_size=1, max_size=1), min_size=3, max_size=3),
)
def test_completion_matrix_property(U, A):
    A = A[: len(U)]
    B = Lattice([[6]], 1)
    try:
        C = solve_completion_matrix(U, A, B)
    except UnsolvableError:
        return
    for u, a in zip(U, A):
        assert member(B, tuple(x - y for x, y in zip(vecmat(u, C, 1), a)))


def test_quotient_machine():
    q = quotient_machine(Lattice([[4]], 1), 8)
    assert q.size == 4
    assert q.order_of((1,)) == 4
    full = QuotientMachine(Lattice([[2, 0], [0, 3]], 2))
    assert full.size == 6
    assert len(list(full.elements())) == 6
