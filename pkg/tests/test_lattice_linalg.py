import random
from fractions import Fraction

import pytest

from helpers import ROOT2
from latfree.core_num import QuadExt
from latfree.errors import DimensionError, NonPrimitiveError, ScalarError
from latfree.lattice_linalg import (
    IntMatrix,
    LatticeBasis,
    UnimodularMap,
    determinant,
    extend_to_basis,
    hnf,
    integer_inverse,
    is_rational_direction,
    is_rational_subspace,
    nullspace,
    primitive_integer_vector,
    rank,
    solve,
    sublattice_of_subspace,
    unimodular_from_basis,
)


def _random_matrix(rng, rows, cols, lo=-9, hi=9):
    return IntMatrix.from_rows([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)])


def _random_unimodular(rng, d):
    while True:
        _, U = hnf(_random_matrix(rng, d, d))
        if U.forward != IntMatrix.identity(d):
            return U


# --- Field routines ---

def test_rank_and_nullspace():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank(rows) == 2
    basis = nullspace(rows, 3)
    assert len(basis) == 1
    for row in rows:
        assert sum(a * x for a, x in zip(row, basis[0])) == 0


def test_nullspace_over_quadratic_field():
    basis = nullspace([[1, ROOT2]], 2)
    assert basis == [[-ROOT2, 1]]


def test_solve_and_determinant():
    A = [[2, 1], [1, 3]]
    assert solve(A, [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    assert determinant(A) == 5
    assert solve([[1, 2], [2, 4]], [1, 2]) is None
    assert determinant([[1, ROOT2], [ROOT2, 1]]) == -1


def test_is_rational_subspace():
    assert is_rational_subspace([[1, 1], [0, ROOT2]])      # all of R^2
    assert is_rational_subspace([[ROOT2, 2 * ROOT2]])      # the line through (1, 2)
    assert not is_rational_subspace([[1, ROOT2]])
    assert is_rational_subspace([])


# --- Integer matrices ---

def test_integer_inverse():
    M = IntMatrix.from_rows([[2, 1], [1, 1]])
    assert integer_inverse(M) == IntMatrix.from_rows([[1, -1], [-1, 2]])
    with pytest.raises(DimensionError):
        integer_inverse(IntMatrix.from_rows([[2, 0], [0, 1]]))
    with pytest.raises(DimensionError):
        integer_inverse(IntMatrix.from_rows([[1, 2], [2, 4]]))


def test_unimodular_map_rejects_mismatched_inverse():
    with pytest.raises(DimensionError):
        UnimodularMap(IntMatrix.identity(2), IntMatrix.from_rows([[1, 1], [0, 1]]))


def test_lattice_basis_requires_unit_determinant():
    LatticeBasis(((1, 1), (0, 1)))
    with pytest.raises(DimensionError):
        LatticeBasis(((1, 1), (1, -1)))


def test_hnf_small_example():
    M = IntMatrix.from_rows([[2, 0], [1, 1]])
    H, U = hnf(M)
    assert H == IntMatrix.from_rows([[1, 1], [0, 2]])
    assert U.forward @ M == H
    assert abs(U.forward.det()) == 1


def test_hnf_of_zero_matrix():
    M = IntMatrix.from_rows([[0, 0], [0, 0]])
    H, U = hnf(M)
    assert H == M
    assert U.forward == IntMatrix.identity(2)


@pytest.mark.parametrize("shape", [(2, 2), (3, 3), (2, 4), (4, 2), (4, 4)])
def test_hnf_random_properties(shape):
    rng = random.Random(hash(shape) % 1000)
    for _ in range(25):
        M = _random_matrix(rng, *shape)
        H, U = hnf(M)
        assert U.forward @ M == H
        assert abs(U.forward.det()) == 1
        prev = -1
        zero_seen = False
        for row in H.entries:
            if not any(row):
                zero_seen = True
                continue
            assert not zero_seen, "zero rows must come last"
            j = next(c for c, v in enumerate(row) if v != 0)
            assert j > prev
            assert row[j] > 0
            for above in H.entries[:H.entries.index(row)]:
                assert 0 <= above[j] < row[j]
            prev = j


# --- Primitive vectors and bases ---

@pytest.mark.parametrize("v, expected", [
    ((Fraction(1, 2), Fraction(3, 4)), (2, 3)),
    ((-4, 6), (2, -3)),
    ((0, -5, 10), (0, 1, -2)),
])
def test_primitive_integer_vector(v, expected):
    assert primitive_integer_vector(v) == expected


def test_primitive_integer_vector_rejects():
    with pytest.raises(ScalarError):
        primitive_integer_vector((0, 0))
    with pytest.raises(ScalarError):
        primitive_integer_vector((1, ROOT2))


@pytest.mark.parametrize("vectors, expected", [
    ([(1, 1)], ((1, 1), (0, 1))),
    ([(1, 0), (0, 1)], ((1, 0), (0, 1))),
    ([(1, -1)], ((1, -1), (0, 1))),
])
def test_extend_to_basis(vectors, expected):
    B = extend_to_basis(vectors, 2)
    assert B.vectors == expected


def test_extend_to_basis_keeps_the_given_prefix():
    rng = random.Random(3)
    for _ in range(30):
        d = rng.choice([2, 3, 4])
        U = _random_unimodular(rng, d)
        r = rng.randint(1, d)
        prefix = [tuple(row) for row in U.forward.entries[:r]]
        B = extend_to_basis(prefix, d)
        assert B.vectors[:r] == tuple(prefix)
        assert abs(IntMatrix(B.vectors).det()) == 1


def test_extend_to_basis_reports_non_primitive_witness():
    with pytest.raises(NonPrimitiveError) as info:
        extend_to_basis([(2, 0)], 2)
    assert info.value.witness == (1, 0)
    with pytest.raises(NonPrimitiveError) as info:
        extend_to_basis([(1, 1), (1, -1)], 2)
    assert info.value.witness is not None


def test_extend_to_basis_rejects_dependent_vectors():
    with pytest.raises(DimensionError):
        extend_to_basis([(1, 2), (2, 4)], 2)


def test_unimodular_from_basis_sends_basis_to_unit_vectors():
    A = unimodular_from_basis(LatticeBasis(((1, 1), (0, 1))))
    assert A.forward == IntMatrix.from_rows([[1, 0], [-1, 1]])
    assert A.apply((1, 1)) == (1, 0)
    assert A.apply((0, 1)) == (0, 1)


def test_unimodular_round_trip_on_random_points():
    rng = random.Random(5)
    for _ in range(20):
        d = rng.choice([2, 3])
        A = unimodular_from_basis(LatticeBasis(_random_unimodular(rng, d).forward.entries))
        for _ in range(5):
            x = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(d))
            assert A.apply_inverse(A.apply(x)) == x
            assert A.inverted().apply(A.apply(x)) == x


# --- Rational subspaces ---

@pytest.mark.parametrize("spanning, d, expected", [
    ([(Fraction(1, 2), Fraction(1, 2))], 2, [(1, 1)]),
    ([(1, 0), (0, 1)], 2, [(1, 0), (0, 1)]),
    ([], 2, []),
    ([(0, 0)], 2, []),
    ([(2, 4, 0), (0, 0, 3)], 3, [(1, 2, 0), (0, 0, 1)]),
])
def test_sublattice_of_subspace(spanning, d, expected):
    assert sublattice_of_subspace(spanning, d) == expected


def test_sublattice_of_subspace_is_saturated():
    # span{(2, 2, 0), (0, 2, 2)} ∩ Z^3 contains (1, 1, 0) and (0, 1, 1)
    basis = sublattice_of_subspace([(2, 2, 0), (0, 2, 2)], 3)
    assert len(basis) == 2
    extend_to_basis(basis, 3)


@pytest.mark.parametrize("v, expected", [
    ((1, 2), (1, 2)),
    ((Fraction(-1, 2), 1), (1, -2)),
    ((1, ROOT2), None),
    ((ROOT2, 2 * ROOT2), (1, 2)),
    ((QuadExt(1, 1, 2), QuadExt(2, 2, 2)), (1, 2)),
])
def test_is_rational_direction(v, expected):
    assert is_rational_direction(v) == expected


def test_is_rational_direction_rejects_zero():
    with pytest.raises(ScalarError):
        is_rational_direction((0, 0))
