from fractions import Fraction

import numpy as np
import pytest

from rn_structures.core.errors import Errors, RNStructuresError
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.lie_algebra import (
    LieAlgebra,
    abelian,
    adjoint_matrices,
    adjoint_matrix,
    bracket,
    check_jacobi,
    coadjoint_matrix,
    is_automorphism,
    new_lie_algebra,
)


def test_brackets_fill_antisymmetric_partners(a41: LieAlgebra):
    assert a41.structure[1, 3, 0] == 1
    assert a41.structure[3, 1, 0] == -1
    assert a41.brackets() == [(2, 4, 1, 1), (3, 4, 2, 1)]


def test_a41_satisfies_jacobi(a41: LieAlgebra):
    assert check_jacobi(a41).valid


def test_abelian_has_no_defects():
    algebra = abelian(4)

    assert algebra.is_abelian()
    assert check_jacobi(algebra).valid


def test_jacobi_defect_is_located():
    algebra = new_lie_algebra(3, [(1, 2, 3, 1), (2, 3, 1, 1), (1, 3, 3, 1)])

    report = check_jacobi(algebra)

    assert not report.valid
    first = report.defects[0]
    assert (first.i, first.j, first.k, first.l) == (1, 2, 3, 1)


def test_duplicate_bracket_is_rejected():
    with pytest.raises(RNStructuresError) as exc_info:
        new_lie_algebra(4, [(2, 4, 1, 1), (4, 2, 1, -1)])

    assert Errors.DUPLICATE_BRACKET.value in str(exc_info.value)


@pytest.mark.parametrize(
    "brackets",
    [
        [(1, 1, 2, 1)],
        [(0, 2, 1, 1)],
        [(1, 2, 5, 1)],
    ],
)
def test_bracket_indices_are_checked(brackets):
    with pytest.raises(RNStructuresError) as exc_info:
        new_lie_algebra(4, brackets)

    assert Errors.INDEX_OUT_OF_RANGE.value in str(exc_info.value)


def test_structure_must_be_antisymmetric():
    structure = mx.zeros3(2)
    structure[0, 1, 0] = Fraction(1)

    with pytest.raises(RNStructuresError) as exc_info:
        LieAlgebra(2, structure)

    assert Errors.NOT_ANTISYMMETRIC.value in str(exc_info.value)


def test_bracket_of_coefficient_vectors(a41: LieAlgebra):
    result = bracket(a41, [0, 1, 1, 0], [0, 0, 0, 2])

    assert list(result) == [2, 2, 0, 0]


def test_adjoint_matrices_match_bracket(a41: LieAlgebra):
    adjoint = adjoint_matrices(a41)

    for i in range(4):
        e_i = [int(m == i) for m in range(4)]
        ad = adjoint_matrix(a41, e_i)
        for j in range(4):
            e_j = [int(m == j) for m in range(4)]
            assert list(ad[:, j]) == list(bracket(a41, e_i, e_j))
        assert mx.is_zero(adjoint.X[i] + a41.structure[i, :, :])


def test_coadjoint_is_minus_transpose(a41: LieAlgebra):
    x = [1, 2, 3, 4]

    assert mx.is_zero(coadjoint_matrix(a41, x) + adjoint_matrix(a41, x).T)


def test_automorphism_family_member(a41: LieAlgebra):
    # a11 = 1, a16 = 1, a7 = 1, a8 = 0, a4 = 0, a3 = 1, a12 = 1
    a = mx.as_fraction_matrix([[1, 1, 1, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]])

    assert is_automorphism(a41, a)


@pytest.mark.parametrize(
    "rows",
    [
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 2]],
        [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    ],
)
def test_non_automorphisms(a41: LieAlgebra, rows):
    assert not is_automorphism(a41, mx.as_fraction_matrix(rows))


def test_automorphism_shape_is_checked(a41: LieAlgebra):
    with pytest.raises(RNStructuresError):
        is_automorphism(a41, np.array([[Fraction(1)]], dtype=object))
