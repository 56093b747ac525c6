from fractions import Fraction

import pytest

from rn_structures.core.catalog import automorphism_family, get_entry, load_catalog, sample_parameters
from rn_structures.core.equivalence import (
    compose,
    generic_bivector,
    invert,
    orbit_equations,
    orbit_n,
    orbit_r,
    search_witness,
    stabilizer_condition,
    symbolic_orbit_r,
    verify_witness,
)
from rn_structures.core.errors import Errors, RNStructuresError
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.kernel.parser import parse_polynomial
from rn_structures.core.kernel.polynomial import Polynomial
from rn_structures.core.lie_algebra import is_automorphism
from rn_structures.core.pn_structures import Bivector, bivector_from_expression
from rn_structures.core.settings import SearchBudget
from tests.rn_structures.conftest import a41_n

STABILIZER_SAMPLE = [[1, 1, 1, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]]


@pytest.fixture()
def family():
    return automorphism_family(get_entry("A4,1"))


@pytest.fixture()
def stabilizer():
    return mx.as_fraction_matrix(STABILIZER_SAMPLE)


@pytest.mark.parametrize(
    ("i", "j", "expected"),
    [
        (1, 4, "a11*a16^3*r14"),
        (2, 3, "a11^2*a16*r23"),
        (1, 3, "a11^2*a16^2*r13 + a11*a12*a16^2*r14 + a7*a11*a16*r23"),
        (1, 2, "a11^2*a16^3*r12 + a7*a11*a16^2*r13 + a8*a11*a16^2*r14 + (a7^2 - a3*a11)*a16*r23"),
    ],
)
def test_symbolic_orbit_on_table_support(family, i: int, j: int, expected: str):
    r = generic_bivector(4, support=[(1, 2), (1, 3), (1, 4), (2, 3)])

    orbit = symbolic_orbit_r(family, r)

    entry = orbit[i - 1, j - 1]
    assert entry == parse_polynomial(expected, entry.variables)
    assert orbit[j - 1, i - 1] == -entry


def test_symbolic_orbit_at_identity(family, base_r):
    identity = {name: 0 for name in family.parameters} | {"a11": 1, "a16": 1}

    orbit = symbolic_orbit_r(family, base_r)

    values = [[entry.evaluate(identity) for entry in row] for row in orbit]
    assert mx.is_zero(mx.as_fraction_matrix(values) - base_r.matrix)


def test_stabilizer_is_solved_by_its_parametrization(family, base_r):
    equations = stabilizer_condition(family, base_r)
    variables = equations[0].variables
    a7 = Polynomial.variable(variables, "a7")
    a8 = Polynomial.variable(variables, "a8")

    reduced = [
        eq.substitute({"a11": 1, "a16": 1}).replace("a12", a7).replace("a3", a7**2 - a8)
        for eq in equations
    ]

    assert equations
    assert all(eq.is_zero() for eq in reduced)


def test_orbit_equations_with_endomorphisms(family, a41, base_r):
    n = a41_n(a41, 1, 1, 1, 1)
    identity = {name: 0 for name in family.parameters} | {"a11": 1, "a16": 1}
    scaled = identity | {"a16": 2}

    r_only = orbit_equations(family, base_r, base_r)
    with_n = orbit_equations(family, base_r, base_r, n, n)

    assert len(with_n) > len(r_only)
    assert all(eq.evaluate(identity) == 0 for eq in with_n)
    assert any(eq.evaluate(scaled) != 0 for eq in r_only)


def test_stabilizer_of_zero_is_empty(family, a41):
    assert stabilizer_condition(family, Bivector(a41, mx.zeros(4))) == []


def test_verify_witness(base_r, stabilizer):
    wrong = stabilizer.copy()
    wrong[0, 2] = Fraction(2)

    assert verify_witness(mx.identity(4), base_r, base_r)
    assert verify_witness(stabilizer, base_r, base_r)
    assert not verify_witness(wrong, base_r, base_r)


@pytest.mark.parametrize(
    ("matrix", "error"),
    [
        (mx.as_fraction_matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 2]]), Errors.NOT_AN_AUTOMORPHISM),
        (mx.identity(3), Errors.DIMENSION_MISMATCH),
    ],
)
def test_verify_witness_rejects_bad_matrices(base_r, matrix, error: Errors):
    with pytest.raises(RNStructuresError) as exc_info:
        verify_witness(matrix, base_r, base_r)

    assert exc_info.value.error == error


def test_verify_witness_needs_both_endomorphisms(a41, base_r):
    with pytest.raises(RNStructuresError) as exc_info:
        verify_witness(mx.identity(4), base_r, base_r, n=a41_n(a41, 1, 0, 1, 0))

    assert exc_info.value.error == Errors.DIMENSION_MISMATCH


def test_search_finds_identity_first(family, base_r):
    witness = search_witness(family, base_r, base_r)

    assert witness is not None
    assert mx.is_zero(witness.matrix - mx.identity(4))


def test_search_within_a_sign_class(family, a41):
    r = bivector_from_expression(a41, "X12 + X13")
    r2 = bivector_from_expression(a41, "X12 + 4*X13")

    witness = search_witness(family, r, r2, budget=SearchBudget(random_trials=10_000))

    assert witness is not None
    assert verify_witness(witness, r, r2)
    assert verify_witness(invert(witness), r2, r)


def test_search_across_sign_classes_finds_nothing(family, a41):
    r = bivector_from_expression(a41, "X13")
    r2 = bivector_from_expression(a41, "-X13")

    assert search_witness(family, r, r2, budget=SearchBudget(random_trials=200)) is None


def test_search_matches_endomorphisms(family, a41, base_r, stabilizer):
    n = a41_n(a41, 1, -2, 1, 1)
    n2 = orbit_n(stabilizer, n)

    witness = search_witness(family, base_r, base_r, n, n2)

    assert witness is not None
    assert verify_witness(witness, base_r, base_r, n, n2)


def test_witness_carries_over_to_the_compatible_pair(a41, base_r, stabilizer):
    n = a41_n(a41, 2, 1, 2, -1)
    r2 = orbit_r(stabilizer, base_r)
    n2 = orbit_n(stabilizer, n)

    assert verify_witness(stabilizer, base_r, r2, n, n2)
    assert verify_witness(stabilizer, n.apply(base_r), n2.apply(r2))


def test_composed_witnesses_verify(family, a41):
    r = bivector_from_expression(a41, "X12 + X13")
    first = family.witness({"a3": 0, "a4": 1, "a7": 0, "a8": 0, "a11": 2, "a12": 0, "a16": 1})
    second = family.witness({"a3": 1, "a4": 0, "a7": 1, "a8": 0, "a11": 1, "a12": 1, "a16": -1})
    middle = orbit_r(first.matrix, r)
    last = orbit_r(second.matrix, middle)

    assert verify_witness(compose(second, first), r, last)
    assert verify_witness(invert(compose(second, first)), last, r)


@pytest.mark.parametrize("entry", load_catalog(), ids=lambda entry: entry.id)
def test_sampled_family_members_are_automorphisms(entry):
    family = automorphism_family(entry)

    for sample in sample_parameters(entry, "automorphism", seed=4, count=5):
        assert is_automorphism(family.algebra, family.witness(sample).matrix)
