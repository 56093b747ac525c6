import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from rn_structures.core.documents import (
    AlgebraSection,
    AutomorphismSection,
    BivectorSection,
    Document,
    EndomorphismSection,
)
from rn_structures.core.errors import Errors, RNStructuresError
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.lie_algebra import is_automorphism
from tests.rn_structures.conftest import a41_n


def test_algebra_section_builds_the_algebra(a41_section):
    algebra = AlgebraSection.model_validate(a41_section).to_algebra()

    assert algebra.name == "A4,1"
    assert algebra.structure[1, 3, 0] == 1
    assert algebra.structure[3, 2, 1] == -1


def test_algebra_section_from_algebra(a41):
    section = AlgebraSection.from_algebra(a41)

    assert section.brackets == [(2, 4, 1, "1"), (3, 4, 2, "1")]
    assert section.to_algebra().brackets() == a41.brackets()


@pytest.mark.parametrize(
    "content",
    [
        {"dim": 0},
        {"dim": 10},
        {"dim": 4, "brackets": [[1, 2, 3]]},
        {"dim": 4, "colour": "red"},
    ],
)
def test_invalid_algebra_sections(content: dict):
    with pytest.raises(ValidationError):
        AlgebraSection.model_validate(content)


@pytest.mark.parametrize(
    "content",
    [
        {"wedge": [[1, 4, "1"]], "expression": "X14"},
        {},
    ],
)
def test_bivector_needs_exactly_one_form(content: dict):
    with pytest.raises(ValidationError):
        BivectorSection.model_validate(content)


@pytest.mark.parametrize(
    "content",
    [
        {"expression": "X14 - X23"},
        {"wedge": [[1, 4, "1"], [2, 3, "-1"]]},
        {"wedge": [[1, 4, "1"], [3, 2, "1"]]},
    ],
)
def test_bivector_forms_agree(a41, base_r, content: dict):
    assert BivectorSection.model_validate(content).to_bivector(a41).equals(base_r)


def test_bivector_section_from_bivector(base_r):
    section = BivectorSection.from_bivector(base_r)

    assert section.wedge == [(1, 4, "1"), (2, 3, "-1")]
    assert section.expression is None


def test_endomorphism_section_round_trip(a41):
    n = a41_n(a41, 1, -2, 1, Fraction(1, 2))

    section = EndomorphismSection.from_endomorphism(n)

    assert section.matrix[0] == ["1", "2", "1/2", "0"]
    assert section.to_endomorphism(a41).equals(n)


def test_automorphism_section_from_family(a41):
    section = AutomorphismSection(
        family="A4,1",
        assignment={"a3": "1", "a4": "0", "a7": "1", "a8": "0", "a11": "1", "a12": "1", "a16": "1"},
    )

    matrix = section.to_matrix()

    assert mx.to_strings(matrix) == [
        ["1", "1", "1", "0"],
        ["0", "1", "1", "0"],
        ["0", "0", "1", "1"],
        ["0", "0", "0", "1"],
    ]
    assert is_automorphism(a41, matrix)


def test_automorphism_section_rejects_a_degenerate_point():
    section = AutomorphismSection(
        family="A4,1",
        assignment={"a3": "0", "a4": "0", "a7": "0", "a8": "0", "a11": "0", "a12": "0", "a16": "1"},
    )

    with pytest.raises(RNStructuresError) as exc_info:
        section.to_matrix()

    assert exc_info.value.error == Errors.CONSTRAINT_VIOLATION


def test_automorphism_section_needs_one_form():
    with pytest.raises(ValidationError):
        AutomorphismSection(matrix=[["1"]], family="A4,1")


def test_document_require(a41_section):
    doc = Document.model_validate({"algebra": a41_section})

    doc.require("algebra")
    with pytest.raises(RNStructuresError) as exc_info:
        doc.require("algebra", "r", "n")

    assert exc_info.value.error == Errors.INVALID_DOCUMENT
    assert "missing section(s): r, n" in str(exc_info.value)


def test_document_json_omits_empty_sections(a41, base_r):
    doc = Document(
        algebra=AlgebraSection.from_algebra(a41),
        r=BivectorSection.from_bivector(base_r),
    )

    content = json.loads(doc.to_json())

    assert set(content) == {"algebra", "r"}
    assert content["r"] == {"wedge": [[1, 4, "1"], [2, 3, "-1"]]}
    assert Document.model_validate_json(doc.to_json()).r.to_bivector(a41).equals(base_r)


def test_unknown_top_level_section_is_rejected(a41_section):
    with pytest.raises(ValidationError):
        Document.model_validate({"algebra": a41_section, "extras": {}})


def test_bad_rational_in_matrix(a41):
    section = EndomorphismSection(matrix=[["1", "x"], ["0", "1"]])

    with pytest.raises(RNStructuresError) as exc_info:
        section.to_endomorphism(a41)

    assert exc_info.value.error == Errors.PARSE_ERROR
