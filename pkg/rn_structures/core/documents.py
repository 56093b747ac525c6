"""The structured-text document: one JSON shape for inputs, catalog exports and reports.

Numbers are strings holding exact rationals (`"3"`, `"-1/2"`); polynomial
entries use the kernel expression grammar.
"""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from rn_structures.core.errors import Errors
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.kernel.parser import parse_rational
from rn_structures.core.lie_algebra import LieAlgebra, new_lie_algebra
from rn_structures.core.pn_structures import (
    Bivector,
    Endomorphism,
    bivector_from_expression,
    bivector_from_wedges,
)


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _rationals(rows: list[list[str]]) -> np.ndarray:
    return mx.as_fraction_matrix([[parse_rational(value) for value in row] for row in rows])


class AlgebraSection(Section):
    dim: int = Field(ge=1, le=9)
    brackets: list[tuple[int, int, int, str]] = Field(default_factory=list)
    name: str | None = None

    def to_algebra(self) -> LieAlgebra:
        return new_lie_algebra(self.dim, self.brackets, self.name)

    @staticmethod
    def from_algebra(algebra: LieAlgebra) -> AlgebraSection:
        return AlgebraSection(
            dim=algebra.dim,
            brackets=[(i, j, k, str(value)) for i, j, k, value in algebra.brackets()],
            name=algebra.name,
        )


class BivectorSection(Section):
    wedge: list[tuple[int, int, str]] | None = None
    expression: str | None = None

    @model_validator(mode="after")
    def _one_form(self) -> BivectorSection:
        if (self.wedge is None) == (self.expression is None):
            raise ValueError("give exactly one of 'wedge' and 'expression'")
        return self

    def to_bivector(self, algebra: LieAlgebra) -> Bivector:
        if self.expression is not None:
            return bivector_from_expression(algebra, self.expression)
        return bivector_from_wedges(algebra, self.wedge)

    @staticmethod
    def from_bivector(r: Bivector) -> BivectorSection:
        return BivectorSection(wedge=[(i, j, str(c)) for i, j, c in r.wedges()])


class EndomorphismSection(Section):
    matrix: list[list[str]]

    def to_endomorphism(self, algebra: LieAlgebra) -> Endomorphism:
        return Endomorphism(algebra, _rationals(self.matrix))

    @staticmethod
    def from_endomorphism(n: Endomorphism) -> EndomorphismSection:
        return EndomorphismSection(matrix=mx.to_strings(n.matrix))


class AutomorphismSection(Section):
    """Either an explicit matrix or a catalog family with a parameter assignment."""

    matrix: list[list[str]] | None = None
    family: str | None = None
    assignment: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _one_form(self) -> AutomorphismSection:
        if (self.matrix is None) == (self.family is None):
            raise ValueError("give exactly one of 'matrix' and 'family'")
        return self

    def to_matrix(self) -> np.ndarray:
        if self.matrix is not None:
            return _rationals(self.matrix)

        from rn_structures.core.catalog import automorphism_family, get_entry

        family = automorphism_family(get_entry(self.family), self.assignment)
        return family.witness({name: parse_rational(v) for name, v in self.assignment.items()}).matrix


class PhaseSpaceSection(Section):
    dim: int = Field(default=4, ge=2)
    variables: list[str] | None = None
    pi: list[list[str]] | None = None


class RealizationSection(Section):
    S: list[str]


class RepresentationSection(Section):
    T: list[list[list[str]]]

    def to_matrices(self) -> tuple[np.ndarray, ...]:
        return tuple(_rationals(rows) for rows in self.T)


class Document(Section):
    algebra: AlgebraSection | None = None
    r: BivectorSection | None = None
    n: EndomorphismSection | None = None
    automorphism: AutomorphismSection | None = None
    phase_space: PhaseSpaceSection | None = None
    realization: RealizationSection | None = None
    representation: RepresentationSection | None = None
    parts: list[BivectorSection] = Field(default_factory=list)

    def require(self, *sections: str) -> None:
        missing = [name for name in sections if not getattr(self, name)]
        if missing:
            raise Errors.INVALID_DOCUMENT.as_exc(f"missing section(s): {', '.join(missing)}")

    def lie_algebra(self) -> LieAlgebra:
        self.require("algebra")
        return self.algebra.to_algebra()

    def to_json(self) -> str:
        return self.model_dump_json(exclude_none=True, exclude_defaults=True, indent=2)
