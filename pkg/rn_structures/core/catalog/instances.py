from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache

import numpy as np

from rn_structures.core.catalog.records import CatalogEntry
from rn_structures.core.catalog.sampling import (
    Assignment,
    algebra_assignment,
    complete_assignment,
    draw_assignments,
    evaluate_expression,
)
from rn_structures.core.equivalence import AutomorphismFamily
from rn_structures.core.errors import Errors
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.kernel.parser import parse_polynomial, parse_vector, parse_wedge
from rn_structures.core.lie_algebra import LieAlgebra, new_lie_algebra
from rn_structures.core.pn_structures import Bivector, Endomorphism, RNStructure
from rn_structures.core.settings import SamplingSettings

type Instance = Bivector | Endomorphism | RNStructure | np.ndarray


@lru_cache(maxsize=1024)
def _wedge(src: str, dim: int, params: tuple[str, ...]):
    return parse_wedge(src, dim, params)


@lru_cache(maxsize=1024)
def _vector(src: str, dim: int, params: tuple[str, ...]):
    return parse_vector(src, dim, params)


def instantiate_algebra(entry: CatalogEntry, assignment: Mapping[str, Fraction] | None = None) -> LieAlgebra:
    assignment = algebra_assignment(entry) if assignment is None else assignment
    brackets = [
        (i, j, k, evaluate_expression(src, assignment)) for i, j, k, src in entry.algebra.brackets
    ]
    return new_lie_algebra(entry.algebra.dim, brackets, entry.id)


def _bivector(algebra: LieAlgebra, src: str, assignment: Mapping[str, Fraction]) -> Bivector:
    matrix = mx.zeros(algebra.dim)
    for (i, j), coeff in _wedge(src, algebra.dim, tuple(assignment)).items():
        value = coeff.evaluate(assignment)
        matrix[i, j] = value
        matrix[j, i] = -value
    return Bivector(algebra, matrix)


def _endomorphism(algebra: LieAlgebra, columns: tuple[str, ...], assignment: Mapping[str, Fraction]) -> Endomorphism:
    if len(columns) != algebra.dim:
        raise Errors.DIMENSION_MISMATCH.as_exc(f"{len(columns)} columns for dim {algebra.dim}")

    matrix = mx.zeros(algebra.dim)
    for j, src in enumerate(columns):
        for i, coeff in enumerate(_vector(src, algebra.dim, tuple(assignment))):
            matrix[i, j] = coeff.evaluate(assignment)
    return Endomorphism(algebra, matrix)


def representative_r(entry: CatalogEntry, assignment: Mapping[str, Fraction], algebra: LieAlgebra | None = None) -> Bivector:
    """The invertible r of the entry's r-n family."""
    algebra = algebra or instantiate_algebra(entry, assignment)
    return _bivector(algebra, entry.rn_family.r, assignment)


def stored_dual(entry: CatalogEntry, assignment: Mapping[str, Fraction]) -> LieAlgebra:
    brackets = [
        (i, j, m, evaluate_expression(src, assignment)) for i, j, m, src in entry.rn_family.dual
    ]
    return new_lie_algebra(entry.algebra.dim, brackets, f"{entry.id}*")


def _from_complete(entry: CatalogEntry, class_id: str, assignment: Assignment, algebra: LieAlgebra) -> Instance:
    match class_id.split("/", 1):
        case ["r", row]:
            return _bivector(algebra, entry.r_class(row).r, assignment)
        case ["rn"]:
            return RNStructure.raw(
                representative_r(entry, assignment, algebra),
                _endomorphism(algebra, entry.rn_family.n, assignment),
            )
        case ["n", _]:
            return _endomorphism(algebra, entry.rn_family.n, assignment)
        case ["automorphism"]:
            return mx.as_fraction_matrix(
                [[evaluate_expression(src, assignment) for src in row] for row in entry.automorphisms.matrix]
            )
        case _:
            raise Errors.UNKNOWN_CLASS.as_exc(f"{entry.id}: {class_id}")


def instantiate(
    entry: CatalogEntry,
    class_id: str,
    assignment: Mapping[str, Fraction | int | str],
    algebra: LieAlgebra | None = None,
) -> Instance:
    """Exact substitution into a stored class.

    `r/<id>` gives a Bivector, `rn` an unvalidated RNStructure, `n/<id>` an
    Endomorphism and `automorphism` a matrix whose columns are the images of
    the basis vectors.
    """
    complete = complete_assignment(entry, class_id, assignment)
    algebra = algebra or instantiate_algebra(entry, complete)
    return _from_complete(entry, class_id, complete, algebra)


def sample_parameters(
    entry: CatalogEntry,
    class_id: str,
    seed: int,
    count: int,
    settings: SamplingSettings = SamplingSettings(),
    vary_algebra: bool = False,
) -> list[Assignment]:
    """Seeded samples meeting the class constraints, including any stated Pfaffian condition."""
    return draw_assignments(entry, class_id, seed, count, settings, vary_algebra)


def automorphism_family(
    entry: CatalogEntry, algebra_values: Mapping[str, Fraction | int | str] | None = None
) -> AutomorphismFamily:
    """Table entries as polynomials in the automorphism parameters, algebra parameters fixed."""
    fixed = algebra_assignment(entry, algebra_values)
    record = entry.automorphisms
    variables = tuple(fixed) + record.params

    def lift(src: str):
        return parse_polynomial(src, variables).substitute(fixed).aligned(record.params)

    entries = np.empty((entry.algebra.dim, entry.algebra.dim), dtype=object)
    for i, row in enumerate(record.matrix):
        for j, src in enumerate(row):
            entries[i, j] = lift(src)

    return AutomorphismFamily(
        algebra=instantiate_algebra(entry, fixed),
        parameters=record.params,
        entries=entries,
        nonvanishing=lift(record.nonvanishing),
        name=entry.id,
    )
