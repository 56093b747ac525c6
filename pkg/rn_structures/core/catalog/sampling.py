"""Constrained rational parameters for catalog classes.

Every sampleable item of an entry (see `CatalogEntry.class_ids`) resolves to a
`ParameterSpace`: the names drawn at random, the constraints they must meet,
derived quotients and fixed substitutions. Algebra parameters come first and
default to the entry's fixed witness values.
"""

import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from logging import getLogger

from rn_structures.core.catalog.records import CatalogEntry, Constraint, ConstraintKind, Derived
from rn_structures.core.errors import Errors, RNStructuresError
from rn_structures.core.kernel.parser import parse_polynomial, parse_rational
from rn_structures.core.kernel.polynomial import Polynomial
from rn_structures.core.settings import SamplingSettings

logger = getLogger(__name__)

type Assignment = dict[str, Fraction]

_ZERO_ODDS = 5


@dataclass(slots=True, frozen=True)
class ParameterSpace:
    sampled: tuple[str, ...]
    constraints: tuple[Constraint, ...] = ()
    derived: tuple[Derived, ...] = ()
    assign: tuple[tuple[str, str], ...] = ()
    nonvanishing: str | None = None


@lru_cache(maxsize=4096)
def _parse(src: str, variables: tuple[str, ...]) -> Polynomial:
    return parse_polynomial(src, variables)


def evaluate_expression(src: str, assignment: Mapping[str, Fraction]) -> Fraction:
    return _parse(src, tuple(assignment)).evaluate(assignment)


def _as_fraction(value: Fraction | int | str) -> Fraction:
    return parse_rational(value) if isinstance(value, str) else Fraction(value)


def satisfies(constraint: Constraint, assignment: Mapping[str, Fraction]) -> bool:
    values = [assignment[name] for name in constraint.params]
    match constraint.kind:
        case ConstraintKind.NONZERO:
            return all(v != 0 for v in values)
        case ConstraintKind.POSITIVE:
            return all(v > 0 for v in values)
        case ConstraintKind.NEGATIVE:
            return all(v < 0 for v in values)
        case ConstraintKind.SOME_NONZERO:
            return any(v != 0 for v in values)
        case ConstraintKind.SOME_ZERO:
            return any(v == 0 for v in values)
        case ConstraintKind.DISTINCT:
            return len(set(values)) == len(values)
        case ConstraintKind.INTERVAL:
            low = parse_rational(constraint.low)
            high = parse_rational(constraint.high)
            return all(low < v < high for v in values)


def violated(constraints: Iterable[Constraint], assignment: Mapping[str, Fraction]) -> list[Constraint]:
    return [c for c in constraints if not satisfies(c, assignment)]


def _apply_derived(derived: Iterable[Derived], assignment: Assignment) -> bool:
    """Extend in place; False when a denominator vanishes."""
    for item in derived:
        denominator = evaluate_expression(item.den, assignment)
        if denominator == 0:
            return False
        assignment[item.name] = evaluate_expression(item.num, assignment) / denominator
    return True


def class_space(entry: CatalogEntry, class_id: str) -> ParameterSpace:
    family = entry.rn_family
    match class_id.split("/", 1):
        case ["algebra"]:
            return ParameterSpace(())
        case ["r", row]:
            record = entry.r_class(row)
            return ParameterSpace(
                record.params, record.constraints, record.derived, nonvanishing=record.nonvanishing
            )
        case ["rn"]:
            return ParameterSpace(family.r_params + family.params, family.r_constraints)
        case ["n", row]:
            record = entry.n_class(row)
            free = tuple(p for p in family.params if p not in record.assign)
            return ParameterSpace(
                family.r_params + free,
                family.r_constraints + record.constraints,
                assign=tuple(record.assign.items()),
            )
        case ["automorphism"]:
            automorphisms = entry.automorphisms
            return ParameterSpace(automorphisms.params, nonvanishing=automorphisms.nonvanishing)
        case _:
            raise Errors.UNKNOWN_CLASS.as_exc(f"{entry.id}: {class_id}")


def algebra_assignment(
    entry: CatalogEntry, values: Mapping[str, Fraction | int | str] | None = None
) -> Assignment:
    """Algebra parameters (defaults unless given) plus the algebra's derived parameters."""
    record = entry.algebra
    values = values or {}
    assignment = {
        name: _as_fraction(values.get(name, record.defaults.get(name, "0")))
        for name in record.params
    }

    broken = violated(record.constraints, assignment)
    if broken or not _apply_derived(record.derived, assignment):
        raise Errors.CONSTRAINT_VIOLATION.as_exc(
            f"{entry.id} algebra parameters {_render(assignment)}"
        )
    return assignment


def _finish(space: ParameterSpace, assignment: Assignment) -> bool:
    """Derived and fixed parameters, then constraints; False on rejection."""
    if not _apply_derived(space.derived, assignment):
        return False
    for name, src in space.assign:
        assignment[name] = evaluate_expression(src, assignment)
    if violated(space.constraints, assignment):
        return False
    return space.nonvanishing is None or evaluate_expression(space.nonvanishing, assignment) != 0


def complete_assignment(
    entry: CatalogEntry, class_id: str, values: Mapping[str, Fraction | int | str]
) -> Assignment:
    """Validate user-supplied class parameters and fill in everything derived from them."""
    space = class_space(entry, class_id)
    assignment = algebra_assignment(entry, values)

    missing = [name for name in space.sampled if name not in values]
    if missing:
        raise Errors.MISSING_ASSIGNMENT.as_exc(f"{entry.id} {class_id}: {', '.join(missing)}")
    for name in space.sampled:
        assignment[name] = _as_fraction(values[name])

    if not _finish(space, assignment):
        raise Errors.CONSTRAINT_VIOLATION.as_exc(f"{entry.id} {class_id}: {_render(assignment)}")

    for name, _ in space.assign:
        if name in values and _as_fraction(values[name]) != assignment[name]:
            raise Errors.CONSTRAINT_VIOLATION.as_exc(
                f"{entry.id} {class_id}: {name} is fixed to {assignment[name]}"
            )
    return assignment


def draw_rational(rng: random.Random, settings: SamplingSettings) -> Fraction:
    if rng.randrange(_ZERO_ODDS) == 0:
        return Fraction(0)
    return Fraction(
        rng.randint(-settings.numerator_bound, settings.numerator_bound),
        rng.randint(1, settings.max_denominator),
    )


def draw_assignments(
    entry: CatalogEntry,
    class_id: str,
    seed: int,
    count: int,
    settings: SamplingSettings = SamplingSettings(),
    vary_algebra: bool = False,
) -> list[Assignment]:
    """Rejection sampling; deterministic in (seed, entry, class)."""
    space = class_space(entry, class_id)
    rng = random.Random(f"{seed}:{entry.id}:{class_id}")
    algebra = entry.algebra

    samples: list[Assignment] = []
    attempts = 0
    while len(samples) < count:
        attempts += 1
        if attempts > settings.max_attempts * count:
            raise Errors.UNSATISFIABLE.as_exc(
                f"{entry.id} {class_id}: {len(samples)} of {count} samples after {attempts - 1} attempts"
            )

        if vary_algebra and algebra.params:
            values = {name: draw_rational(rng, settings) for name in algebra.params}
            try:
                assignment = algebra_assignment(entry, values)
            except RNStructuresError:
                continue
        else:
            assignment = algebra_assignment(entry)

        for name in space.sampled:
            assignment[name] = draw_rational(rng, settings)

        if not _finish(space, assignment):
            continue
        samples.append(assignment)

    logger.debug("%s %s: %d samples in %d attempts", entry.id, class_id, count, attempts)
    return samples


def _render(assignment: Mapping[str, Fraction]) -> str:
    return ", ".join(f"{name}={value}" for name, value in assignment.items())


def render_assignment(assignment: Mapping[str, Fraction]) -> dict[str, str]:
    return {name: str(value) for name, value in assignment.items()}
