"""Equivalence of r-matrices, Nijenhuis operators and r-n structures under automorphisms.

An automorphism A is stored with the images A(X_j) as columns. It sends a
bivector r to A r A^t and an endomorphism n to A n A^-1.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger

import numpy as np

from rn_structures.core.errors import Errors, RNStructuresError
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.kernel.polynomial import Polynomial
from rn_structures.core.lie_algebra import LieAlgebra, is_automorphism
from rn_structures.core.pn_structures import Bivector, Endomorphism
from rn_structures.core.settings import SearchBudget

logger = getLogger(__name__)

type Assignment = dict[str, Fraction]


@dataclass(slots=True, eq=False)
class AutomorphismFamily:
    """Automorphisms parametrised by polynomial entries; valid where `nonvanishing` is nonzero."""

    algebra: LieAlgebra
    parameters: tuple[str, ...]
    entries: np.ndarray
    nonvanishing: Polynomial
    name: str | None = None

    def _point(self, assignment: Mapping[str, Fraction | int]) -> Assignment:
        missing = [name for name in self.parameters if name not in assignment]
        if missing:
            raise Errors.MISSING_ASSIGNMENT.as_exc(", ".join(missing))
        return {name: Fraction(assignment[name]) for name in self.parameters}

    def instantiate(self, assignment: Mapping[str, Fraction | int]) -> np.ndarray:
        point = self._point(assignment)
        return np.array(
            [[entry.evaluate(point) for entry in row] for row in self.entries], dtype=object
        )

    def admits(self, assignment: Mapping[str, Fraction | int]) -> bool:
        return self.nonvanishing.evaluate(self._point(assignment)) != 0

    def witness(self, assignment: Mapping[str, Fraction | int]) -> Witness:
        if not self.admits(assignment):
            raise Errors.CONSTRAINT_VIOLATION.as_exc(
                f"{self.nonvanishing} vanishes at the given assignment"
            )
        point = self._point(assignment)
        return Witness(self.instantiate(point), point)


@dataclass(slots=True, eq=False)
class Witness:
    matrix: np.ndarray
    assignment: Assignment | None = None


def orbit_r(a: np.ndarray, r: Bivector) -> Bivector:
    return Bivector(r.algebra, a @ r.matrix @ a.T, r.on_dual)


def orbit_n(a: np.ndarray, n: Endomorphism) -> Endomorphism:
    return Endomorphism(n.algebra, a @ n.matrix @ mx.inverse(a))


def compose(second: Witness, first: Witness) -> Witness:
    """The witness applying `first`, then `second`."""
    return Witness(second.matrix @ first.matrix)


def invert(witness: Witness) -> Witness:
    return Witness(mx.inverse(witness.matrix))


def generic_bivector(
    dim: int, symbol: str = "r", support: Iterable[tuple[int, int]] | None = None
) -> np.ndarray:
    """Antisymmetric matrix of symbols `r{i}{j}` (1-based, i < j), optionally on a given support."""
    if support is None:
        support = ((i, j) for i in range(1, dim + 1) for j in range(i + 1, dim + 1))
    pairs = sorted(support)
    variables = tuple(f"{symbol}{i}{j}" for i, j in pairs)

    matrix = np.array([[Polynomial.zero(variables)] * dim for _ in range(dim)], dtype=object)
    for (i, j), name in zip(pairs, variables):
        entry = Polynomial.variable(variables, name)
        matrix[i - 1, j - 1] = entry
        matrix[j - 1, i - 1] = -entry
    return matrix


def _variables_of(matrix: np.ndarray) -> tuple[str, ...]:
    names: list[str] = []
    for value in matrix.flat:
        if isinstance(value, Polynomial):
            names.extend(name for name in value.variables if name not in names)
    return tuple(names)


def _lift(matrix: np.ndarray, variables: tuple[str, ...]) -> np.ndarray:
    lifted = np.empty(matrix.shape, dtype=object)
    for index, value in np.ndenumerate(matrix):
        lifted[index] = (
            value.aligned(variables)
            if isinstance(value, Polynomial)
            else Polynomial.constant(variables, value)
        )
    return lifted


def _as_matrix(value: Bivector | Endomorphism | np.ndarray) -> np.ndarray:
    return value if isinstance(value, np.ndarray) else value.matrix


def symbolic_orbit_r(fam: AutomorphismFamily, r: Bivector | np.ndarray) -> np.ndarray:
    """A r A^t with polynomial entries in the family parameters and any symbols of r."""
    r_matrix = _as_matrix(r)
    variables = fam.parameters + tuple(
        name for name in _variables_of(r_matrix) if name not in fam.parameters
    )
    a = _lift(fam.entries, variables)
    return a @ _lift(r_matrix, variables) @ a.T


def orbit_equations(
    fam: AutomorphismFamily,
    r: Bivector,
    r2: Bivector,
    n: Endomorphism | None = None,
    n2: Endomorphism | None = None,
) -> list[Polynomial]:
    """Nonzero polynomials among A r A^t - r2 (upper triangle) and A n - n2 A."""
    _require_pair(n, n2)
    d = fam.algebra.dim
    variables = fam.parameters
    a = _lift(fam.entries, variables)

    residual = a @ _lift(r.matrix, variables) @ a.T - _lift(r2.matrix, variables)
    equations = [residual[i, j] for i in range(d) for j in range(i + 1, d)]

    if n is not None:
        twisted = a @ _lift(n.matrix, variables) - _lift(n2.matrix, variables) @ a
        equations.extend(twisted.flat)

    return [eq for eq in equations if not eq.is_zero()]


def stabilizer_condition(fam: AutomorphismFamily, r: Bivector) -> list[Polynomial]:
    return orbit_equations(fam, r, r)


def _require_pair(n: Endomorphism | None, n2: Endomorphism | None) -> None:
    if (n is None) != (n2 is None):
        raise Errors.DIMENSION_MISMATCH.as_exc("n and n2 must be given together")


def verify_witness(
    automorphism: np.ndarray | Witness,
    r: Bivector,
    r2: Bivector,
    n: Endomorphism | None = None,
    n2: Endomorphism | None = None,
) -> bool:
    _require_pair(n, n2)
    a = automorphism.matrix if isinstance(automorphism, Witness) else automorphism
    d = r.algebra.dim
    if a.shape != (d, d) or r2.matrix.shape != (d, d):
        raise Errors.DIMENSION_MISMATCH.as_exc(f"witness of shape {a.shape} for dim {d}")
    if not is_automorphism(r.algebra, a):
        raise Errors.NOT_AN_AUTOMORPHISM.as_exc(mx.to_text(a))

    if not orbit_r(a, r).equals(r2):
        return False
    # A n = n2 A avoids inverting A
    return n is None or mx.is_zero(a @ n.matrix - n2.matrix @ a)


class _BudgetExhausted(Exception):
    pass


def _grid(bound: int) -> list[Fraction]:
    values = {Fraction(p, q) for q in range(1, bound + 1) for p in range(1, bound + 1)}
    positive = sorted(values, key=lambda v: (max(v.numerator, v.denominator), v))
    return [value for v in positive for value in (v, -v)]


@dataclass(slots=True)
class _Search:
    fam: AutomorphismFamily
    r: Bivector
    r2: Bivector
    n: Endomorphism | None
    n2: Endomorphism | None
    budget: SearchBudget
    order: tuple[str, ...] = field(init=False)
    scales: frozenset[str] = field(init=False)
    nodes: int = field(init=False, default=0)

    def __post_init__(self) -> None:
        self.scales = frozenset(self.fam.nonvanishing.used_variables())
        self.order = tuple(sorted(self.fam.parameters, key=lambda name: name not in self.scales))

    @staticmethod
    def _propagate(
        equations: list[Polynomial], solved: dict[str, Polynomial]
    ) -> tuple[list[Polynomial], dict[str, Polynomial]] | None:
        """Eliminate parameters that occur alone with a constant coefficient; None on contradiction."""
        while True:
            remaining = []
            for eq in equations:
                if eq.is_zero():
                    continue
                if eq.is_constant():
                    return None
                remaining.append(eq)
            equations = remaining

            step = next(
                (
                    (name, split)
                    for eq in equations
                    for name in eq.used_variables()
                    if (split := eq.linear_coefficient(name)) is not None
                ),
                None,
            )
            if step is None:
                return equations, solved

            name, (coeff, rest) = step
            value = -rest / coeff
            equations = [eq.replace(name, value) for eq in equations]
            solved = {key: expr.replace(name, value) for key, expr in solved.items()}
            solved[name] = value

    def _assign(
        self, equations: list[Polynomial], solved: dict[str, Polynomial], name: str, value: Fraction
    ) -> tuple[list[Polynomial], dict[str, Polynomial]]:
        equations = [eq.substitute({name: value}) for eq in equations]
        solved = {key: expr.substitute({name: value}) for key, expr in solved.items()}
        solved[name] = Polynomial.constant(self.fam.parameters, value)
        return equations, solved

    def _next_free(self, equations: list[Polynomial], solved: dict[str, Polynomial]) -> str | None:
        pending = set(self.scales)
        for eq in equations:
            pending.update(eq.used_variables())
        return next((name for name in self.order if name in pending and name not in solved), None)

    def _complete(self, solved: dict[str, Polynomial]) -> Witness | None:
        # solved expressions only involve free parameters
        point = {
            name: Fraction(0) if name in solved else Fraction(int(name in self.scales))
            for name in self.fam.parameters
        }
        assignment = dict(point)
        for name, expr in solved.items():
            assignment[name] = expr.evaluate(point)

        if not self.fam.admits(assignment):
            return None
        witness = self.fam.witness(assignment)
        try:
            verified = verify_witness(witness, self.r, self.r2, self.n, self.n2)
        except RNStructuresError:
            logger.warning("%s: family member is not an automorphism at %s", self.fam.name, assignment)
            return None
        return witness if verified else None

    def _values(self, name: str) -> list[Fraction]:
        grid = _grid(self.budget.grid_bound)
        return grid + [Fraction(0)] if name in self.scales else [Fraction(0), *grid]

    def descend(self, equations: list[Polynomial], solved: dict[str, Polynomial]) -> Witness | None:
        state = self._propagate(equations, solved)
        if state is None:
            return None
        equations, solved = state

        if not equations and (found := self._complete(solved)) is not None:
            return found

        name = self._next_free(equations, solved)
        if name is None:
            return None

        for value in self._values(name):
            self.nodes += 1
            if self.nodes > self.budget.max_nodes:
                raise _BudgetExhausted
            found = self.descend(*self._assign(equations, solved, name, value))
            if found is not None:
                return found
        return None

    def random_walk(self, equations: list[Polynomial], rng: random.Random) -> Witness | None:
        height = self.budget.random_height
        solved: dict[str, Polynomial] = {}
        while True:
            state = self._propagate(equations, solved)
            if state is None:
                return None
            equations, solved = state

            if not equations and (found := self._complete(solved)) is not None:
                return found

            name = self._next_free(equations, solved)
            if name is None:
                return None
            value = Fraction(rng.randint(-height, height), rng.randint(1, height))
            equations, solved = self._assign(equations, solved, name, value)


def search_witness(
    fam: AutomorphismFamily,
    r: Bivector,
    r2: Bivector,
    n: Endomorphism | None = None,
    n2: Endomorphism | None = None,
    budget: SearchBudget = SearchBudget(),
) -> Witness | None:
    """Heuristic witness search; None does not certify inequivalence.

    Parameters occurring alone with a constant coefficient are eliminated
    first, then a bounded grid is walked depth first, then seeded random
    descents are tried. Every candidate is verified exactly.
    """
    equations = orbit_equations(fam, r, r2, n, n2)
    search = _Search(fam, r, r2, n, n2, budget)

    try:
        found = search.descend(equations, {})
    except _BudgetExhausted:
        logger.info("%s: grid search stopped after %d nodes", fam.name, search.nodes)
        found = None
    if found is not None:
        logger.debug("%s: witness found on the grid after %d nodes", fam.name, search.nodes)
        return found

    rng = random.Random(budget.seed)
    for trial in range(budget.random_trials):
        found = search.random_walk(equations, rng)
        if found is not None:
            logger.debug("%s: witness found on random trial %d", fam.name, trial + 1)
            return found

    logger.info("%s: no witness found (budget %d)", fam.name, budget.random_trials)
    return None
