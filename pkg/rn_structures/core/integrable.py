"""Integrable systems built from an r-matrix.

A realization S_k of the algebra on a symplectic phase space and a matrix
representation T_i combine with an r-matrix into the Lax-type matrix
Q = sum S_i r^{ij} T_j, whose power traces I_k = tr(Q^k) are the candidate
constants of motion.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cache
from importlib import resources
from itertools import combinations
from logging import getLogger

import numpy as np

from rn_structures.core.documents import Document
from rn_structures.core.errors import Errors
from rn_structures.core.kernel import Polynomial
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.kernel.parser import parse_polynomial, parse_rational
from rn_structures.core.lie_algebra import LieAlgebra
from rn_structures.core.pn_structures import (
    Bivector,
    Endomorphism,
    check_r_compatible,
    check_rn,
    n_from_pair,
)
from rn_structures.core.settings import IndependenceSettings

logger = getLogger(__name__)


@dataclass(slots=True, eq=False)
class PhaseSpace:
    """Coordinates x_1..x_2n with constant Poisson tensor `pi[i, j] = {x_i, x_j}`."""

    variables: tuple[str, ...]
    pi: np.ndarray

    def __post_init__(self) -> None:
        size = len(self.variables)
        if size == 0 or size % 2 or self.pi.shape != (size, size):
            raise Errors.DIMENSION_MISMATCH.as_exc(
                f"{size} coordinates with a Poisson tensor of shape {self.pi.shape}"
            )
        if not mx.is_antisymmetric(self.pi):
            raise Errors.NOT_ANTISYMMETRIC.as_exc("phase space Poisson tensor")
        if mx.determinant(self.pi) == 0:
            raise Errors.SINGULAR_MATRIX.as_exc("phase space Poisson tensor is degenerate")

    @property
    def dim(self) -> int:
        return len(self.variables)

    @property
    def half(self) -> int:
        return self.dim // 2

    @staticmethod
    def coordinates(dim: int, symbol: str = "x") -> tuple[str, ...]:
        return tuple(f"{symbol}{i}" for i in range(1, dim + 1))

    @classmethod
    def canonical(cls, dim: int = 4, symbol: str = "x") -> PhaseSpace:
        """{x_i, x_{i+n}} = 1; for dim 4 that is {x1, x3} = {x2, x4} = 1."""
        if dim < 2 or dim % 2:
            raise Errors.DIMENSION_MISMATCH.as_exc(f"phase space dimension {dim}")

        half = dim // 2
        pi = mx.zeros(dim)
        for i in range(half):
            pi[i, i + half] = Fraction(1)
            pi[i + half, i] = Fraction(-1)
        return cls(cls.coordinates(dim, symbol), pi)

    def parse(self, src: str) -> Polynomial:
        return parse_polynomial(src, self.variables)

    def coordinate(self, name: str) -> Polynomial:
        return Polynomial.variable(self.variables, name)


def _require_over(space: PhaseSpace, *polys: Polynomial) -> None:
    for p in polys:
        if p.variables != space.variables:
            raise Errors.DIMENSION_MISMATCH.as_exc(
                f"polynomial over {p.variables}, phase space over {space.variables}"
            )


def poisson_bracket(space: PhaseSpace, f: Polynomial, g: Polynomial) -> Polynomial:
    """{f, g} = sum pi^{ij} df/dx_i dg/dx_j."""
    _require_over(space, f, g)

    df = [f.partial(x) for x in space.variables]
    dg = [g.partial(x) for x in space.variables]
    result = Polynomial.zero(space.variables)
    for i, j in zip(*np.nonzero(space.pi != 0)):
        if df[i] and dg[j]:
            result = result + space.pi[i, j] * df[i] * dg[j]
    return result


@dataclass(slots=True, frozen=True)
class BracketDefect:
    """Pair (i, j), 1-based, whose bracket misses its target by `residual`."""

    i: int
    j: int
    residual: Polynomial | np.ndarray


@dataclass(slots=True)
class RealizationReport:
    defects: list[BracketDefect] = field(default_factory=list)
    sign_flip_fixes: bool = False

    @property
    def valid(self) -> bool:
        return not self.defects


@dataclass(slots=True)
class RepresentationReport:
    defects: list[BracketDefect] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.defects


@dataclass(slots=True, eq=False)
class Realization:
    space: PhaseSpace
    algebra: LieAlgebra
    functions: tuple[Polynomial, ...]

    @classmethod
    def validated(
        cls, space: PhaseSpace, algebra: LieAlgebra, functions: Sequence[Polynomial]
    ) -> Realization:
        report = check_realization(space, algebra, functions)
        if not report.valid:
            first = report.defects[0]
            raise Errors.CONSTRAINT_VIOLATION.as_exc(
                f"not a realization: {{S{first.i}, S{first.j}}} is off by {first.residual}"
            )
        return cls(space, algebra, tuple(functions))


@dataclass(slots=True, eq=False)
class Representation:
    algebra: LieAlgebra
    matrices: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.matrices) != self.algebra.dim:
            raise Errors.DIMENSION_MISMATCH.as_exc(
                f"{len(self.matrices)} matrices for dim {self.algebra.dim}"
            )
        shapes = {t.shape for t in self.matrices}
        if len(shapes) != 1 or not mx.is_square(self.matrices[0]):
            raise Errors.NOT_SQUARE.as_exc(f"representation matrices of shapes {sorted(shapes)}")

    @property
    def size(self) -> int:
        return self.matrices[0].shape[0]


def check_realization(
    space: PhaseSpace, algebra: LieAlgebra, functions: Sequence[Polynomial]
) -> RealizationReport:
    if len(functions) != algebra.dim:
        raise Errors.DIMENSION_MISMATCH.as_exc(f"{len(functions)} functions for dim {algebra.dim}")
    _require_over(space, *functions)

    f = algebra.structure
    report = RealizationReport()
    flipped = True
    for i, j in combinations(range(algebra.dim), 2):
        lhs = poisson_bracket(space, functions[i], functions[j])
        rhs = sum(
            (f[i, j, k] * functions[k] for k in range(algebra.dim) if f[i, j, k] != 0),
            start=Polynomial.zero(space.variables),
        )
        if lhs != rhs:
            report.defects.append(BracketDefect(i + 1, j + 1, lhs - rhs))
        flipped = flipped and lhs == -rhs

    if report.defects and flipped:
        report.sign_flip_fixes = True
        logger.warning(
            "realization fails only by a global sign; the opposite phase space sign convention fits"
        )
    logger.debug("realization check: %d defect(s)", len(report.defects))
    return report


def check_representation(algebra: LieAlgebra, matrices: Sequence[np.ndarray]) -> RepresentationReport:
    rep = Representation(algebra, tuple(matrices))
    f = algebra.structure

    report = RepresentationReport()
    for i, j in combinations(range(algebra.dim), 2):
        ti, tj = rep.matrices[i], rep.matrices[j]
        residual = ti @ tj - tj @ ti
        for k in range(algebra.dim):
            if f[i, j, k] != 0:
                residual = residual - f[i, j, k] * rep.matrices[k]
        if not mx.is_zero(residual):
            report.defects.append(BracketDefect(i + 1, j + 1, residual))
    return report


def lax_matrix(realization: Realization, r: Bivector, representation: Representation) -> np.ndarray:
    """Q = sum over all (i, j) of S_i r^{ij} T_j, both orders of each wedge included."""
    d = realization.algebra.dim
    if r.algebra.dim != d or representation.algebra.dim != d:
        raise Errors.DIMENSION_MISMATCH.as_exc(
            f"realization dim {d}, r dim {r.algebra.dim}, representation dim {representation.algebra.dim}"
        )

    variables = realization.space.variables
    m = representation.size
    q = np.empty((m, m), dtype=object)
    for a in range(m):
        for b in range(m):
            q[a, b] = Polynomial.zero(variables)

    for i, j in zip(*np.nonzero(r.matrix != 0)):
        coeff = realization.functions[i] * r.matrix[i, j]
        t = representation.matrices[j]
        for a, b in zip(*np.nonzero(t != 0)):
            q[a, b] = q[a, b] + coeff * t[a, b]
    return q


def invariants(q: np.ndarray, k_max: int) -> list[Polynomial]:
    """I_k = tr(Q^k) for k = 1..k_max."""
    if k_max < 1:
        raise Errors.INDEX_OUT_OF_RANGE.as_exc(f"k_max = {k_max}")

    result = [mx.trace(q)]
    power = q
    for _ in range(2, k_max + 1):
        power = power @ q
        result.append(mx.trace(power))
    return result


def check_involution(space: PhaseSpace, polys: Sequence[Polynomial]) -> list[BracketDefect]:
    """Pairs (a, b), 1-based, with {I_a, I_b} != 0."""
    defects = []
    for a, b in combinations(range(len(polys)), 2):
        value = poisson_bracket(space, polys[a], polys[b])
        if value:
            defects.append(BracketDefect(a + 1, b + 1, value))
    return defects


def _jacobian_rank(jacobian: list[list[Polynomial]], point: dict[str, Fraction]) -> int:
    if not jacobian:
        return 0
    return mx.rank(mx.as_fraction_matrix([[p.evaluate(point) for p in row] for row in jacobian]))


def independence_rank(
    space: PhaseSpace,
    polys: Sequence[Polynomial],
    settings: IndependenceSettings = IndependenceSettings(),
    seed: int = 0,
) -> int:
    """Generic rank of the Jacobian [dI_a/dx_i], estimated at random rational points.

    Each round takes `settings.trials` points with coordinates of height up to
    `settings.height`, doubling the height per retry. The estimate is accepted
    once it is full or two consecutive rounds agree.
    """
    _require_over(space, *polys)
    jacobian = [[p.partial(x) for x in space.variables] for p in polys]
    full = min(len(polys), space.dim)
    rng = random.Random(seed)

    best, previous = 0, None
    for attempt in range(settings.max_retries + 1):
        height = settings.height * 2**attempt
        for _ in range(settings.trials):
            point = {
                x: Fraction(rng.randint(-height, height), rng.randint(1, height))
                for x in space.variables
            }
            best = max(best, _jacobian_rank(jacobian, point))
        if best == full or best == previous:
            return best
        previous = best

    logger.warning(
        "independence rank %d not stable after %d retries", best, settings.max_retries
    )
    return best


class IntegrabilityKind(StrEnum):
    UNDER_DETERMINED = "under-determined"
    LIOUVILLE = "Liouville-integrable"
    SUPERINTEGRABLE = "superintegrable"


@dataclass(slots=True, frozen=True)
class Integrability:
    kind: IntegrabilityKind
    rank: int
    extra: int = 0
    involutive: bool = False
    maximal: bool = False

    def __str__(self) -> str:
        match self.kind:
            case IntegrabilityKind.SUPERINTEGRABLE:
                return f"{self.kind}(extra={self.extra})"
            case _:
                return str(self.kind)


def classify_integrability(
    space: PhaseSpace,
    polys: Sequence[Polynomial],
    settings: IndependenceSettings = IndependenceSettings(),
    seed: int = 0,
) -> Integrability:
    """`involutive` holds when some independent n-subset Poisson-commutes pairwise."""
    n = space.half
    rank = independence_rank(space, polys, settings, seed)

    involutive = rank >= n and any(
        independence_rank(space, subset, settings, seed) == n
        and not check_involution(space, subset)
        for subset in combinations(polys, n)
    )
    maximal = rank >= 2 * n - 1

    if rank > n:
        return Integrability(IntegrabilityKind.SUPERINTEGRABLE, rank, rank - n, involutive, maximal)
    if rank == n and involutive:
        return Integrability(IntegrabilityKind.LIOUVILLE, rank, 0, involutive, maximal)
    return Integrability(IntegrabilityKind.UNDER_DETERMINED, rank, 0, involutive, maximal)


@dataclass(slots=True, eq=False)
class SumSystem:
    hamiltonian: Polynomial
    n_sum: Endomorphism
    r_sum: Bivector
    consistent: bool


def sum_hamiltonian(
    realization: Realization,
    representation: Representation,
    r: Bivector,
    parts: Sequence[Bivector],
) -> SumSystem:
    """H = I_1 of Q(n_sum r) where n_sum = sum of r_l r^-1 over the parts.

    `consistent` records that H equals the sum of the parts' I_1 and that
    (r, n_sum) is an r-n structure.
    """
    if not parts:
        raise Errors.INDEX_OUT_OF_RANGE.as_exc("no parts given")
    for (a, first), (b, second) in combinations(enumerate(parts, start=1), 2):
        if not check_r_compatible(first, second):
            raise Errors.INCOMPATIBLE.as_exc(f"parts {a} and {b}: {first} and {second}")

    n_sum = Endomorphism(r.algebra, mx.zeros(r.algebra.dim))
    for part in parts:
        n_sum = n_sum + n_from_pair(r, part)
    r_sum = n_sum.apply(r)

    hamiltonian = invariants(lax_matrix(realization, r_sum, representation), 1)[0]
    separate = sum(
        (invariants(lax_matrix(realization, part, representation), 1)[0] for part in parts),
        start=Polynomial.zero(realization.space.variables),
    )
    consistent = hamiltonian == separate and check_rn(r, n_sum).valid
    if not consistent:
        logger.warning("sum system for %d parts is not consistent", len(parts))
    return SumSystem(hamiltonian, n_sum, r_sum, consistent)


@dataclass(slots=True, eq=False)
class SystemAnalysis:
    r: Bivector
    lax: np.ndarray
    invariants: list[Polynomial]
    involution_defects: list[BracketDefect]
    integrability: Integrability


def analyze(
    realization: Realization,
    representation: Representation,
    r: Bivector,
    k_max: int,
    settings: IndependenceSettings = IndependenceSettings(),
    seed: int = 0,
) -> SystemAnalysis:
    """Lax matrix, invariants up to k_max, involution and integrability class for one r."""
    space = realization.space
    q = lax_matrix(realization, r, representation)
    found = invariants(q, k_max)
    return SystemAnalysis(
        r=r,
        lax=q,
        invariants=found,
        involution_defects=check_involution(space, found),
        integrability=classify_integrability(space, found, settings, seed),
    )


@dataclass(slots=True, eq=False)
class System:
    realization: Realization
    representation: Representation
    r: Bivector | None = None
    parts: tuple[Bivector, ...] = ()

    @property
    def space(self) -> PhaseSpace:
        return self.realization.space


def phase_space_from_document(doc: Document) -> PhaseSpace:
    section = doc.phase_space
    if section is None:
        return PhaseSpace.canonical()

    variables = tuple(section.variables) if section.variables else PhaseSpace.coordinates(section.dim)
    if len(variables) != section.dim:
        raise Errors.DIMENSION_MISMATCH.as_exc(f"{len(variables)} variables for dim {section.dim}")
    if section.pi is None:
        canonical = PhaseSpace.canonical(section.dim)
        return PhaseSpace(variables, canonical.pi)
    return PhaseSpace(
        variables, mx.as_fraction_matrix([[parse_rational(v) for v in row] for row in section.pi])
    )


def system_from_document(doc: Document) -> System:
    """Realization and representation are taken as given; validity is reported separately."""
    doc.require("algebra", "realization", "representation")
    algebra = doc.lie_algebra()
    space = phase_space_from_document(doc)

    functions = tuple(space.parse(src) for src in doc.realization.S)
    if len(functions) != algebra.dim:
        raise Errors.DIMENSION_MISMATCH.as_exc(f"{len(functions)} functions for dim {algebra.dim}")

    return System(
        realization=Realization(space, algebra, functions),
        representation=Representation(algebra, doc.representation.to_matrices()),
        r=doc.r.to_bivector(algebra) if doc.r else None,
        parts=tuple(part.to_bivector(algebra) for part in doc.parts),
    )


@cache
def _example_document() -> Document:
    text = resources.files("rn_structures.core.catalog").joinpath("systems.json").read_text()
    return Document.model_validate_json(text)


def load_example_system() -> System:
    """The embedded four-dimensional example on A_{4,1} with its four parts."""
    return system_from_document(_example_document())
