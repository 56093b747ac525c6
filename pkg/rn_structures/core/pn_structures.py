"""r-matrices, Nijenhuis operators and r-n structures on a Lie algebra.

Conventions (fixed basis X_1..X_d, dual basis X^1..X^d, 0-based in code):

* Bivector: `matrix[i, j] = r^{ij}`, antisymmetric; r#(X^i) = sum_l r^{il} X_l.
* Endomorphism: `matrix[i, j]` is the X_i-coefficient of n(X_j); n^t acts on
  dual columns by `matrix.T`.

Every predicate exists in a matrix form (the fast path) and as a direct
tensor (the oracle); callers that ask for cross-checking get a
FORMULATION_MISMATCH error when the two disagree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger

import numpy as np

from rn_structures.core.errors import Errors
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.kernel.parser import parse_rational, parse_wedge
from rn_structures.core.lie_algebra import (
    JacobiReport,
    LieAlgebra,
    adjoint_matrices,
    check_jacobi,
    coadjoint_matrix,
)

logger = getLogger(__name__)

type Wedge = tuple[int, int, Fraction | int | str]


@dataclass(slots=True, eq=False)
class Bivector:
    algebra: LieAlgebra
    matrix: np.ndarray
    on_dual: bool = False

    def __post_init__(self) -> None:
        d = self.algebra.dim
        if self.matrix.shape != (d, d):
            raise Errors.DIMENSION_MISMATCH.as_exc(
                f"bivector of shape {self.matrix.shape} on a {d}-dimensional algebra"
            )
        if not mx.is_antisymmetric(self.matrix):
            raise Errors.NOT_ANTISYMMETRIC.as_exc("bivector matrix")

    def __add__(self, other: Bivector) -> Bivector:
        _require_same_algebra(self.algebra, other.algebra)
        return Bivector(self.algebra, self.matrix + other.matrix, self.on_dual)

    def __sub__(self, other: Bivector) -> Bivector:
        _require_same_algebra(self.algebra, other.algebra)
        return Bivector(self.algebra, self.matrix - other.matrix, self.on_dual)

    def scaled(self, c: Fraction | int) -> Bivector:
        return Bivector(self.algebra, self.matrix * Fraction(c), self.on_dual)

    def wedges(self) -> list[tuple[int, int, Fraction]]:
        d = self.algebra.dim
        return [
            (i + 1, j + 1, self.matrix[i, j])
            for i in range(d)
            for j in range(i + 1, d)
            if self.matrix[i, j] != 0
        ]

    def is_zero(self) -> bool:
        return mx.is_zero(self.matrix)

    def is_invertible(self) -> bool:
        return mx.determinant(self.matrix) != 0

    def equals(self, other: Bivector) -> bool:
        return self.matrix.shape == other.matrix.shape and mx.is_zero(
            self.matrix - other.matrix
        )

    def __str__(self) -> str:
        symbol = "x" if self.on_dual else "X"
        chunks = []
        for i, j, c in self.wedges():
            sign = "-" if c < 0 else "+"
            magnitude = "" if abs(c) == 1 else f"{abs(c)}*"
            chunks.append(f"{sign} {magnitude}{symbol}{i}{j}")
        if not chunks:
            return "0"
        text = " ".join(chunks)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


@dataclass(slots=True, eq=False)
class Endomorphism:
    algebra: LieAlgebra
    matrix: np.ndarray

    def __post_init__(self) -> None:
        d = self.algebra.dim
        if self.matrix.shape != (d, d):
            raise Errors.DIMENSION_MISMATCH.as_exc(
                f"endomorphism of shape {self.matrix.shape} on a {d}-dimensional algebra"
            )

    def __add__(self, other: Endomorphism) -> Endomorphism:
        _require_same_algebra(self.algebra, other.algebra)
        return Endomorphism(self.algebra, self.matrix + other.matrix)

    def __pow__(self, k: int) -> Endomorphism:
        return Endomorphism(self.algebra, mx.power(self.matrix, k))

    def scaled(self, c: Fraction | int) -> Endomorphism:
        return Endomorphism(self.algebra, self.matrix * Fraction(c))

    def apply(self, r: Bivector) -> Bivector:
        """The bivector n.r (matrix product), antisymmetric when n^t is r-compatible."""
        _require_same_algebra(self.algebra, r.algebra)
        return Bivector(self.algebra, self.matrix @ r.matrix)

    def equals(self, other: Endomorphism) -> bool:
        return mx.is_zero(self.matrix - other.matrix)

    @classmethod
    def identity(cls, algebra: LieAlgebra) -> Endomorphism:
        return cls(algebra, mx.identity(algebra.dim))


@dataclass(slots=True, eq=False)
class Tensor3:
    components: np.ndarray
    variance: str

    def is_zero(self) -> bool:
        return mx.is_zero(self.components)

    def nonzero(self) -> list[tuple[tuple[int, int, int], Fraction]]:
        """1-based index triples with nonzero components, in index order."""
        d = self.components.shape[0]
        return [
            ((i + 1, j + 1, k + 1), self.components[i, j, k])
            for i in range(d)
            for j in range(d)
            for k in range(d)
            if self.components[i, j, k] != 0
        ]

    def __add__(self, other: Tensor3) -> Tensor3:
        return Tensor3(self.components + other.components, self.variance)


@dataclass(slots=True, eq=False)
class SklyaninDual:
    algebra: LieAlgebra
    constants: np.ndarray
    jacobi: JacobiReport

    @property
    def is_lie(self) -> bool:
        return self.jacobi.valid

    def brackets(self) -> list[tuple[int, int, int, Fraction]]:
        return self.as_algebra(check=False).brackets()

    def as_algebra(self, check: bool = True) -> LieAlgebra:
        if check and not self.is_lie:
            raise Errors.NOT_AN_R_MATRIX.as_exc(
                f"dual bracket on {self.algebra.label}* violates Jacobi"
            )
        return LieAlgebra(self.algebra.dim, self.constants, f"{self.algebra.label}*")


@dataclass(slots=True, frozen=True)
class RNReport:
    cybe: bool
    nijenhuis: bool
    compatible: bool
    concomitant: bool

    @property
    def valid(self) -> bool:
        return self.cybe and self.nijenhuis and self.compatible and self.concomitant

    def failures(self) -> list[str]:
        return [
            name
            for name, passed in (
                ("cybe", self.cybe),
                ("nijenhuis", self.nijenhuis),
                ("n r = r n^t", self.compatible),
                ("concomitant", self.concomitant),
            )
            if not passed
        ]


@dataclass(slots=True, eq=False)
class RNStructure:
    r: Bivector
    n: Endomorphism
    report: RNReport | None = None

    @classmethod
    def validated(cls, r: Bivector, n: Endomorphism) -> RNStructure:
        report = check_rn(r, n)
        if not report.valid:
            raise Errors.NOT_AN_RN_STRUCTURE.as_exc(", ".join(report.failures()))
        return cls(r, n, report)

    @classmethod
    def raw(cls, r: Bivector, n: Endomorphism) -> RNStructure:
        _require_same_algebra(r.algebra, n.algebra)
        return cls(r, n)

    @property
    def algebra(self) -> LieAlgebra:
        return self.r.algebra


@dataclass(slots=True)
class HierarchyReport:
    depth: int
    non_solutions: list[int] = field(default_factory=list)
    incompatible_pairs: list[tuple[int, int]] = field(default_factory=list)
    non_rn_powers: list[int] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not (self.non_solutions or self.incompatible_pairs or self.non_rn_powers)


def _require_same_algebra(a: LieAlgebra, b: LieAlgebra) -> None:
    if a is not b and (a.dim != b.dim or not mx.is_zero(a.structure - b.structure)):
        raise Errors.DIMENSION_MISMATCH.as_exc(f"{a.label} vs {b.label}")


def _pair_brackets(f: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """result[i, j, k]: X_k-coefficient of [u e_i, v e_j], u and v acting on columns."""
    left = np.tensordot(u, f, axes=([0], [0]))  # [i, b, k]
    return np.tensordot(v, left, axes=([0], [1])).transpose(1, 0, 2)


def _apply_to_values(n: np.ndarray, tensor: np.ndarray) -> np.ndarray:
    """Apply n to the vector-valued last slot of tensor[i, j, :]."""
    return np.tensordot(tensor, n, axes=([2], [1]))


def bivector_from_wedges(
    algebra: LieAlgebra, wedges: list[Wedge], on_dual: bool = False
) -> Bivector:
    """Build r = sum c X_i^X_j from 1-based (i, j, c); (j, i, c) means -c X_i^X_j."""
    d = algebra.dim
    matrix = mx.zeros(d)
    for i, j, c in wedges:
        if not (1 <= i <= d and 1 <= j <= d) or i == j:
            raise Errors.INDEX_OUT_OF_RANGE.as_exc(f"wedge ({i}, {j}) in dim {d}")
        value = parse_rational(c) if isinstance(c, str) else Fraction(c)
        matrix[i - 1, j - 1] += value
        matrix[j - 1, i - 1] -= value
    return Bivector(algebra, matrix, on_dual)


def bivector_from_expression(algebra: LieAlgebra, src: str) -> Bivector:
    """Parse a numeric wedge expression such as 'X14 - X23'."""
    components = parse_wedge(src, algebra.dim)
    return bivector_from_wedges(
        algebra,
        [(i + 1, j + 1, c.constant_value()) for (i, j), c in components.items()],
    )


def poisson_matrix_equations(r: Bivector) -> list[np.ndarray]:
    """Per index c: r Y^c r - sum_l r^{cl} (r X_l + X_l^t r); all vanish iff the Schouten defect does."""
    adjoint = adjoint_matrices(r.algebra)
    m = r.matrix
    d = r.algebra.dim

    equations = []
    for c in range(d):
        residual = m @ adjoint.Y[c] @ m
        for l in range(d):  # noqa: E741
            if m[c, l] != 0:
                residual = residual - m[c, l] * (m @ adjoint.X[l] + adjoint.X[l].T @ m)
        equations.append(residual)
    return equations


def first_failing_poisson_index(r: Bivector) -> int | None:
    """1-based index of the first nonvanishing matrix CYBE equation."""
    for c, residual in enumerate(poisson_matrix_equations(r)):
        if not mx.is_zero(residual):
            return c + 1
    return None


def check_cybe_matrix(r: Bivector) -> bool:
    return first_failing_poisson_index(r) is None


def sklyanin_dual(r: Bivector) -> SklyaninDual:
    """Structure constants of [X^i, X^j]^r = ad*_{r#X^i} X^j - ad*_{r#X^j} X^i."""
    f = r.algebra.structure
    contracted = np.tensordot(r.matrix, f, axes=([1], [0]))  # [j, m, i]
    constants = contracted.transpose(2, 0, 1) - contracted.transpose(0, 2, 1)

    dual = LieAlgebra(r.algebra.dim, constants, f"{r.algebra.label}*")
    report = check_jacobi(dual)
    if not report.valid:
        logger.debug("dual bracket of %s is not a Lie bracket", r)
    return SklyaninDual(r.algebra, constants, report)


def r_bracket(r: Bivector, alpha, beta) -> np.ndarray:
    """[alpha, beta]^r for dual coefficient columns."""
    constants = sklyanin_dual(r).constants
    alpha = np.asarray(alpha, dtype=object)
    beta = np.asarray(beta, dtype=object)
    return np.tensordot(np.outer(alpha, beta), constants, axes=([0, 1], [0, 1]))


def _defect_terms(r: Bivector, r2: Bivector) -> np.ndarray:
    """B(r, r2)[i,j,k] = <X^k, [r#X^i, r2#X^j] - r2#[X^i, X^j]^r>."""
    f = r.algebra.structure
    brackets = _pair_brackets(f, r.matrix.T, r2.matrix.T)
    dual = sklyanin_dual(r).constants
    return brackets - np.tensordot(dual, r2.matrix, axes=([2], [0]))


def schouten_defect(r: Bivector) -> Tensor3:
    return Tensor3(_defect_terms(r, r), "contra^3")


def schouten_bracket(r: Bivector, r2: Bivector) -> Tensor3:
    """Mixed tensor with defect(r + r2) = defect(r) + defect(r2) + mixed."""
    _require_same_algebra(r.algebra, r2.algebra)
    return Tensor3(_defect_terms(r, r2) + _defect_terms(r2, r), "contra^3")


def check_cybe(r: Bivector) -> bool:
    """Matrix-form CYBE, cross-checked against the Schouten defect."""
    by_matrix = check_cybe_matrix(r)
    by_tensor = schouten_defect(r).is_zero()
    if by_matrix != by_tensor:
        raise Errors.FORMULATION_MISMATCH.as_exc(
            f"CYBE matrix form {by_matrix} vs Schouten defect {by_tensor} for {r}"
        )
    return by_matrix


def check_r_compatible(r: Bivector, r2: Bivector) -> bool:
    _require_same_algebra(r.algebra, r2.algebra)
    for candidate in (r, r2):
        if not check_cybe_matrix(candidate):
            raise Errors.NOT_AN_R_MATRIX.as_exc(str(candidate))

    by_sum = check_cybe_matrix(r + r2)
    by_mixed = schouten_bracket(r, r2).is_zero()
    if by_sum != by_mixed:
        raise Errors.FORMULATION_MISMATCH.as_exc(
            f"sum CYBE {by_sum} vs mixed Schouten bracket {by_mixed}"
        )
    return by_sum


def inverse_r(r: Bivector) -> Bivector:
    try:
        inverse = mx.inverse(r.matrix)
    except ValueError as e:
        raise Errors.SINGULAR_MATRIX.as_exc(f"r = {r} is not invertible") from e
    return Bivector(r.algebra, inverse, on_dual=not r.on_dual)


def check_bi_r_matrix(r: Bivector) -> bool:
    """The Sklyanin bracket of r^-1 over (g*, [,]^r) gives back the original bracket."""
    if not check_cybe_matrix(r):
        raise Errors.NOT_AN_R_MATRIX.as_exc(str(r))

    dual_algebra = sklyanin_dual(r).as_algebra()
    s = inverse_r(r)
    recovered = sklyanin_dual(Bivector(dual_algebra, s.matrix, on_dual=True))
    return mx.is_zero(recovered.constants - r.algebra.structure)


def nijenhuis_torsion(n: Endomorphism) -> Tensor3:
    """T(X_i, X_j) = [nX_i, nX_j] - n[nX_i, X_j] - n[X_i, nX_j] + n^2[X_i, X_j]."""
    f = n.algebra.structure
    m = n.matrix
    eye = mx.identity(n.algebra.dim)
    components = (
        _pair_brackets(f, m, m)
        - _apply_to_values(m, _pair_brackets(f, m, eye) + _pair_brackets(f, eye, m))
        + _apply_to_values(m @ m, f)
    )
    return Tensor3(components, "co^2 contra")


def nijenhuis_matrix_equations(n: Endomorphism) -> list[np.ndarray]:
    """Per index i; entry (j, k) equals minus the X_k-coefficient of T(X_i, X_j)."""
    adjoint = adjoint_matrices(n.algebra)
    m = n.matrix
    mt = m.T
    d = n.algebra.dim

    equations = []
    for i in range(d):
        residual = adjoint.X[i] @ mt @ mt - mt @ adjoint.X[i] @ mt
        for l in range(d):  # noqa: E741
            if m[l, i] != 0:
                residual = residual + m[l, i] * (mt @ adjoint.X[l] - adjoint.X[l] @ mt)
        equations.append(residual)
    return equations


def check_nijenhuis_matrix(n: Endomorphism) -> bool:
    return all(mx.is_zero(residual) for residual in nijenhuis_matrix_equations(n))


def check_nijenhuis(n: Endomorphism) -> bool:
    by_matrix = check_nijenhuis_matrix(n)
    by_tensor = nijenhuis_torsion(n).is_zero()
    if by_matrix != by_tensor:
        raise Errors.FORMULATION_MISMATCH.as_exc(
            f"Nijenhuis matrix form {by_matrix} vs torsion {by_tensor}"
        )
    return by_matrix


def check_con1(r: Bivector, n: Endomorphism) -> bool:
    return mx.is_zero(n.matrix @ r.matrix - r.matrix @ n.matrix.T)


def concomitant(r: Bivector, n: Endomorphism) -> Tensor3:
    """C(r,n)(X^a, X^b)(X_i) with
    C(a, b) = ad*_{r#a} n^t b - ad*_{r#b} n^t a - n^t ad*_{r#a} b + n^t ad*_{r#b} a.
    """
    _require_same_algebra(r.algebra, n.algebra)
    d = r.algebra.dim
    nt = n.matrix.T
    coadjoint = [coadjoint_matrix(r.algebra, r.matrix[a, :]) for a in range(d)]

    components = mx.zeros3(d)
    for a in range(d):
        for b in range(d):
            components[a, b, :] = (
                coadjoint[a] @ nt[:, b]
                - coadjoint[b] @ nt[:, a]
                - nt @ coadjoint[a][:, b]
                + nt @ coadjoint[b][:, a]
            )
    return Tensor3(components, "contra^2 co")


def concomitant_matrix_equations(r: Bivector, n: Endomorphism) -> list[np.ndarray]:
    """Per index i: r X_j n^j_i + X_j^t n^j_i r - r X_i n^t - n X_i^t r; entry (a, b) is C(X^a, X^b)(X_i)."""
    _require_same_algebra(r.algebra, n.algebra)
    adjoint = adjoint_matrices(r.algebra)
    rm = r.matrix
    m = n.matrix
    d = r.algebra.dim

    equations = []
    for i in range(d):
        residual = -(rm @ adjoint.X[i] @ m.T) - m @ adjoint.X[i].T @ rm
        for j in range(d):
            if m[j, i] != 0:
                residual = residual + m[j, i] * (rm @ adjoint.X[j] + adjoint.X[j].T @ rm)
        equations.append(residual)
    return equations


def check_concomitant_matrix(r: Bivector, n: Endomorphism) -> bool:
    return all(mx.is_zero(residual) for residual in concomitant_matrix_equations(r, n))


def check_concomitant(r: Bivector, n: Endomorphism) -> bool:
    by_matrix = check_concomitant_matrix(r, n)
    by_tensor = concomitant(r, n).is_zero()
    if by_matrix != by_tensor:
        raise Errors.FORMULATION_MISMATCH.as_exc(
            f"concomitant matrix form {by_matrix} vs tensor {by_tensor}"
        )
    return by_matrix


def check_rn(r: Bivector, n: Endomorphism, cross_check: bool = False) -> RNReport:
    """The four r-n conditions; `cross_check` also runs the direct tensor oracles."""
    _require_same_algebra(r.algebra, n.algebra)
    if cross_check:
        report = RNReport(
            cybe=check_cybe(r),
            nijenhuis=check_nijenhuis(n),
            compatible=check_con1(r, n),
            concomitant=check_concomitant(r, n),
        )
    else:
        report = RNReport(
            cybe=check_cybe_matrix(r),
            nijenhuis=check_nijenhuis_matrix(n),
            compatible=check_con1(r, n),
            concomitant=check_concomitant_matrix(r, n),
        )

    if not report.valid:
        logger.debug("r-n check failed on %s: %s", r.algebra.label, report.failures())
    return report


def hierarchy(s: RNStructure, k: int) -> list[Bivector]:
    """r_1..r_k with r_k = n^k . r."""
    if k < 1:
        raise Errors.INDEX_OUT_OF_RANGE.as_exc(f"hierarchy depth {k}")

    result = []
    current = s.r.matrix
    for _ in range(k):
        current = s.n.matrix @ current
        result.append(Bivector(s.algebra, current))
    return result


def check_hierarchy(s: RNStructure, k: int) -> HierarchyReport:
    members = [s.r, *hierarchy(s, k)]
    report = HierarchyReport(depth=k)

    for index, member in enumerate(members):
        if not check_cybe_matrix(member):
            report.non_solutions.append(index)
        if index and not check_rn(s.r, s.n**index).valid:
            report.non_rn_powers.append(index)

    solutions = [
        (index, member)
        for index, member in enumerate(members)
        if index not in report.non_solutions
    ]
    for a, (i, first) in enumerate(solutions):
        for j, second in solutions[a + 1 :]:
            if not check_r_compatible(first, second):
                report.incompatible_pairs.append((i, j))

    return report


def n_from_pair(r: Bivector, r2: Bivector, verify: bool = True) -> Endomorphism:
    """n = r2 . r^-1 for an invertible r-matrix r and a compatible r-matrix r2."""
    if not check_r_compatible(r, r2):
        raise Errors.INCOMPATIBLE.as_exc(f"{r} and {r2}")

    n = Endomorphism(r.algebra, r2.matrix @ inverse_r(r).matrix)

    if verify:
        report = check_rn(r, n)
        if not report.valid or not n.apply(r).equals(r2):
            raise Errors.FORMULATION_MISMATCH.as_exc(
                f"n = r2 r^-1 failed {report.failures() or 'n r = r2'}"
            )
    return n


def nijenhuis_concomitant(n1: Endomorphism, n2: Endomorphism) -> Tensor3:
    """[n1, n2](X, Y) = [n1X, n2Y] + [n2X, n1Y] - n1([n2X, Y] + [X, n2Y])
    - n2([n1X, Y] + [X, n1Y]) + (n1 n2 + n2 n1)[X, Y].
    """
    _require_same_algebra(n1.algebra, n2.algebra)
    for n in (n1, n2):
        if not check_nijenhuis_matrix(n):
            raise Errors.NOT_NIJENHUIS.as_exc(mx.to_text(n.matrix))

    f = n1.algebra.structure
    a, b = n1.matrix, n2.matrix
    eye = mx.identity(n1.algebra.dim)
    components = (
        _pair_brackets(f, a, b)
        + _pair_brackets(f, b, a)
        - _apply_to_values(a, _pair_brackets(f, b, eye) + _pair_brackets(f, eye, b))
        - _apply_to_values(b, _pair_brackets(f, a, eye) + _pair_brackets(f, eye, a))
        + _apply_to_values(a @ b + b @ a, f)
    )
    return Tensor3(components, "co^2 contra")


def check_n_compatible(n1: Endomorphism, n2: Endomorphism) -> bool:
    compatible = nijenhuis_concomitant(n1, n2).is_zero()
    if compatible and not check_nijenhuis_matrix(n1 + n2):
        raise Errors.FORMULATION_MISMATCH.as_exc(
            "vanishing Nijenhuis concomitant but n1 + n2 has torsion"
        )
    return compatible


def check_rn_compatible(s1: RNStructure, s2: RNStructure) -> bool:
    if s1.algebra.dim != s2.algebra.dim:
        raise Errors.DIMENSION_MISMATCH.as_exc(
            f"{s1.algebra.dim} vs {s2.algebra.dim}"
        )
    return check_rn(s1.r + s2.r, s1.n + s2.n).valid
