from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger

import numpy as np

from rn_structures.core.errors import Errors
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.kernel.parser import parse_rational

logger = getLogger(__name__)

type Bracket = tuple[int, int, int, Fraction | int | str]


@dataclass(slots=True, eq=False)
class LieAlgebra:
    """Real Lie algebra given by structure constants in a fixed basis X_1..X_d.

    `structure[i, j, k]` is f^k_{ij}, the coefficient of X_k in [X_i, X_j]
    (0-based indices).
    """

    dim: int
    structure: np.ndarray
    name: str | None = None

    def __post_init__(self) -> None:
        if self.structure.shape != (self.dim,) * 3:
            raise Errors.DIMENSION_MISMATCH.as_exc(
                f"structure constants of shape {self.structure.shape} for dim {self.dim}"
            )
        if not mx.is_zero(self.structure + self.structure.transpose(1, 0, 2)):
            raise Errors.NOT_ANTISYMMETRIC.as_exc("structure constants")

    @property
    def label(self) -> str:
        return self.name or f"g{self.dim}"

    def brackets(self) -> list[tuple[int, int, int, Fraction]]:
        """Nonzero f^k_{ij} with i < j, 1-based, in index order."""
        return [
            (i + 1, j + 1, k + 1, self.structure[i, j, k])
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
            for k in range(self.dim)
            if self.structure[i, j, k] != 0
        ]

    def is_abelian(self) -> bool:
        return mx.is_zero(self.structure)


@dataclass(slots=True, frozen=True)
class JacobiDefect:
    i: int
    j: int
    k: int
    l: int  # noqa: E741
    value: Fraction


@dataclass(slots=True)
class JacobiReport:
    defects: list[JacobiDefect] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.defects


@dataclass(slots=True, eq=False)
class AdjointData:
    X: tuple[np.ndarray, ...]
    Y: tuple[np.ndarray, ...]


def new_lie_algebra(
    dim: int, brackets: Iterable[Bracket], name: str | None = None
) -> LieAlgebra:
    """Build from 1-based (i, j, k, f^k_{ij}) entries; antisymmetric partners are filled in."""
    if dim < 1:
        raise Errors.INDEX_OUT_OF_RANGE.as_exc(f"dimension {dim}")

    structure = mx.zeros3(dim)
    seen: set[tuple[int, int, int]] = set()
    for i, j, k, value in brackets:
        if not all(1 <= index <= dim for index in (i, j, k)) or i == j:
            raise Errors.INDEX_OUT_OF_RANGE.as_exc(f"bracket ({i}, {j}, {k}) in dim {dim}")

        key = (min(i, j), max(i, j), k)
        if key in seen:
            raise Errors.DUPLICATE_BRACKET.as_exc(f"f^{k}_{{{key[0]}{key[1]}}} listed twice")
        seen.add(key)

        value = parse_rational(value) if isinstance(value, str) else Fraction(value)
        structure[i - 1, j - 1, k - 1] = value
        structure[j - 1, i - 1, k - 1] = -value

    return LieAlgebra(dim, structure, name)


def abelian(dim: int) -> LieAlgebra:
    return LieAlgebra(dim, mx.zeros3(dim), f"R^{dim}")


def check_jacobi(algebra: LieAlgebra) -> JacobiReport:
    """Jacobi defects over 1-based triples i < j < k (the identity is alternating in i, j, k)."""
    f = algebra.structure
    d = algebra.dim
    # composed[i, j, k, l] = sum_m f^m_{ij} f^l_{mk}
    composed = np.tensordot(f, f, axes=([2], [0]))

    report = JacobiReport()
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                for l in range(d):  # noqa: E741
                    value = composed[i, j, k, l] + composed[j, k, i, l] + composed[k, i, j, l]
                    if value != 0:
                        report.defects.append(JacobiDefect(i + 1, j + 1, k + 1, l + 1, value))

    if report.defects:
        logger.debug("%s: %d Jacobi defects", algebra.label, len(report.defects))
    return report


def adjoint_matrices(algebra: LieAlgebra) -> AdjointData:
    f = algebra.structure
    d = algebra.dim
    return AdjointData(
        X=tuple(-f[i, :, :] for i in range(d)),
        Y=tuple(-f[:, :, k] for k in range(d)),
    )


def bracket(algebra: LieAlgebra, x: Sequence, y: Sequence) -> np.ndarray:
    x = np.asarray(x, dtype=object)
    y = np.asarray(y, dtype=object)
    if x.shape != (algebra.dim,) or y.shape != (algebra.dim,):
        raise Errors.DIMENSION_MISMATCH.as_exc(f"vectors of length {len(x)}, {len(y)}")

    return np.tensordot(np.outer(x, y), algebra.structure, axes=([0, 1], [0, 1]))


def adjoint_matrix(algebra: LieAlgebra, x: Sequence) -> np.ndarray:
    """Matrix of ad_X on coefficient columns: entry (k, j) is the X_k-coefficient of [X, X_j]."""
    x = np.asarray(x, dtype=object)
    if x.shape != (algebra.dim,):
        raise Errors.DIMENSION_MISMATCH.as_exc(f"vector of length {len(x)}")

    return np.tensordot(x, algebra.structure, axes=([0], [0])).T


def coadjoint_matrix(algebra: LieAlgebra, x: Sequence) -> np.ndarray:
    """Matrix of ad*_X on dual coefficient columns, (ad*_X a)(Y) = -a([X, Y])."""
    return -adjoint_matrix(algebra, x).T


def is_automorphism(algebra: LieAlgebra, a: np.ndarray) -> bool:
    d = algebra.dim
    if a.shape != (d, d):
        raise Errors.DIMENSION_MISMATCH.as_exc(f"matrix of shape {a.shape} for dim {d}")

    if mx.determinant(a) == 0:
        return False

    for i in range(d):
        for j in range(i + 1, d):
            image_of_bracket = a @ algebra.structure[i, j, :]
            bracket_of_images = bracket(algebra, a[:, i], a[:, j])
            if not mx.is_zero(image_of_bracket - bracket_of_images):
                logger.debug("%s: automorphism fails on pair (%d, %d)", algebra.label, i + 1, j + 1)
                return False
    return True
