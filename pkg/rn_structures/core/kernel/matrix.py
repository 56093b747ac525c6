"""Dense matrices over exact rationals (and polynomials) as numpy object arrays."""

from collections.abc import Iterable
from fractions import Fraction

import numpy as np

from rn_structures.core.errors import Errors

type Matrix = np.ndarray


def as_fraction_matrix(rows: Iterable[Iterable[Fraction | int | str]]) -> Matrix:
    matrix = np.array(
        [[Fraction(value) for value in row] for row in rows], dtype=object
    )
    if matrix.ndim != 2:
        raise Errors.DIMENSION_MISMATCH.as_exc(f"ragged matrix of shape {matrix.shape}")
    return matrix


def identity(n: int) -> Matrix:
    return np.array(
        [[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object
    )


def zeros(rows: int, cols: int | None = None) -> Matrix:
    cols = rows if cols is None else cols
    return np.array([[Fraction(0)] * cols for _ in range(rows)], dtype=object)


def zeros3(n: int) -> np.ndarray:
    return np.array(
        [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)], dtype=object
    )


def is_zero(array: np.ndarray) -> bool:
    return all(value == 0 for value in array.flat)


def is_square(matrix: Matrix) -> bool:
    return matrix.ndim == 2 and matrix.shape[0] == matrix.shape[1]


def is_antisymmetric(matrix: Matrix) -> bool:
    return is_square(matrix) and is_zero(matrix + matrix.T)


def require_square(matrix: Matrix) -> int:
    if not is_square(matrix):
        raise Errors.NOT_SQUARE.as_exc(f"shape {matrix.shape}")
    return matrix.shape[0]


def inverse(matrix: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises SINGULAR_MATRIX when no pivot exists."""
    n = require_square(matrix)

    x = matrix.copy()
    y = identity(n)

    # downward elimination: lower triangle to zero, unit diagonal
    for i in range(n):
        pivot = next((j for j in range(i, n) if x[j, i] != 0), None)
        if pivot is None:
            raise Errors.SINGULAR_MATRIX.as_exc(f"no pivot in column {i + 1}")
        if pivot != i:
            x[[i, pivot]] = x[[pivot, i]]
            y[[i, pivot]] = y[[pivot, i]]

        scale = x[i, i]
        y[i, :] = [value / scale for value in y[i, :]]
        x[i, :] = [value / scale for value in x[i, :]]

        for j in range(i + 1, n):
            factor = x[j, i]
            if factor != 0:
                y[j, :] = y[j, :] - factor * y[i, :]
                x[j, :] = x[j, :] - factor * x[i, :]

    # upward elimination
    for j in range(n - 2, -1, -1):
        for i in range(j + 1, n):
            factor = x[j, i]
            if factor != 0:
                y[j, :] = y[j, :] - factor * y[i, :]
                x[j, :] = x[j, :] - factor * x[i, :]

    return y


def _bareiss(matrix: Matrix) -> tuple[int, Fraction]:
    """Fraction-free elimination; returns (rank, signed last pivot)."""
    rows, cols = matrix.shape
    m = [[Fraction(value) for value in row] for row in matrix]

    rank = 0
    sign = 1
    previous = Fraction(1)
    for col in range(cols):
        if rank == rows:
            break

        pivot = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            m[rank], m[pivot] = m[pivot], m[rank]
            sign = -sign

        for r in range(rank + 1, rows):
            for c in range(col + 1, cols):
                m[r][c] = (m[r][c] * m[rank][col] - m[r][col] * m[rank][c]) / previous
            m[r][col] = Fraction(0)

        previous = m[rank][col]
        rank += 1

    return rank, sign * previous


def rank(matrix: Matrix) -> int:
    if matrix.size == 0:
        return 0
    return _bareiss(matrix)[0]


def determinant(matrix: Matrix) -> Fraction:
    n = require_square(matrix)
    if n == 0:
        return Fraction(1)

    matrix_rank, last_pivot = _bareiss(matrix)
    return last_pivot if matrix_rank == n else Fraction(0)


def trace(matrix: Matrix):
    n = require_square(matrix)
    return sum((matrix[i, i] for i in range(n)), start=0 * matrix[0, 0]) if n else 0


def power(matrix: Matrix, k: int) -> Matrix:
    n = require_square(matrix)
    if k < 0:
        raise Errors.DIMENSION_MISMATCH.as_exc(f"negative power {k}")

    result = None
    base = matrix
    while k:
        if k & 1:
            result = base if result is None else result @ base
        k >>= 1
        if k:
            base = base @ base
    return identity(n) if result is None else result


def to_strings(matrix: Matrix) -> list[list[str]]:
    return [[str(value) for value in row] for row in matrix]


def to_text(matrix: Matrix) -> str:
    """Rows separated by semicolons, e.g. "1 0; 0 -1/2"."""
    return "; ".join(" ".join(row) for row in to_strings(matrix))
