import json
from collections.abc import Callable
from fractions import Fraction
from pathlib import Path
from typing import Any

import pytest
from faker import Faker

from rn_structures.core.kernel import matrix as mx
from rn_structures.core.lie_algebra import LieAlgebra, new_lie_algebra
from rn_structures.core.pn_structures import Bivector, Endomorphism, bivector_from_expression

A41_BRACKETS = [(2, 4, 1, "1"), (3, 4, 2, "1")]


@pytest.fixture()
def a41() -> LieAlgebra:
    return new_lie_algebra(4, A41_BRACKETS, "A4,1")


@pytest.fixture()
def base_r(a41: LieAlgebra) -> Bivector:
    return bivector_from_expression(a41, "X14 - X23")


def a41_n(a41: LieAlgebra, n1: int, n2: int, n3: int, n4: int) -> Endomorphism:
    """The r-n family of A4,1 paired with X14 - X23; columns are the images n(X_j)."""
    return Endomorphism(
        a41,
        mx.as_fraction_matrix(
            [
                [n1, -n2, n4, 0],
                [0, n3, 0, n4],
                [0, 0, n3, n2],
                [0, 0, 0, n1],
            ]
        ),
    )


@pytest.fixture()
def seeded_faker() -> Faker:
    faker = Faker()
    faker.seed_instance(20241019)
    return faker


@pytest.fixture()
def random_rational(seeded_faker: Faker) -> Callable[[], Fraction]:
    def _draw() -> Fraction:
        return Fraction(seeded_faker.random_int(-9, 9), seeded_faker.random_int(1, 6))

    return _draw


@pytest.fixture()
def write_document(tmp_path: Path) -> Callable[[str, dict[str, Any]], str]:
    def _write(name: str, content: dict[str, Any]) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(content))
        return str(path)

    return _write


@pytest.fixture()
def a41_section() -> dict[str, Any]:
    return {"dim": 4, "brackets": [list(b) for b in A41_BRACKETS], "name": "A4,1"}
