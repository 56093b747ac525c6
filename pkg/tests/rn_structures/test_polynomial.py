from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from rn_structures.core.errors import Errors, RNStructuresError
from rn_structures.core.kernel import Polynomial, parse_polynomial

VARIABLES = ("x", "y", "z")

terms = st.dictionaries(
    st.tuples(*(st.integers(0, 3) for _ in VARIABLES)),
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
    max_size=5,
)
polynomials = terms.map(lambda t: Polynomial(VARIABLES, t))


def to_sympy(p: Polynomial) -> sympy.Expr:
    symbols = sympy.symbols(VARIABLES)
    return sympy.Add(
        *(
            sympy.Rational(c.numerator, c.denominator)
            * sympy.Mul(*(s**e for s, e in zip(symbols, exponents)))
            for exponents, c in p.terms.items()
        )
    )


@settings(max_examples=60, deadline=None)
@given(polynomials, polynomials, polynomials)
def test_ring_axioms(p: Polynomial, q: Polynomial, r: Polynomial):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == 0


@settings(max_examples=40, deadline=None)
@given(polynomials, polynomials)
def test_product_matches_sympy_expansion(p: Polynomial, q: Polynomial):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


@settings(max_examples=40, deadline=None)
@given(polynomials, polynomials)
def test_partial_derivative_obeys_leibniz(p: Polynomial, q: Polynomial):
    for name in VARIABLES:
        assert (p * q).partial(name) == p.partial(name) * q + p * q.partial(name)


def test_zero_terms_are_dropped():
    p = Polynomial(VARIABLES, {(1, 0, 0): 2, (0, 1, 0): 0})

    assert p.terms == {(1, 0, 0): Fraction(2)}
    assert not (p - p)
    assert (p - p).is_zero()


def test_constant_equality_and_hash():
    p = Polynomial.constant(VARIABLES, Fraction(3, 2))

    assert p == Fraction(3, 2)
    assert hash(p) == hash(Fraction(3, 2))
    assert p.is_constant()
    assert p.constant_value() == Fraction(3, 2)


def test_evaluate_requires_every_variable():
    p = parse_polynomial("x*y + z", VARIABLES)

    assert p.evaluate({"x": 2, "y": 3, "z": Fraction(1, 2)}) == Fraction(13, 2)
    with pytest.raises(RNStructuresError) as exc_info:
        p.evaluate({"x": 1})
    assert Errors.MISSING_ASSIGNMENT.value in str(exc_info.value)


@pytest.mark.parametrize(
    ("values", "expected"),
    [
        ({"x": 2}, "2*y + z"),
        ({"y": 0}, "z"),
        ({"x": 1, "y": 1}, "z + 1"),
    ],
)
def test_substitute_is_partial_evaluation(values: dict, expected: str):
    p = parse_polynomial("x*y + z", VARIABLES)

    assert p.substitute(values) == parse_polynomial(expected, VARIABLES)


def test_replace_substitutes_a_polynomial():
    p = parse_polynomial("x^2 + y", VARIABLES)
    q = parse_polynomial("y - z", VARIABLES)

    assert p.replace("x", q) == parse_polynomial("y^2 - 2*y*z + z^2 + y", VARIABLES)


def test_aligned_reorders_and_drops_unused():
    p = parse_polynomial("2*z - y", VARIABLES)

    aligned = p.aligned(("z", "y"))

    assert aligned.variables == ("z", "y")
    assert aligned.terms == {(1, 0): 2, (0, 1): -1}
    with pytest.raises(RNStructuresError) as exc_info:
        p.aligned(("x",))
    assert Errors.UNKNOWN_VARIABLE.value in str(exc_info.value)


def test_mixed_variable_orders_are_rejected():
    p = Polynomial.variable(("x", "y"), "x")
    q = Polynomial.variable(("y", "x"), "x")

    with pytest.raises(RNStructuresError) as exc_info:
        p + q
    assert Errors.DIMENSION_MISMATCH.value in str(exc_info.value)


def test_linear_coefficient_and_univariate():
    p = parse_polynomial("3*x + y^2 - 1", VARIABLES)

    coeff, rest = p.linear_coefficient("x")

    assert coeff == 3
    assert rest == parse_polynomial("y^2 - 1", VARIABLES)
    assert p.linear_coefficient("y") is None
    assert parse_polynomial("x^2 - 4", VARIABLES).as_univariate("x") == [-4, 0, 1]
    assert p.as_univariate("x") is None


@pytest.mark.parametrize(
    ("src", "printed"),
    [
        ("x4 + 2*x2*x3 - x3", "2*x2*x3 - x3 + x4"),
        ("-1/2*x2^2*x3", "-1/2*x2^2*x3"),
        ("0*x1", "0"),
        ("x1 - x1 + 7", "7"),
    ],
)
def test_printing_is_canonical(src: str, printed: str):
    variables = ("x1", "x2", "x3", "x4")

    assert str(parse_polynomial(src, variables)) == printed
