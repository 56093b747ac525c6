from __future__ import annotations

from collections.abc import Iterable, Mapping
from fractions import Fraction
from types import MappingProxyType

from rn_structures.core.errors import Errors

type Exponents = tuple[int, ...]
type Scalar = Fraction | int


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    The variable order is fixed at construction. Terms map exponent vectors
    (one entry per variable) to nonzero `Fraction` coefficients, so two
    polynomials over the same variables are equal iff their term maps are.
    Instances are immutable.
    """

    __slots__ = ("_variables", "_terms")

    def __init__(
        self,
        variables: Iterable[str],
        terms: Mapping[Exponents, Scalar] | None = None,
    ) -> None:
        self._variables: tuple[str, ...] = tuple(variables)
        self._terms: dict[Exponents, Fraction] = {}

        if len(set(self._variables)) != len(self._variables):
            raise Errors.DIMENSION_MISMATCH.as_exc(
                f"repeated variable in {self._variables}"
            )

        for exponents, coeff in (terms or {}).items():
            if len(exponents) != len(self._variables):
                raise Errors.DIMENSION_MISMATCH.as_exc(
                    f"exponent vector {exponents} for {len(self._variables)} variables"
                )
            self._add_term(tuple(exponents), Fraction(coeff))

    def _add_term(self, exponents: Exponents, coeff: Fraction) -> None:
        if coeff == 0:
            return

        total = self._terms.get(exponents, 0) + coeff
        if total == 0:
            del self._terms[exponents]
        else:
            self._terms[exponents] = total

    @classmethod
    def _from_clean_terms(
        cls, variables: tuple[str, ...], terms: dict[Exponents, Fraction]
    ) -> Polynomial:
        poly = cls.__new__(cls)
        poly._variables = variables
        poly._terms = terms
        return poly

    @classmethod
    def zero(cls, variables: Iterable[str]) -> Polynomial:
        return cls(variables)

    @classmethod
    def constant(cls, variables: Iterable[str], value: Scalar) -> Polynomial:
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables: Iterable[str], name: str) -> Polynomial:
        variables = tuple(variables)
        if name not in variables:
            raise Errors.UNKNOWN_VARIABLE.as_exc(name)

        exponents = tuple(int(v == name) for v in variables)
        return cls(variables, {exponents: 1})

    @property
    def variables(self) -> tuple[str, ...]:
        return self._variables

    @property
    def terms(self) -> Mapping[Exponents, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(exponents) for exponents in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise Errors.DIMENSION_MISMATCH.as_exc(f"{self} is not constant")

        return self._terms.get((0,) * len(self._variables), Fraction(0))

    def degree(self) -> int:
        return max((sum(exponents) for exponents in self._terms), default=0)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(
            name
            for position, name in enumerate(self._variables)
            if any(exponents[position] for exponents in self._terms)
        )

    def degree_in(self, name: str) -> int:
        position = self._position(name)
        return max((exponents[position] for exponents in self._terms), default=0)

    def _position(self, name: str) -> int:
        try:
            return self._variables.index(name)
        except ValueError:
            raise Errors.UNKNOWN_VARIABLE.as_exc(name) from None

    def _coerce(self, other: object) -> Polynomial | None:
        match other:
            case Polynomial():
                if other._variables != self._variables:
                    raise Errors.DIMENSION_MISMATCH.as_exc(
                        f"variable order {other._variables} != {self._variables}"
                    )
                return other
            case int() | Fraction():
                return Polynomial.constant(self._variables, other)
            case _:
                return None

    def __add__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented

        result = Polynomial._from_clean_terms(self._variables, dict(self._terms))
        for exponents, coeff in rhs._terms.items():
            result._add_term(exponents, coeff)
        return result

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._from_clean_terms(
            self._variables, {e: -c for e, c in self._terms.items()}
        )

    def __sub__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> Polynomial:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented

        result = Polynomial._from_clean_terms(self._variables, {})
        for e1, c1 in self._terms.items():
            for e2, c2 in rhs._terms.items():
                result._add_term(tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return result

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> Polynomial:
        match other:
            case int() | Fraction() if other != 0:
                return self * (1 / Fraction(other))
            case int() | Fraction():
                raise ZeroDivisionError("polynomial division by zero")
            case _:
                return NotImplemented

    def __pow__(self, power: int) -> Polynomial:
        if power < 0:
            raise Errors.DIMENSION_MISMATCH.as_exc(f"negative power {power}")

        result = Polynomial.constant(self._variables, 1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        match other:
            case Polynomial():
                return (
                    self._variables == other._variables
                    and self._terms == other._terms
                )
            case int() | Fraction():
                return self.is_constant() and self.constant_value() == other
            case _:
                return NotImplemented

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self._variables, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def partial(self, name: str) -> Polynomial:
        position = self._position(name)

        result = Polynomial._from_clean_terms(self._variables, {})
        for exponents, coeff in self._terms.items():
            power = exponents[position]
            if power == 0:
                continue
            lowered = exponents[:position] + (power - 1,) + exponents[position + 1 :]
            result._add_term(lowered, coeff * power)
        return result

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        missing = [name for name in self._variables if name not in point]
        if missing:
            raise Errors.MISSING_ASSIGNMENT.as_exc(", ".join(missing))

        values = [Fraction(point[name]) for name in self._variables]
        total = Fraction(0)
        for exponents, coeff in self._terms.items():
            term = coeff
            for value, power in zip(values, exponents):
                if power:
                    term *= value**power
            total += term
        return total

    def substitute(self, values: Mapping[str, Scalar]) -> Polynomial:
        """Partial evaluation: assigned variables drop to exponent zero."""
        positions = {
            self._position(name): Fraction(value) for name, value in values.items()
        }

        result = Polynomial._from_clean_terms(self._variables, {})
        for exponents, coeff in self._terms.items():
            lowered = list(exponents)
            for position, value in positions.items():
                if exponents[position]:
                    coeff *= value ** exponents[position]
                    lowered[position] = 0
            result._add_term(tuple(lowered), coeff)
        return result

    def replace(self, name: str, value: Polynomial) -> Polynomial:
        """Substitute a polynomial (over the same variables) for one variable."""
        position = self._position(name)
        value = self._coerce(value)

        result = Polynomial.zero(self._variables)
        powers: dict[int, Polynomial] = {}
        for exponents, coeff in self._terms.items():
            power = exponents[position]
            rest = exponents[:position] + (0,) + exponents[position + 1 :]
            monomial = Polynomial._from_clean_terms(self._variables, {rest: coeff})
            if power:
                if power not in powers:
                    powers[power] = value**power
                monomial = monomial * powers[power]
            result = result + monomial
        return result

    def aligned(self, variables: Iterable[str]) -> Polynomial:
        """Re-express over another variable order; unused variables may be dropped."""
        variables = tuple(variables)
        used = self.used_variables()
        missing = [name for name in used if name not in variables]
        if missing:
            raise Errors.UNKNOWN_VARIABLE.as_exc(", ".join(missing))

        source = {name: i for i, name in enumerate(self._variables)}
        terms: dict[Exponents, Fraction] = {}
        for exponents, coeff in self._terms.items():
            terms[
                tuple(
                    exponents[source[name]] if name in source else 0
                    for name in variables
                )
            ] = coeff
        return Polynomial._from_clean_terms(variables, terms)

    def as_univariate(self, name: str) -> list[Fraction] | None:
        """Coefficients c0..cd when only `name` occurs, otherwise None."""
        position = self._position(name)
        coeffs = [Fraction(0)] * (self.degree_in(name) + 1)
        for exponents, coeff in self._terms.items():
            if any(p for i, p in enumerate(exponents) if i != position):
                return None
            coeffs[exponents[position]] = coeff
        return coeffs

    def linear_coefficient(self, name: str) -> tuple[Fraction, Polynomial] | None:
        """Split into c*name + rest when c is a nonzero constant and name is absent from rest."""
        position = self._position(name)
        coeff: Fraction | None = None
        rest: dict[Exponents, Fraction] = {}
        for exponents, value in self._terms.items():
            power = exponents[position]
            if power == 0:
                rest[exponents] = value
            elif power == 1 and sum(exponents) == 1:
                coeff = value
            else:
                return None

        if coeff is None:
            return None
        return coeff, Polynomial._from_clean_terms(self._variables, rest)

    def to_str(self) -> str:
        if not self._terms:
            return "0"

        ordered = sorted(
            self._terms.items(), key=lambda item: (-sum(item[0]), tuple(-p for p in item[0]))
        )

        chunks: list[str] = []
        for index, (exponents, coeff) in enumerate(ordered):
            factors = [
                name if power == 1 else f"{name}^{power}"
                for name, power in zip(self._variables, exponents)
                if power
            ]
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude), *factors])

            if index == 0:
                chunks.append(f"-{body}" if coeff < 0 else body)
            else:
                chunks.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(chunks)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_str()!r}, variables={self._variables!r})"
