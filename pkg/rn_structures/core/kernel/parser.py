"""Recursive descent parser for the polynomial and wedge expression grammar.

    expr     := ['-'] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := rational | var | '(' expr ')'
    rational := int ('/' uint)?
    var      := letter (letter | digit)*

Whitespace is insignificant. Errors carry the byte offset of the offending
token.
"""

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger

from rn_structures.core.errors import Errors, ParseError
from rn_structures.core.kernel.polynomial import Polynomial

logger = getLogger(__name__)

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*/^()]))"
)
_WEDGE_SYMBOL = re.compile(r"X([1-9])([1-9])")


@dataclass(slots=True, frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(src: str) -> list[Token]:
    tokens: list[Token] = []
    position = 0
    while position < len(src):
        if src[position:].strip() == "":
            break

        match = _TOKEN.match(src, position)
        if match is None:
            start = len(src) - len(src[position:].lstrip())
            raise ParseError(f"unexpected character {src[start]!r}", _byte_offset(src, start))

        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), _byte_offset(src, match.start(kind))))
        position = match.end()

    tokens.append(Token("end", "", _byte_offset(src, len(src))))
    return tokens


def _byte_offset(src: str, index: int) -> int:
    return len(src[:index].encode())


@dataclass(slots=True)
class _Parser:
    tokens: list[Token]
    variables: tuple[str, ...]
    position: int = field(default=0)

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def _advance(self) -> Token:
        token = self.tokens[self.position]
        self.position += 1
        return token

    def _accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.position += 1
            return True
        return False

    def _expect_uint(self) -> int:
        token = self.current
        if token.kind != "int":
            raise ParseError(f"expected unsigned integer, got {token.text or 'end'!r}", token.offset)
        self.position += 1
        return int(token.text)

    def parse(self) -> Polynomial:
        result = self.expr()
        if self.current.kind != "end":
            raise ParseError(f"unexpected token {self.current.text!r}", self.current.offset)
        return result

    def expr(self) -> Polynomial:
        negate = self._accept("-")
        result = self.term()
        if negate:
            result = -result

        while True:
            if self._accept("+"):
                result = result + self.term()
            elif self._accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self._accept("*"):
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        base = self.base()
        if self._accept("^"):
            return base ** self._expect_uint()
        return base

    def base(self) -> Polynomial:
        token = self.current
        match token.kind:
            case "int":
                self._advance()
                value = Fraction(int(token.text))
                if self._accept("/"):
                    denominator_token = self.current
                    denominator = self._expect_uint()
                    if denominator == 0:
                        raise ParseError("zero denominator", denominator_token.offset)
                    value /= denominator
                return Polynomial.constant(self.variables, value)
            case "name":
                self._advance()
                if token.text not in self.variables:
                    raise Errors.UNKNOWN_VARIABLE.as_exc(
                        f"{token.text!r} at offset {token.offset}"
                    )
                return Polynomial.variable(self.variables, token.text)
            case "op" if token.text == "(":
                self._advance()
                inner = self.expr()
                if not self._accept(")"):
                    raise ParseError("expected ')'", self.current.offset)
                return inner
            case _:
                raise ParseError(f"unexpected token {token.text or 'end'!r}", token.offset)


def parse_polynomial(src: str, variables: Iterable[str]) -> Polynomial:
    return _Parser(tokenize(src), tuple(variables)).parse()


def parse_rational(src: str) -> Fraction:
    tokens = tokenize(src)
    sign = 1
    position = 0
    if tokens[0].kind == "op" and tokens[0].text == "-":
        sign, position = -1, 1

    parser = _Parser(tokens, (), position)
    if parser.current.kind != "int":
        raise ParseError("expected rational", parser.current.offset)

    value = parser.base().constant_value() * sign
    if parser.current.kind != "end":
        raise ParseError(f"unexpected token {parser.current.text!r}", parser.current.offset)
    return value


def wedge_symbols(dim: int) -> tuple[str, ...]:
    if not 1 <= dim <= 9:
        raise Errors.INDEX_OUT_OF_RANGE.as_exc(f"wedge symbols need 1 <= dim <= 9, got {dim}")

    return tuple(f"X{i}{j}" for i in range(1, dim + 1) for j in range(1, dim + 1) if i != j)


def parse_wedge(
    src: str, dim: int, params: Sequence[str] = ()
) -> dict[tuple[int, int], Polynomial]:
    """Parse `c12*X12 + c14*(X14 - X23)` style input.

    Returns 0-based (i, j) with i < j mapped to coefficient polynomials over
    `params`. `Xji` contributes to (i, j) with the opposite sign.
    """
    symbols = wedge_symbols(dim)
    params = tuple(params)
    variables = params + symbols
    poly = parse_polynomial(src, variables)

    coefficients: dict[tuple[int, int], dict] = {}
    n_params = len(params)
    for exponents, coeff in poly.terms.items():
        wedge_part = exponents[n_params:]
        if sum(wedge_part) != 1:
            raise Errors.PARSE_ERROR.as_exc(
                f"wedge expression {src!r} is not linear in the X symbols"
            )

        symbol = symbols[wedge_part.index(1)]
        i, j = (int(d) - 1 for d in _WEDGE_SYMBOL.fullmatch(symbol).groups())
        sign = 1 if i < j else -1
        key = (min(i, j), max(i, j))
        bucket = coefficients.setdefault(key, {})
        param_exponents = exponents[:n_params]
        bucket[param_exponents] = bucket.get(param_exponents, 0) + sign * coeff

    result = {
        key: Polynomial(params, terms) for key, terms in sorted(coefficients.items())
    }
    logger.debug("parsed wedge %r into %d components", src, len(result))
    return {key: value for key, value in result.items() if not value.is_zero()}


def parse_vector(src: str, dim: int, params: Sequence[str] = ()) -> list[Polynomial]:
    """Parse a vector such as `n2*X1 - 2*n3*X4` into its dim coefficients over `params`."""
    if not 1 <= dim <= 9:
        raise Errors.INDEX_OUT_OF_RANGE.as_exc(f"vector symbols need 1 <= dim <= 9, got {dim}")

    params = tuple(params)
    symbols = tuple(f"X{i}" for i in range(1, dim + 1))
    poly = parse_polynomial(src, params + symbols)

    buckets: list[dict] = [{} for _ in range(dim)]
    n_params = len(params)
    for exponents, coeff in poly.terms.items():
        basis_part = exponents[n_params:]
        if sum(basis_part) != 1:
            raise Errors.PARSE_ERROR.as_exc(f"vector {src!r} is not linear in the X symbols")
        buckets[basis_part.index(1)][exponents[:n_params]] = coeff

    return [Polynomial(params, terms) for terms in buckets]
