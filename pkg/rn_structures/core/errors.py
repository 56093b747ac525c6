from enum import StrEnum


class Errors(StrEnum):
    PARSE_ERROR = "PARSE_ERROR"
    UNKNOWN_VARIABLE = "UNKNOWN_VARIABLE"
    MISSING_ASSIGNMENT = "MISSING_ASSIGNMENT"
    SINGULAR_MATRIX = "SINGULAR_MATRIX"
    NOT_SQUARE = "NOT_SQUARE"
    NOT_ANTISYMMETRIC = "NOT_ANTISYMMETRIC"
    DIMENSION_MISMATCH = "DIMENSION_MISMATCH"
    INDEX_OUT_OF_RANGE = "INDEX_OUT_OF_RANGE"
    DUPLICATE_BRACKET = "DUPLICATE_BRACKET"
    NOT_AN_R_MATRIX = "NOT_AN_R_MATRIX"
    NOT_NIJENHUIS = "NOT_NIJENHUIS"
    NOT_AN_RN_STRUCTURE = "NOT_AN_RN_STRUCTURE"
    INCOMPATIBLE = "INCOMPATIBLE"
    NOT_AN_AUTOMORPHISM = "NOT_AN_AUTOMORPHISM"
    CONSTRAINT_VIOLATION = "CONSTRAINT_VIOLATION"
    UNSATISFIABLE = "UNSATISFIABLE"
    UNKNOWN_ENTRY = "UNKNOWN_ENTRY"
    UNKNOWN_CLASS = "UNKNOWN_CLASS"
    FORMULATION_MISMATCH = "FORMULATION_MISMATCH"
    INVALID_DOCUMENT = "INVALID_DOCUMENT"

    def as_exc(self, detail: str | None = None) -> "RNStructuresError":
        return RNStructuresError(self, detail)


class RNStructuresError(ValueError):
    def __init__(self, error: Errors, detail: str | None = None) -> None:
        self.error = error
        self.detail = detail
        super().__init__(error.value if detail is None else f"{error.value}: {detail}")


class ParseError(RNStructuresError):
    """Syntax error in a polynomial or wedge expression, located by byte offset."""

    def __init__(self, detail: str, offset: int) -> None:
        self.offset = offset
        super().__init__(Errors.PARSE_ERROR, f"{detail} at offset {offset}")
