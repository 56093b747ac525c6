from rn_structures.core.kernel.parser import (
    parse_polynomial,
    parse_rational,
    parse_vector,
    parse_wedge,
    wedge_symbols,
)
from rn_structures.core.kernel.polynomial import Polynomial

__all__ = [
    "Polynomial",
    "parse_polynomial",
    "parse_rational",
    "parse_vector",
    "parse_wedge",
    "wedge_symbols",
]
