import json
import logging
import os
import sys
from pathlib import Path

from pydantic import ValidationError

from rn_structures.core.documents import Document
from rn_structures.core.errors import Errors, RNStructuresError

LOG_LEVEL_ENV = "RN_STRUCTURES_LOG_LEVEL"
EXIT_OK, EXIT_FAILED, EXIT_INPUT_ERROR = 0, 1, 2


def configure_logging(level: str | None = None) -> None:
    """Logs go to stderr; reports own stdout."""
    level = (level or os.environ.get(LOG_LEVEL_ENV) or "WARNING").upper()
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def load_document(path: str | Path) -> Document:
    return Document.model_validate_json(Path(path).read_text())


def describe_error(exc: Exception) -> str:
    """One-line diagnostic for an input or usage error."""
    match exc:
        case RNStructuresError():
            return str(exc)
        case ValidationError():
            first = exc.errors()[0]
            location = ".".join(str(part) for part in first["loc"]) or "document"
            return f"{Errors.INVALID_DOCUMENT}: {location}: {first['msg']}"
        case json.JSONDecodeError():
            return f"{Errors.INVALID_DOCUMENT}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        case OSError():
            return f"{Errors.INVALID_DOCUMENT}: {exc.filename or ''}: {exc.strerror}"
        case _:
            return f"{type(exc).__name__}: {exc}"
