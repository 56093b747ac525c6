from __future__ import annotations

import json
from enum import StrEnum
from functools import cache
from importlib import resources
from logging import getLogger

from pydantic import BaseModel, ConfigDict, Field, model_validator

from rn_structures.core.errors import Errors

logger = getLogger(__name__)


class ConstraintKind(StrEnum):
    NONZERO = "nonzero"
    POSITIVE = "positive"
    NEGATIVE = "negative"
    SOME_NONZERO = "some-nonzero"
    SOME_ZERO = "some-zero"
    DISTINCT = "distinct"
    INTERVAL = "interval"


class Record(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class Constraint(Record):
    kind: ConstraintKind
    params: tuple[str, ...]
    low: str | None = None
    high: str | None = None


class Derived(Record):
    """A parameter `name = num / den`, both sides polynomials in earlier parameters."""

    name: str
    num: str
    den: str = "1"


class AlgebraRecord(Record):
    dim: int = Field(ge=1, le=9)
    brackets: tuple[tuple[int, int, int, str], ...]
    params: tuple[str, ...] = ()
    defaults: dict[str, str] = Field(default_factory=dict)
    constraints: tuple[Constraint, ...] = ()
    derived: tuple[Derived, ...] = ()


class RClassRecord(Record):
    id: str
    r: str
    params: tuple[str, ...]
    free: tuple[str, ...] = ()
    derived: tuple[Derived, ...] = ()
    constraints: tuple[Constraint, ...] = ()
    invertible: bool = False
    nonvanishing: str | None = None

    @model_validator(mode="after")
    def _invertible_rows_state_their_pfaffian(self) -> RClassRecord:
        if self.invertible and self.nonvanishing is None:
            raise ValueError(f"r/{self.id}: invertible rows need a nonvanishing Pfaffian")
        return self


class RNFamilyRecord(Record):
    label: str
    r: str
    r_params: tuple[str, ...] = ()
    r_constraints: tuple[Constraint, ...] = ()
    params: tuple[str, ...]
    n: tuple[str, ...]
    dual: tuple[tuple[int, int, int, str], ...]


class NClassRecord(Record):
    id: str
    assign: dict[str, str] = Field(default_factory=dict)
    constraints: tuple[Constraint, ...] = ()
    note: str | None = None


class AutomorphismRecord(Record):
    params: tuple[str, ...]
    matrix: tuple[tuple[str, ...], ...]
    nonvanishing: str


class CatalogEntry(Record):
    id: str
    name: str
    algebra: AlgebraRecord
    r_classes: tuple[RClassRecord, ...]
    rn_family: RNFamilyRecord
    n_classes: tuple[NClassRecord, ...]
    automorphisms: AutomorphismRecord
    notes: tuple[str, ...] = ()

    def class_ids(self) -> list[str]:
        """Sampleable items: `r/<id>` rows, `rn`, `n/<id>` rows and `automorphism`."""
        return [
            *(f"r/{item.id}" for item in self.r_classes),
            "rn",
            *(f"n/{item.id}" for item in self.n_classes),
            "automorphism",
        ]

    def r_class(self, class_id: str) -> RClassRecord:
        for item in self.r_classes:
            if item.id == class_id:
                return item
        raise Errors.UNKNOWN_CLASS.as_exc(f"{self.id}: r/{class_id}")

    def n_class(self, class_id: str) -> NClassRecord:
        for item in self.n_classes:
            if item.id == class_id:
                return item
        raise Errors.UNKNOWN_CLASS.as_exc(f"{self.id}: n/{class_id}")


class CatalogFile(Record):
    version: int
    entries: tuple[CatalogEntry, ...]


@cache
def load_catalog() -> tuple[CatalogEntry, ...]:
    source = resources.files(__package__).joinpath("tables.json").read_text(encoding="utf-8")
    catalog = CatalogFile.model_validate(json.loads(source))
    logger.debug("loaded %d catalog entries", len(catalog.entries))
    return catalog.entries


def get_entry(entry_id: str) -> CatalogEntry:
    for entry in load_catalog():
        if entry.id == entry_id:
            return entry
    raise Errors.UNKNOWN_ENTRY.as_exc(entry_id)
