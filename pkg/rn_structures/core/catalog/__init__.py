from rn_structures.core.catalog.instances import (
    automorphism_family,
    instantiate,
    instantiate_algebra,
    representative_r,
    sample_parameters,
    stored_dual,
)
from rn_structures.core.catalog.records import CatalogEntry, get_entry, load_catalog
from rn_structures.core.catalog.sampling import complete_assignment
from rn_structures.core.catalog.verify import CatalogReport, Corruption, Failure, verify_catalog

__all__ = [
    "CatalogEntry",
    "CatalogReport",
    "Corruption",
    "Failure",
    "automorphism_family",
    "complete_assignment",
    "get_entry",
    "instantiate",
    "instantiate_algebra",
    "load_catalog",
    "representative_r",
    "sample_parameters",
    "stored_dual",
    "verify_catalog",
]
