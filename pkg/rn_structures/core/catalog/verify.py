"""Replay of the catalog: every stored class is sampled and re-checked exactly."""

from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from logging import getLogger

from rn_structures.core.catalog.instances import (
    instantiate,
    instantiate_algebra,
    representative_r,
    sample_parameters,
    stored_dual,
)
from rn_structures.core.catalog.records import CatalogEntry, load_catalog
from rn_structures.core.catalog.sampling import Assignment, algebra_assignment, render_assignment
from rn_structures.core.errors import Errors, RNStructuresError
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.lie_algebra import LieAlgebra, check_jacobi, is_automorphism
from rn_structures.core.pn_structures import (
    RNStructure,
    check_bi_r_matrix,
    check_hierarchy,
    check_rn,
    first_failing_poisson_index,
    n_from_pair,
    sklyanin_dual,
)
from rn_structures.core.settings import VerificationSettings

logger = getLogger(__name__)


@dataclass(slots=True, frozen=True)
class Corruption:
    """Flip the sign of f^k_{ij} (1-based) in one entry's algebra."""

    entry: str
    i: int
    j: int
    k: int


@dataclass(slots=True, frozen=True)
class Failure:
    entry: str
    item: str
    sample: int
    check: str
    detail: str
    assignment: dict[str, str] = field(default_factory=dict)


@dataclass(slots=True)
class CatalogReport:
    seed: int
    samples_per_class: int
    entries: int = 0
    checks: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


type Outcome = tuple[str, bool, str]


def _algebra(entry: CatalogEntry, assignment: Assignment, corruption: Corruption | None) -> LieAlgebra:
    algebra = instantiate_algebra(entry, assignment)
    if corruption is None or corruption.entry != entry.id:
        return algebra

    structure = algebra.structure.copy()
    i, j, k = corruption.i - 1, corruption.j - 1, corruption.k - 1
    structure[i, j, k] = -structure[i, j, k]
    structure[j, i, k] = -structure[j, i, k]
    return LieAlgebra(algebra.dim, structure, algebra.name)


def _guarded(check: str, body: Callable[[], tuple[bool, str]]) -> Outcome:
    try:
        passed, detail = body()
    except RNStructuresError as e:
        return check, False, str(e)
    return check, passed, detail


def _check_algebra(algebra: LieAlgebra) -> list[Outcome]:
    def jacobi() -> tuple[bool, str]:
        report = check_jacobi(algebra)
        first = report.defects[0] if report.defects else None
        return report.valid, "" if first is None else f"defect at ({first.i}, {first.j}, {first.k}) on X{first.l}"

    return [_guarded("jacobi", jacobi)]


def _check_r_class(entry: CatalogEntry, row: str, assignment: Assignment, algebra: LieAlgebra) -> list[Outcome]:
    r = instantiate(entry, f"r/{row}", assignment, algebra)

    def cybe() -> tuple[bool, str]:
        index = first_failing_poisson_index(r)
        return index is None, "" if index is None else f"equation {index} fails for {r}"

    outcomes = [_guarded("cybe", cybe)]
    if entry.r_class(row).invertible:
        outcomes.append(_guarded("invertible", lambda: (r.is_invertible(), str(r))))
    return outcomes


def _check_rn_family(
    entry: CatalogEntry, assignment: Assignment, algebra: LieAlgebra, settings: VerificationSettings
) -> list[Outcome]:
    s: RNStructure = instantiate(entry, "rn", assignment, algebra)

    def rn() -> tuple[bool, str]:
        report = check_rn(s.r, s.n)
        return report.valid, ", ".join(report.failures())

    def dual() -> tuple[bool, str]:
        computed = sklyanin_dual(s.r).constants
        expected = stored_dual(entry, assignment).structure
        return mx.is_zero(computed - expected), "stored dual constants differ from the computed ones"

    def hierarchy() -> tuple[bool, str]:
        report = check_hierarchy(s, settings.hierarchy_depth)
        return report.valid, (
            f"non-solutions {report.non_solutions}, incompatible {report.incompatible_pairs}, "
            f"non r-n powers {report.non_rn_powers}"
        )

    return [
        _guarded("rn", rn),
        _guarded("dual", dual),
        _guarded("bi-r", lambda: (check_bi_r_matrix(s.r), "dual of r^-1 does not recover the bracket")),
        _guarded("hierarchy", hierarchy),
    ]


def _check_n_class(entry: CatalogEntry, row: str, assignment: Assignment, algebra: LieAlgebra) -> list[Outcome]:
    n = instantiate(entry, f"n/{row}", assignment, algebra)
    r = representative_r(entry, assignment, algebra)

    def rn() -> tuple[bool, str]:
        report = check_rn(r, n)
        return report.valid, ", ".join(report.failures())

    def round_trip() -> tuple[bool, str]:
        recovered = n_from_pair(r, n.apply(r))
        return recovered.equals(n), "r2 r^-1 differs from n"

    return [_guarded("rn", rn), _guarded("round-trip", round_trip)]


def _check_automorphism(entry: CatalogEntry, assignment: Assignment, algebra: LieAlgebra) -> list[Outcome]:
    a = instantiate(entry, "automorphism", assignment, algebra)
    return [_guarded("automorphism", lambda: (is_automorphism(algebra, a), mx.to_text(a)))]


def check_item(
    entry: CatalogEntry,
    item: str,
    assignment: Assignment,
    settings: VerificationSettings = VerificationSettings(),
    corruption: Corruption | None = None,
) -> list[Outcome]:
    """(check, passed, detail) for one sampled item of an entry."""
    try:
        algebra = _algebra(entry, assignment, corruption)
    except RNStructuresError as e:
        return [("algebra", False, str(e))]

    match item.split("/", 1):
        case ["algebra"]:
            return _check_algebra(algebra)
        case ["r", row]:
            return _check_r_class(entry, row, assignment, algebra)
        case ["rn"]:
            return _check_rn_family(entry, assignment, algebra, settings)
        case ["n", row]:
            return _check_n_class(entry, row, assignment, algebra)
        case ["automorphism"]:
            return _check_automorphism(entry, assignment, algebra)
        case _:
            return [("item", False, f"unknown item {item}")]


def _samples(
    entry: CatalogEntry, item: str, seed: int, count: int, settings: VerificationSettings
) -> list[Assignment]:
    if item == "algebra" and not (settings.vary_algebra and entry.algebra.params):
        return [algebra_assignment(entry)]
    return sample_parameters(entry, item, seed, count, settings.sampling, settings.vary_algebra)


def verify_catalog(
    seed: int,
    samples_per_class: int,
    settings: VerificationSettings = VerificationSettings(),
    corruption: Corruption | None = None,
    entries: tuple[CatalogEntry, ...] | None = None,
) -> CatalogReport:
    if samples_per_class < 1:
        raise Errors.INDEX_OUT_OF_RANGE.as_exc(f"samples_per_class = {samples_per_class}")

    entries = load_catalog() if entries is None else entries
    report = CatalogReport(seed=seed, samples_per_class=samples_per_class, entries=len(entries))
    outcomes: list[tuple[tuple[int, int, int], Failure]] = []

    with ThreadPoolExecutor(max_workers=settings.workers) as executor:
        futures = {}

        for e, entry in enumerate(entries):
            for c, item in enumerate(["algebra", *entry.class_ids()]):
                try:
                    samples = _samples(entry, item, seed, samples_per_class, settings)
                except RNStructuresError as exc:
                    report.checks += 1
                    failure = Failure(entry.id, item, 0, "sampling", str(exc))
                    outcomes.append(((e, c, 0), failure))
                    continue

                for s, assignment in enumerate(samples):
                    future = executor.submit(check_item, entry, item, assignment, settings, corruption)
                    futures[future] = ((e, c, s), entry, item, assignment)

        for future in as_completed(futures):
            key, entry, item, assignment = futures[future]
            for check, passed, detail in future.result():
                report.checks += 1
                if not passed:
                    failure = Failure(entry.id, item, key[2], check, detail, render_assignment(assignment))
                    outcomes.append((key, failure))

    report.failures = [failure for _, failure in sorted(outcomes, key=lambda pair: (pair[0], pair[1].check))]
    logger.info(
        "catalog: %d entries, %d checks, %d failures", report.entries, report.checks, len(report.failures)
    )
    return report

