from __future__ import annotations

from pydantic import BaseModel, Field

from rn_structures.core.catalog import CatalogReport, Failure
from rn_structures.core.documents import Document
from rn_structures.core.lie_algebra import JacobiReport
from rn_structures.core.pn_structures import HierarchyReport, RNReport


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""

    @staticmethod
    def from_jacobi_report(report: JacobiReport, name: str = "jacobi") -> CheckResult:
        if report.valid:
            return CheckResult(name=name, passed=True)
        first = report.defects[0]
        return CheckResult(
            name=name,
            passed=False,
            detail=(
                f"({first.i}, {first.j}, {first.k}) has X{first.l}-coefficient {first.value}; "
                f"{len(report.defects)} defect(s)"
            ),
        )

    @staticmethod
    def from_rn_report(report: RNReport) -> list[CheckResult]:
        return [
            CheckResult(name="cybe", passed=report.cybe),
            CheckResult(name="nijenhuis", passed=report.nijenhuis),
            CheckResult(name="n r = r n^t", passed=report.compatible),
            CheckResult(name="concomitant", passed=report.concomitant),
        ]

    @staticmethod
    def from_hierarchy_report(report: HierarchyReport) -> list[CheckResult]:
        return [
            CheckResult(
                name="hierarchy solutions",
                passed=not report.non_solutions,
                detail=", ".join(f"r_{k}" for k in report.non_solutions),
            ),
            CheckResult(
                name="hierarchy compatibility",
                passed=not report.incompatible_pairs,
                detail=", ".join(f"(r_{k}, r_{l})" for k, l in report.incompatible_pairs),
            ),
            CheckResult(
                name="hierarchy r-n powers",
                passed=not report.non_rn_powers,
                detail=", ".join(f"n^{k}" for k in report.non_rn_powers),
            ),
        ]

    @staticmethod
    def from_failure(failure: Failure) -> CheckResult:
        assignment = ", ".join(f"{name}={value}" for name, value in failure.assignment.items())
        return CheckResult(
            name=f"{failure.entry} {failure.item} #{failure.sample} {failure.check}",
            passed=False,
            detail=f"{{{assignment}}} {failure.detail}".strip(),
        )


class Report(BaseModel):
    """What every subcommand prints: checks, computed values and optionally a document."""

    command: str
    summary: str = ""
    checks: list[CheckResult] = Field(default_factory=list)
    values: dict[str, str] = Field(default_factory=dict)
    document: Document | None = None

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    @staticmethod
    def from_catalog_report(report: CatalogReport) -> Report:
        return Report(
            command="catalog verify",
            summary=f"{report.entries} entries, {len(report.failures)} failures",
            checks=[CheckResult.from_failure(failure) for failure in report.failures],
            values={
                "seed": str(report.seed),
                "samples": str(report.samples_per_class),
                "checks": str(report.checks),
            },
        )
