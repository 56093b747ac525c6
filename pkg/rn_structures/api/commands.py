"""Subcommand handlers: each takes parsed arguments and returns a Report."""

from argparse import Namespace
from logging import getLogger

from rn_structures.api.contracts import CheckResult, Report
from rn_structures.api.utils import load_document
from rn_structures.core.catalog import (
    automorphism_family,
    get_entry,
    instantiate,
    instantiate_algebra,
    load_catalog,
    representative_r,
    sample_parameters,
    verify_catalog,
)
from rn_structures.core.catalog.sampling import render_assignment
from rn_structures.core.documents import (
    AlgebraSection,
    AutomorphismSection,
    BivectorSection,
    Document,
    EndomorphismSection,
)
from rn_structures.core.equivalence import search_witness, verify_witness
from rn_structures.core.errors import Errors
from rn_structures.core.integrable import (
    analyze,
    check_realization,
    check_representation,
    load_example_system,
    sum_hamiltonian,
    system_from_document,
)
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.kernel.parser import parse_rational
from rn_structures.core.lie_algebra import LieAlgebra, check_jacobi
from rn_structures.core.pn_structures import (
    Bivector,
    Endomorphism,
    RNStructure,
    check_cybe,
    check_hierarchy,
    check_n_compatible,
    check_nijenhuis,
    check_r_compatible,
    check_rn,
    check_rn_compatible,
    first_failing_poisson_index,
    hierarchy,
    n_from_pair,
    sklyanin_dual,
)
from rn_structures.core.settings import IndependenceSettings, SearchBudget, VerificationSettings

logger = getLogger(__name__)


def _bivector(doc: Document) -> tuple[LieAlgebra, Bivector]:
    doc.require("algebra", "r")
    algebra = doc.lie_algebra()
    return algebra, doc.r.to_bivector(algebra)


def _endomorphism(doc: Document, algebra: LieAlgebra) -> Endomorphism:
    doc.require("n")
    return doc.n.to_endomorphism(algebra)


def _assignment(pairs: list[str] | None) -> dict[str, str]:
    """`name=value` pairs from the command line."""
    result = {}
    for pair in pairs or []:
        name, sep, value = pair.partition("=")
        if not sep:
            raise Errors.INVALID_DOCUMENT.as_exc(f"expected name=value, got {pair!r}")
        parse_rational(value)
        result[name.strip()] = value.strip()
    return result


def verify_algebra(args: Namespace) -> Report:
    algebra = load_document(args.file).lie_algebra()
    return Report(
        command="verify-algebra",
        summary=algebra.label,
        checks=[CheckResult.from_jacobi_report(check_jacobi(algebra))],
    )


def verify_r(args: Namespace) -> Report:
    _, r = _bivector(load_document(args.file))
    passed = check_cybe(r)
    index = None if passed else first_failing_poisson_index(r)
    return Report(
        command="verify-r",
        summary=str(r),
        checks=[
            CheckResult(
                name="cybe",
                passed=passed,
                detail="" if passed else f"equation {index} of the matrix form fails",
            )
        ],
        values={"invertible": "yes" if r.is_invertible() else "no"},
    )


def verify_n(args: Namespace) -> Report:
    doc = load_document(args.file)
    n = _endomorphism(doc, doc.lie_algebra())
    return Report(command="verify-n", checks=[CheckResult(name="nijenhuis", passed=check_nijenhuis(n))])


def verify_rn(args: Namespace) -> Report:
    doc = load_document(args.file)
    algebra, r = _bivector(doc)
    n = _endomorphism(doc, algebra)
    return Report(
        command="verify-rn",
        summary=str(r),
        checks=CheckResult.from_rn_report(check_rn(r, n, cross_check=True)),
    )


def dual(args: Namespace) -> Report:
    _, r = _bivector(load_document(args.file))
    result = sklyanin_dual(r)
    dual_algebra = result.as_algebra(check=False)
    return Report(
        command="dual",
        summary=f"dual bracket of {r}",
        checks=[CheckResult.from_jacobi_report(result.jacobi, name="dual jacobi")],
        values={f"[x{i}, x{j}]_{m}": str(c) for i, j, m, c in dual_algebra.brackets()},
        document=Document(algebra=AlgebraSection.from_algebra(dual_algebra)),
    )


def hierarchy_(args: Namespace) -> Report:
    doc = load_document(args.file)
    algebra, r = _bivector(doc)
    s = RNStructure.raw(r, _endomorphism(doc, algebra))
    members = hierarchy(s, args.k)
    return Report(
        command="hierarchy",
        summary=f"k = {args.k}",
        checks=[
            *CheckResult.from_rn_report(check_rn(s.r, s.n)),
            *CheckResult.from_hierarchy_report(check_hierarchy(s, args.k)),
        ],
        values={f"r_{k}": str(member) for k, member in enumerate(members, start=1)},
    )


def compat(args: Namespace) -> Report:
    first, second = load_document(args.file1), load_document(args.file2)
    algebra, other = first.lie_algebra(), second.lie_algebra()

    if first.r and first.n and second.r and second.n:
        s1 = RNStructure.raw(first.r.to_bivector(algebra), first.n.to_endomorphism(algebra))
        s2 = RNStructure.raw(second.r.to_bivector(other), second.n.to_endomorphism(other))
        return Report(
            command="compat",
            summary="r-n structures",
            checks=[CheckResult(name="rn-rn", passed=check_rn_compatible(s1, s2))],
        )
    if first.n and second.n and not (first.r and second.r):
        n1, n2 = first.n.to_endomorphism(algebra), second.n.to_endomorphism(other)
        return Report(
            command="compat",
            summary="Nijenhuis operators",
            checks=[CheckResult(name="n-n", passed=check_n_compatible(n1, n2))],
        )
    if first.r and second.r:
        r1, r2 = first.r.to_bivector(algebra), second.r.to_bivector(other)
        return Report(
            command="compat",
            summary=f"{r1} and {r2}",
            checks=[CheckResult(name="r-r", passed=check_r_compatible(r1, r2))],
        )
    raise Errors.INVALID_DOCUMENT.as_exc("compat needs two r, two n or two r-n documents")


def construct_n(args: Namespace) -> Report:
    _, r = _bivector(load_document(args.file_r))
    _, r2 = _bivector(load_document(args.file_r2))
    n = n_from_pair(r, r2)
    return Report(
        command="construct-n",
        summary=f"n = ({r2}) r^-1",
        checks=CheckResult.from_rn_report(check_rn(r, n)),
        document=Document(
            algebra=AlgebraSection.from_algebra(r.algebra),
            r=BivectorSection.from_bivector(r),
            n=EndomorphismSection.from_endomorphism(n),
        ),
    )


def equiv(args: Namespace) -> Report:
    first, second = load_document(args.file1), load_document(args.file2)
    algebra, r = _bivector(first)
    _, r2 = _bivector(second)
    n = first.n.to_endomorphism(algebra) if first.n else None
    n2 = second.n.to_endomorphism(algebra) if second.n else None

    if args.witness:
        witness = load_document(args.witness)
        witness.require("automorphism")
        matrix = witness.automorphism.to_matrix()
        found = verify_witness(matrix, r, r2, n, n2)
        return Report(
            command="equiv",
            summary=f"{r} ~ {r2}",
            checks=[CheckResult(name="witness", passed=found, detail="" if found else "A r A^t != r2")],
        )

    family_id = args.family or first.algebra.name
    if not family_id:
        raise Errors.INVALID_DOCUMENT.as_exc("no --family given and the algebra has no catalog name")
    family = automorphism_family(get_entry(family_id), _assignment(args.assign))
    if family.algebra.dim != algebra.dim or not mx.is_zero(family.algebra.structure - algebra.structure):
        raise Errors.DIMENSION_MISMATCH.as_exc(f"document algebra differs from catalog entry {family_id}")

    budget = SearchBudget(random_trials=args.budget, seed=args.seed)
    witness = search_witness(family, r, r2, n, n2, budget)
    if witness is None:
        return Report(
            command="equiv",
            summary=f"{r} ~ {r2}",
            checks=[
                CheckResult(name="witness", passed=False, detail=f"no witness found (budget {args.budget})")
            ],
        )
    return Report(
        command="equiv",
        summary=f"{r} ~ {r2}",
        checks=[CheckResult(name="witness", passed=True)],
        values=render_assignment(witness.assignment or {}),
        document=Document(automorphism=AutomorphismSection(matrix=mx.to_strings(witness.matrix))),
    )


def catalog_list(args: Namespace) -> Report:
    entries = load_catalog()
    return Report(
        command="catalog list",
        summary=f"{len(entries)} entries",
        values={entry.id: f"{entry.name}: {', '.join(entry.class_ids())}" for entry in entries},
    )


def _instance_document(entry_id: str, class_id: str, seed: int) -> tuple[Document, dict[str, str]]:
    entry = get_entry(entry_id)
    assignment = sample_parameters(entry, class_id, seed, 1)[0]
    algebra = instantiate_algebra(entry, assignment)
    instance = instantiate(entry, class_id, assignment, algebra)
    doc = Document(algebra=AlgebraSection.from_algebra(algebra))

    match instance:
        case Bivector():
            doc.r = BivectorSection.from_bivector(instance)
        case RNStructure():
            doc.r = BivectorSection.from_bivector(instance.r)
            doc.n = EndomorphismSection.from_endomorphism(instance.n)
        case Endomorphism():
            doc.r = BivectorSection.from_bivector(representative_r(entry, assignment, algebra))
            doc.n = EndomorphismSection.from_endomorphism(instance)
        case _:
            doc.automorphism = AutomorphismSection(matrix=mx.to_strings(instance))
    return doc, render_assignment(assignment)


def catalog_show(args: Namespace) -> Report:
    entry = get_entry(args.entry)
    doc, assignment = _instance_document(entry.id, args.instance, args.seed)
    values = {"name": entry.name, "classes": ", ".join(entry.class_ids()), "instance": args.instance}
    values.update({f"param {name}": value for name, value in assignment.items()})
    values.update({f"note {k}": note for k, note in enumerate(entry.notes, start=1)})
    return Report(command="catalog show", summary=entry.id, values=values, document=doc)


def catalog_verify(args: Namespace) -> Report:
    settings = VerificationSettings(workers=args.workers, vary_algebra=args.vary_algebra)
    return Report.from_catalog_report(verify_catalog(args.seed, args.samples, settings))


def invariants_(args: Namespace) -> Report:
    if args.example:
        system = load_example_system()
    elif args.file:
        system = system_from_document(load_document(args.file))
    else:
        raise Errors.INVALID_DOCUMENT.as_exc("give FILE or --example")
    if system.r is None:
        raise Errors.INVALID_DOCUMENT.as_exc("missing section(s): r")

    realization = system.realization
    report = Report(command="invariants", summary=f"r = {system.r}")

    found = check_realization(realization.space, realization.algebra, realization.functions)
    detail = ", ".join(f"({d.i}, {d.j})" for d in found.defects)
    if found.sign_flip_fixes:
        detail += "; the opposite bracket sign would fit"
    report.checks.append(CheckResult(name="realization", passed=found.valid, detail=detail))

    closure = check_representation(realization.algebra, system.representation.matrices)
    if not closure.valid:
        logger.warning("representation matrices do not close under commutators; continuing")
        report.values["representation"] = "fails at " + ", ".join(f"({d.i}, {d.j})" for d in closure.defects)

    settings = IndependenceSettings(trials=args.trials)
    systems = [("", system.r), *((f"part {k} ", part) for k, part in enumerate(system.parts, start=1))]
    for prefix, r in systems:
        analysis = analyze(realization, system.representation, r, args.kmax, settings, args.seed)
        for k, value in enumerate(analysis.invariants, start=1):
            report.values[f"{prefix}I{k}"] = str(value)
        report.values[f"{prefix}involution"] = (
            ", ".join(f"{{I{d.i}, I{d.j}}} = {d.residual}" for d in analysis.involution_defects) or "all pairs commute"
        )
        report.values[f"{prefix}rank"] = str(analysis.integrability.rank)
        report.values[f"{prefix}class"] = str(analysis.integrability)

    if system.parts:
        total = sum_hamiltonian(realization, system.representation, system.r, system.parts)
        report.values["H"] = str(total.hamiltonian)
        report.values["n_sum"] = str(mx.to_strings(total.n_sum.matrix))
        report.checks.append(CheckResult(name="sum consistency", passed=total.consistent))
    return report
