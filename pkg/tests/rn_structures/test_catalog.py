from fractions import Fraction

import pytest
from pydantic import ValidationError

from rn_structures.core.catalog import (
    Corruption,
    automorphism_family,
    complete_assignment,
    get_entry,
    instantiate,
    instantiate_algebra,
    load_catalog,
    representative_r,
    sample_parameters,
    stored_dual,
    verify_catalog,
)
from rn_structures.core.catalog.records import RClassRecord
from rn_structures.core.errors import Errors, RNStructuresError
from rn_structures.core.kernel import matrix as mx
from rn_structures.core.lie_algebra import check_jacobi, is_automorphism
from rn_structures.core.pn_structures import (
    RNStructure,
    check_bi_r_matrix,
    check_n_compatible,
    check_r_compatible,
    check_rn,
    n_from_pair,
    sklyanin_dual,
)
from rn_structures.core.settings import VerificationSettings
from tests.rn_structures.conftest import a41_n

ENTRY_IDS = [entry.id for entry in load_catalog()]


def test_catalog_has_all_entries():
    assert len(ENTRY_IDS) == 18
    assert len(set(ENTRY_IDS)) == 18
    assert "A4,1" in ENTRY_IDS
    assert "VII0+R" in ENTRY_IDS


def test_class_ids_of_a41():
    entry = get_entry("A4,1")

    assert entry.class_ids() == [
        "r/1", "r/2", "r/3", "r/4", "r/5", "r/6", "rn", "n/1", "n/2", "n/3", "automorphism",
    ]


@pytest.mark.parametrize(
    ("lookup", "error"),
    [
        (lambda: get_entry("A9,9"), Errors.UNKNOWN_ENTRY),
        (lambda: get_entry("A4,1").r_class("42"), Errors.UNKNOWN_CLASS),
        (lambda: get_entry("A4,1").n_class("42"), Errors.UNKNOWN_CLASS),
        (lambda: instantiate(get_entry("A4,1"), "bogus", {}), Errors.UNKNOWN_CLASS),
    ],
)
def test_unknown_lookups(lookup, error: Errors):
    with pytest.raises(RNStructuresError) as exc_info:
        lookup()

    assert error.value in str(exc_info.value)


@pytest.mark.parametrize("entry_id", ENTRY_IDS)
def test_default_algebras_are_lie(entry_id: str):
    assert check_jacobi(instantiate_algebra(get_entry(entry_id))).valid


def test_rn_instance_matches_the_family(a41):
    entry = get_entry("A4,1")

    s = instantiate(entry, "rn", {"n1": 1, "n2": -2, "n3": 1, "n4": 1})

    assert isinstance(s, RNStructure)
    assert str(s.r) == "X14 - X23"
    assert mx.is_zero(s.n.matrix - a41_n(a41, 1, -2, 1, 1).matrix)
    assert check_rn(s.r, s.n).valid


def test_n_class_fills_fixed_parameters(a41):
    entry = get_entry("A4,1")

    n = instantiate(entry, "n/1", {"n1": "2", "n4": "-1/3"})

    assert mx.is_zero(n.matrix - a41_n(a41, 2, 0, 2, Fraction(-1, 3)).matrix)


def test_fixed_parameter_conflict_is_rejected():
    with pytest.raises(RNStructuresError) as exc_info:
        complete_assignment(get_entry("A4,1"), "n/1", {"n1": 2, "n4": 1, "n2": 5})

    assert Errors.CONSTRAINT_VIOLATION.value in str(exc_info.value)


@pytest.mark.parametrize(
    ("values", "error"),
    [
        ({"c12": 1, "c13": 1, "c14": 1}, Errors.MISSING_ASSIGNMENT),
        ({"c12": 1, "c13": 1, "c14": 0, "c23": 1}, Errors.CONSTRAINT_VIOLATION),
    ],
)
def test_r_class_assignment_errors(values: dict, error: Errors):
    with pytest.raises(RNStructuresError) as exc_info:
        instantiate(get_entry("A4,1"), "r/1", values)

    assert error.value in str(exc_info.value)


def test_sampling_is_deterministic_and_constrained():
    entry = get_entry("A4,1")

    first = sample_parameters(entry, "r/4", seed=7, count=10)
    second = sample_parameters(entry, "r/4", seed=7, count=10)

    assert first == second
    assert all(sample["c13"] > 0 for sample in first)


def test_invertible_rows_sample_invertible_bivectors():
    entry = get_entry("A4,1")

    for sample in sample_parameters(entry, "r/1", seed=3, count=10):
        assert instantiate(entry, "r/1", sample).is_invertible()


def test_invertible_rows_state_their_pfaffian():
    with pytest.raises(ValidationError):
        RClassRecord(id="1", r="c12*X12 + c34*X34", params=("c12", "c34"), invertible=True)

    row = RClassRecord(
        id="1", r="c12*X12 + c34*X34", params=("c12", "c34"), invertible=True, nonvanishing="c12*c34"
    )
    assert row.nonvanishing == "c12*c34"


def test_stated_pfaffian_is_enforced_when_sampling():
    entry = get_entry("II+R")

    for sample in sample_parameters(entry, "r/1a", seed=9, count=20):
        assert sample["c12"] * sample["c34"] != sample["c13"] * sample["c24"]
        assert instantiate(entry, "r/1a", sample).is_invertible()


def test_wrong_pfaffian_fails_the_invertibility_check():
    entry = get_entry("A4,1")
    degenerate = entry.r_class("2").model_copy(update={"invertible": True, "nonvanishing": "c23"})
    broken = entry.model_copy(update={"r_classes": (degenerate,)})

    report = verify_catalog(seed=1, samples_per_class=3, entries=(broken,))

    assert len(report.failures) == 3
    assert {(failure.item, failure.check) for failure in report.failures} == {("r/2", "invertible")}


def test_stored_dual_matches_the_computed_one():
    entry = get_entry("A4,1")
    assignment = {"n1": 1, "n2": 0, "n3": 1, "n4": 0}

    dual = stored_dual(entry, complete_assignment(entry, "rn", assignment))
    computed = sklyanin_dual(representative_r(entry, complete_assignment(entry, "rn", assignment)))

    assert mx.is_zero(dual.structure - computed.constants)


def test_automorphism_family_instances():
    family = automorphism_family(get_entry("A4,1"))
    point = {"a3": 1, "a4": 0, "a7": 1, "a8": 0, "a11": 1, "a12": 1, "a16": 1}

    witness = family.witness(point)

    assert family.parameters == ("a3", "a4", "a7", "a8", "a11", "a12", "a16")
    assert is_automorphism(family.algebra, witness.matrix)
    assert not family.admits({**point, "a11": 0})
    with pytest.raises(RNStructuresError) as exc_info:
        family.witness({**point, "a16": 0})
    assert Errors.CONSTRAINT_VIOLATION.value in str(exc_info.value)


def test_algebra_parameters_are_sampled_within_range():
    entry = get_entry("A4,9^b")

    samples = sample_parameters(entry, "rn", seed=1, count=10, vary_algebra=True)

    assert len({sample["b"] for sample in samples}) > 1
    assert all(-1 < sample["b"] < 1 and sample["b"] != 0 for sample in samples)
    assert all(sample["bi"] == 1 / sample["b"] for sample in samples)


def test_parametric_algebra_uses_given_values():
    entry = get_entry("A4,9^b")
    algebra = instantiate_algebra(entry, {"b": Fraction(-1, 2)})

    assert entry.algebra.params == ("b",)
    assert algebra.structure[0, 3, 0] == Fraction(1, 2)
    assert check_jacobi(algebra).valid


def test_verify_single_entry():
    report = verify_catalog(seed=1, samples_per_class=2, entries=(get_entry("A4,1"),))

    assert report.ok
    assert report.entries == 1
    assert report.checks > 0


def test_a490_family_solves_cybe():
    entry = get_entry("A4,9^0")
    s = instantiate(entry, "rn", {"n1": 1, "n2": 0, "n3": 0})

    assert s.r.matrix[1, 2] == -1
    assert check_rn(s.r, s.n).valid
    assert verify_catalog(seed=1, samples_per_class=2, entries=(entry,)).ok


def test_corrupted_structure_constant_is_caught():
    entries = (get_entry("A4,1"), get_entry("A4,3"))

    report = verify_catalog(
        seed=1,
        samples_per_class=2,
        corruption=Corruption("A4,1", 3, 4, 2),
        entries=entries,
    )

    assert not report.ok
    assert {failure.entry for failure in report.failures} == {"A4,1"}


def test_verification_report_is_deterministic():
    entries = (get_entry("A4,1"),)
    corruption = Corruption("A4,1", 2, 4, 1)

    first = verify_catalog(seed=5, samples_per_class=2, corruption=corruption, entries=entries)
    second = verify_catalog(
        seed=5,
        samples_per_class=2,
        settings=VerificationSettings(workers=1),
        corruption=corruption,
        entries=entries,
    )

    assert first.failures == second.failures


def test_sample_count_is_checked():
    with pytest.raises(RNStructuresError) as exc_info:
        verify_catalog(seed=1, samples_per_class=0)

    assert Errors.INDEX_OUT_OF_RANGE.value in str(exc_info.value)


@pytest.mark.slow
def test_whole_catalog_verifies():
    report = verify_catalog(seed=1, samples_per_class=5)

    assert report.entries == 18
    assert report.failures == []


@pytest.mark.slow
def test_parametric_families_verify_across_their_ranges():
    entries = tuple(entry for entry in load_catalog() if entry.algebra.params)

    report = verify_catalog(
        seed=2, samples_per_class=3, settings=VerificationSettings(vary_algebra=True), entries=entries
    )

    assert len(entries) == 5
    assert report.failures == []


@pytest.mark.slow
@pytest.mark.parametrize("entry_id", ENTRY_IDS)
def test_partners_from_n_classes_give_rn_structures(entry_id: str):
    entry = get_entry(entry_id)

    for item in (c for c in entry.class_ids() if c.startswith("n/")):
        for sample in sample_parameters(entry, item, seed=11, count=20):
            n = instantiate(entry, item, sample)
            r = representative_r(entry, sample, n.algebra)
            partner = n.apply(r)

            assert check_bi_r_matrix(r)
            assert check_rn(r, n_from_pair(r, partner)).valid


@pytest.mark.slow
@pytest.mark.parametrize("entry_id", ["A4,1", "A4,5^-1,-1"])
def test_n_compatibility_matches_r_compatibility(entry_id: str):
    entry = get_entry(entry_id)
    samples = sample_parameters(entry, "rn", seed=2, count=100)

    for first, second in zip(samples[::2], samples[1::2]):
        s1 = instantiate(entry, "rn", first)
        s2 = instantiate(entry, "rn", second)
        r1, r2 = s1.n.apply(s1.r), s2.n.apply(s2.r)

        assert check_n_compatible(s1.n, s2.n) == check_r_compatible(r1, r2)
