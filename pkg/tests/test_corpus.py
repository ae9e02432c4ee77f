from __future__ import annotations

import re

import pytest

from votetrust import dsl
from votetrust.corpus import (
    Status,
    check_paper_claims,
    corpus_text,
    load_builtin_corpus,
    load_claims,
    parse_claims,
)
from votetrust.model import (
    GOALS,
    GoalId as G,
    Impact,
    PartyId as P,
    SeverityKey,
    SystemId as S,
    TrustAssumption,
    TrustMode,
    TrustModel,
    canonical_systems,
)
from votetrust.validation import validate_model

# cells per (system, goal) counted from the table, goals in canonical order
TOTALS = {
    S.PAPER_VOTING: [4, 4, 3, 3, 0, 3, 2],
    S.CRYPTO_PAPER_VOTING: [6, 7, 3, 3, 2, 1, 1],
    S.POSTAL_VOTING: [5, 5, 4, 4, 3, 3, 2],
    S.CRYPTO_POSTAL_VOTING: [8, 8, 4, 4, 3, 1, 1],
    S.MACHINE_VOTING_PAPER_TRAIL: [5, 4, 4, 3, 1, 2, 4],
    S.MACHINE_VOTING_NO_TRAIL: [5, 4, 5, 3, 1, 3, 5],
    S.IVOTING_INDIVIDUAL: [5, 6, 7, 5, 3, 4, 4],
    S.IVOTING_UNIVERSAL: [5, 6, 7, 5, 3, 1, 1],
}
ALL_LEVEL = {
    S.PAPER_VOTING: [0, 0, 1, 1, 0, 0, 0],
    S.CRYPTO_PAPER_VOTING: [2, 3, 1, 1, 1, 1, 1],
    S.POSTAL_VOTING: [0, 0, 1, 1, 0, 0, 0],
    S.CRYPTO_POSTAL_VOTING: [3, 3, 1, 1, 1, 1, 1],
    S.MACHINE_VOTING_PAPER_TRAIL: [1, 0, 1, 1, 0, 0, 1],
    S.MACHINE_VOTING_NO_TRAIL: [1, 0, 2, 1, 0, 0, 2],
    S.IVOTING_INDIVIDUAL: [3, 4, 4, 4, 1, 4, 4],
    S.IVOTING_UNIVERSAL: [3, 4, 4, 4, 1, 1, 1],
}


@pytest.fixture(scope="module")
def corpus() -> TrustModel:
    return load_builtin_corpus()


def test_corpus_shape(corpus):
    assert corpus.sorted_systems() == canonical_systems()
    assert corpus.sorted_goals() == list(GOALS)
    assert len(corpus.assumptions) == sum(map(sum, TOTALS.values()))


def test_corpus_totals_grid(corpus):
    for system, row in TOTALS.items():
        assert [len(corpus.row(system, g)) for g in GOALS] == row, system


def test_corpus_all_level_grid(corpus):
    for system, row in ALL_LEVEL.items():
        got = [sum(a.impact is Impact.ALL for a in corpus.row(system, g)) for g in GOALS]
        assert got == row, system


def test_corpus_cell_examples(corpus):
    assert corpus.cells[(S.PAPER_VOTING, G.BALLOT_SECRECY, P.VOTER)].severity == SeverityKey(Impact.SINGLE)
    assert corpus.row(S.PAPER_VOTING, G.DELIVERY_VERIFICATION) == frozenset()
    cell = corpus.cells[(S.CRYPTO_POSTAL_VOTING, G.BALLOT_SECRECY, P.SOFTWARE_VENDOR)]
    assert cell.severity == SeverityKey(Impact.ALL, TrustMode.CONDITIONAL)


def test_merged_rows_are_duplicated(corpus):
    for g in (G.BALLOT_SECRECY, G.COERCION_RESISTANCE, G.EQUAL_AND_UNIVERSAL_SUFFRAGE, G.ELIGIBILITY_VERIFICATION):
        strip = lambda s: {(a.party, a.severity, a.notes) for a in corpus.row(s, g)}
        assert strip(S.IVOTING_INDIVIDUAL) == strip(S.IVOTING_UNIVERSAL)
    for g in (G.BALLOT_SECRECY, G.COERCION_RESISTANCE):
        strip = lambda s: {(a.party, a.severity, a.notes) for a in corpus.row(s, g)}
        assert strip(S.MACHINE_VOTING_PAPER_TRAIL) == strip(S.MACHINE_VOTING_NO_TRAIL)


def test_all_fourteen_notes_present_and_referenced(corpus):
    assert sorted(corpus.note_catalog) == list(range(1, 15))
    used = {n for a in corpus.assumptions for n in a.notes}
    assert used == set(range(1, 15))
    assert all(n.text.strip() for n in corpus.notes)
    toggles = {n.id: n.toggle.value for n in corpus.notes if n.toggle}
    assert toggles == {3: "reliable_ids_available", 5: "code_voting_in_use", 11: "print_on_demand"}


def test_corpus_validates_cleanly(corpus):
    assert [d for d in validate_model(corpus) if d.is_error] == []


def test_corpus_roundtrip(corpus):
    assert dsl.parse_model(dsl.serialize_model(corpus)) == corpus


def test_corpus_files_parse_individually():
    for name in ("notes.vtm", "table1.vtm"):
        model, diags = dsl.parse_document(corpus_text(name), name)
        assert model is not None, diags


def test_validate_duplicate_cell():
    a = TrustAssumption(S.PAPER_VOTING, G.BALLOT_SECRECY, P.VOTER, SeverityKey(Impact.SINGLE))
    b = TrustAssumption(S.PAPER_VOTING, G.BALLOT_SECRECY, P.VOTER, SeverityKey(Impact.ALL))
    errors = [d for d in validate_model(TrustModel.build([], [], [a, b])) if d.is_error]
    assert len(errors) == 1


def test_validate_undeclared_note():
    a = TrustAssumption(S.PAPER_VOTING, G.BALLOT_SECRECY, P.VOTER, SeverityKey(Impact.SINGLE), frozenset({99}))
    errors = [d for d in validate_model(TrustModel.build([], [], [a])) if d.is_error]
    assert len(errors) == 1 and "undeclared note" in errors[0].message


def test_validate_warns_on_empty_goal_rows(corpus):
    warnings = [d for d in validate_model(corpus) if not d.is_error]
    assert len(warnings) == 1 and "paper_voting" in warnings[0].message


def test_claim_examples(corpus):
    report = check_paper_claims(corpus)
    assert report["cr_crypto_postal_all"].passed and report["cr_crypto_postal_all"].computed == 3
    assert report["eus_ivoting_individual_critical"].computed == 4
    bad = report["bs_crypto_paper_critical"]
    assert bad.status is Status.FAIL and bad.computed == 2
    assert "discrepancy" in bad.note


def test_only_the_documented_claim_fails(corpus):
    report = check_paper_claims(corpus)
    assert [r.claim.id for r in report.failures] == ["bs_crypto_paper_critical"]
    assert not report.all_passed


def test_claims_do_not_mutate_model(corpus):
    before = dsl.serialize_model(corpus)
    check_paper_claims(corpus)
    assert dsl.serialize_model(corpus) == before


def test_claims_not_evaluable_on_partial_model(corpus):
    partial = TrustModel.build([S.PAPER_VOTING], list(GOALS), corpus.row(S.PAPER_VOTING, G.BALLOT_SECRECY))
    report = check_paper_claims(partial)
    assert report["dv_paper_none"].passed
    assert report["bs_crypto_postal_critical"].status is Status.NOT_EVALUABLE
    assert report["bs_paper_fewest"].status is Status.NOT_EVALUABLE


def test_claim_quotes_are_short_and_unique_ids():
    claims = load_claims()
    assert len({c.id for c in claims}) == len(claims)
    assert all(c.quote and len(c.quote) < 120 for c in claims)


def test_parse_claims_errors():
    from votetrust.diagnostics import ModelError
    with pytest.raises(ModelError):
        parse_claims('claim x ballot_secrecy count_equals paper_voting "q";')  # missing count
    with pytest.raises(ModelError):
        parse_claims('claim x ballot_secrecy bogus paper_voting 1 "q";')
    [c] = parse_claims('claim x ballot_secrecy count_equals paper_voting 4 "q";')
    assert re.fullmatch(r"count_equals\(paper_voting expected=4\) on ballot_secrecy", c.describe())
