from __future__ import annotations

import itertools

import pytest

from votetrust.model import (
    ALL_SEVERITIES,
    GOALS,
    PARTIES,
    GoalId,
    Impact,
    SeverityKey,
    SystemClass,
    SystemId,
    TrustAssumption,
    TrustMode,
    TrustModel,
    canonical_systems,
    severity_key,
    severity_leq,
)

F, C = TrustMode.FULL, TrustMode.CONDITIONAL


@pytest.mark.parametrize("impact, mode, ranks", [
    (Impact.ALL, F, (3, 2)),
    (Impact.SINGLE, C, (1, 1)),
    (Impact.SUBSET, F, (2, 2)),
])
def test_severity_key_ranks(impact, mode, ranks):
    assert severity_key(impact, mode).ranks == ranks


def test_severity_leq_examples():
    assert severity_leq(SeverityKey(Impact.SINGLE, F), SeverityKey(Impact.ALL, F))
    a, b = SeverityKey(Impact.ALL, C), SeverityKey(Impact.SUBSET, F)
    assert not severity_leq(a, b) and not severity_leq(b, a)
    assert severity_leq(SeverityKey(Impact.SUBSET, F), SeverityKey(Impact.SUBSET, F))


def test_severity_partial_order_laws_exhaustive():
    keys = list(ALL_SEVERITIES)
    assert len(keys) == 6
    for a in keys:
        assert severity_leq(a, a)
    for a, b in itertools.product(keys, repeat=2):
        if severity_leq(a, b) and severity_leq(b, a):
            assert a == b
    for a, b, c in itertools.product(keys, repeat=3):
        if severity_leq(a, b) and severity_leq(b, c):
            assert severity_leq(a, c)
    incomparable = {frozenset((a, b)) for a, b in itertools.product(keys, repeat=2)
                    if not severity_leq(a, b) and not severity_leq(b, a)}
    named = {
        frozenset((SeverityKey(Impact.ALL, C), SeverityKey(Impact.SUBSET, F))),
        frozenset((SeverityKey(Impact.SUBSET, C), SeverityKey(Impact.SINGLE, F))),
    }
    assert named <= incomparable
    # the product order of a 3-chain and a 2-chain has a third incomparable pair
    assert incomparable - named == {frozenset((SeverityKey(Impact.ALL, C), SeverityKey(Impact.SINGLE, F)))}


def test_severity_leq_matches_rank_product_order():
    for a, b in itertools.product(ALL_SEVERITIES, repeat=2):
        expect = a.impact.rank <= b.impact.rank and a.mode.rank <= b.mode.rank
        assert severity_leq(a, b) == expect


def test_canonical_systems():
    systems = canonical_systems()
    assert [s.value for s in systems] == [
        "paper_voting", "crypto_paper_voting", "postal_voting", "crypto_postal_voting",
        "machine_voting_paper_trail", "machine_voting_no_trail", "ivoting_individual", "ivoting_universal",
    ]
    assert systems[0].system_class is SystemClass("polling_station_paper")
    assert len(systems) == 8


def test_vocabulary_sizes_and_order():
    assert len(PARTIES) == 12 and PARTIES[0].value == "voter" and PARTIES[-1].value == "software_vendor"
    assert [g.value for g in GOALS][:2] == ["ballot_secrecy", "coercion_resistance"]
    assert len(GOALS) == 7


def test_goal_definition_refs():
    multi = [g for g in GoalId if len(g.definition_refs) > 1]
    assert multi == [GoalId.EQUAL_AND_UNIVERSAL_SUFFRAGE]
    assert all(g.definition_refs for g in GoalId)


def test_build_collects_referenced_systems_and_goals():
    cell = TrustAssumption(SystemId.POSTAL_VOTING, GoalId.TALLY_INTEGRITY, PARTIES[2], SeverityKey(Impact.ALL))
    m = TrustModel.build([], [], [cell])
    assert m.systems == {SystemId.POSTAL_VOTING}
    assert m.goals == {GoalId.TALLY_INTEGRITY}
    assert m.row(SystemId.POSTAL_VOTING, GoalId.TALLY_INTEGRITY) == {cell}


def test_without_leaves_original_untouched():
    cell = TrustAssumption(SystemId.POSTAL_VOTING, GoalId.TALLY_INTEGRITY, PARTIES[2], SeverityKey(Impact.ALL))
    m = TrustModel.build([], [], [cell])
    m2 = m.without([cell.key])
    assert len(m.assumptions) == 1 and len(m2.assumptions) == 0
    assert m2.systems == m.systems
