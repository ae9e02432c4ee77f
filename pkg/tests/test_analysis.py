from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from votetrust.analysis import (
    DEFAULT_WEIGHTS,
    Relation,
    Witness,
    WitnessKind,
    WeightConfig,
    assumption_set,
    below,
    dominance,
    equivalence_classes,
    goal_matrix,
    pareto_frontier,
    profile,
    rank,
    score,
    tie_groups,
)
from votetrust.corpus import load_builtin_corpus
from votetrust.diagnostics import UnknownReferenceError
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
)

from oracles import naive_frontier, naive_leq
from strategies import admissible_weights, comparable_models, trust_models

CORPUS = load_builtin_corpus()


# -- examples ------------------------------------------------------------

def test_assumption_set_examples():
    assert assumption_set(CORPUS, S.PAPER_VOTING, G.DELIVERY_VERIFICATION) == frozenset()
    cells = assumption_set(CORPUS, S.IVOTING_INDIVIDUAL, G.BALLOT_BOX_INTEGRITY)
    assert {a.party for a in cells} == {P.ELECTION_ORGANISER, P.INFRASTRUCTURE_PROVIDER,
                                         P.ELECTION_OBSERVER, P.SOFTWARE_VENDOR}
    assert {a.severity for a in cells} == {SeverityKey(Impact.ALL, TrustMode.FULL)}
    [cell] = assumption_set(CORPUS, S.CRYPTO_PAPER_VOTING, G.BALLOT_BOX_INTEGRITY)
    assert (cell.party, cell.severity, cell.notes) == (P.ELECTION_OBSERVER, SeverityKey(Impact.ALL), {9})


def test_unknown_references():
    small = TrustModel.build([S.PAPER_VOTING], [G.BALLOT_SECRECY], [])
    with pytest.raises(UnknownReferenceError):
        assumption_set(small, S.POSTAL_VOTING, G.BALLOT_SECRECY)
    with pytest.raises(UnknownReferenceError):
        profile(small, S.PAPER_VOTING, G.TALLY_INTEGRITY)
    with pytest.raises(UnknownReferenceError):
        dominance(small, S.PAPER_VOTING, "nonsense")
    with pytest.raises(UnknownReferenceError):
        pareto_frontier(small, G.TALLY_INTEGRITY)


def test_profile_examples():
    p = profile(CORPUS, S.CRYPTO_POSTAL_VOTING, G.COERCION_RESISTANCE)
    assert p.total == 8
    assert p.by_impact == {Impact.SINGLE: 1, Impact.SUBSET: 4, Impact.ALL: 3}
    p = profile(CORPUS, S.IVOTING_INDIVIDUAL, G.COERCION_RESISTANCE)
    assert (p.total, p.by_impact[Impact.ALL]) == (6, 4)
    p = profile(CORPUS, S.MACHINE_VOTING_NO_TRAIL, G.TALLY_INTEGRITY)
    assert (p.total, p.by_impact[Impact.ALL], p.by_impact[Impact.SUBSET]) == (5, 2, 3)


def test_profile_overall_sums_goals():
    for s in CORPUS.sorted_systems():
        assert profile(CORPUS, s, None).total == sum(profile(CORPUS, s, g).total for g in GOALS)


def test_dominance_examples():
    r = dominance(CORPUS, S.PAPER_VOTING, S.CRYPTO_PAPER_VOTING, G.DELIVERY_VERIFICATION)
    assert r.relation is Relation.STRICTLY_DOMINATES
    assert dominance(CORPUS, S.IVOTING_INDIVIDUAL, S.IVOTING_UNIVERSAL, G.BALLOT_SECRECY).relation is Relation.EQUAL
    r = dominance(CORPUS, S.PAPER_VOTING, S.IVOTING_INDIVIDUAL, G.BALLOT_SECRECY)
    assert r.relation is Relation.INCOMPARABLE
    assert {
        Witness(G.BALLOT_SECRECY, P.POLLING_STATION_OFFICIAL, WitnessKind.MISSING_IN_B),
        Witness(G.BALLOT_SECRECY, P.SOFTWARE_VENDOR, WitnessKind.MISSING_IN_A),
    } <= set(r.witness)
    # every reported witness is a real obstruction in one direction or the other
    for w in r.witness:
        in_a = (S.PAPER_VOTING, w.goal, w.party) in CORPUS.cells
        in_b = (S.IVOTING_INDIVIDUAL, w.goal, w.party) in CORPUS.cells
        assert {WitnessKind.MISSING_IN_B: in_a and not in_b, WitnessKind.MISSING_IN_A: in_b and not in_a}.get(w.kind, True)


def test_dominance_witness_on_severity():
    cells = [
        TrustAssumption(S.PAPER_VOTING, G.TALLY_INTEGRITY, P.VOTER, SeverityKey(Impact.ALL, TrustMode.CONDITIONAL)),
        TrustAssumption(S.POSTAL_VOTING, G.TALLY_INTEGRITY, P.VOTER, SeverityKey(Impact.SUBSET)),
    ]
    m = TrustModel.build([], [], cells)
    r = dominance(m, S.PAPER_VOTING, S.POSTAL_VOTING)
    assert r.relation is Relation.INCOMPARABLE
    assert [w.kind for w in r.witness] == [WitnessKind.INCOMPARABLE_SEVERITY]
    cells[0] = TrustAssumption(S.PAPER_VOTING, G.TALLY_INTEGRITY, P.VOTER, SeverityKey(Impact.SINGLE))
    r = dominance(TrustModel.build([], [], cells), S.PAPER_VOTING, S.POSTAL_VOTING)
    assert r.relation is Relation.STRICTLY_DOMINATES
    assert [w.kind for w in r.witness] == [WitnessKind.MORE_SEVERE_IN_B]


def test_dominance_laws_exhaustive_on_corpus():
    systems = CORPUS.sorted_systems()
    for g in GOALS:
        leq = {(a, b): below(CORPUS, a, b, g) for a in systems for b in systems}
        for (a, b), v in leq.items():
            assert v == naive_leq(CORPUS, a, b, g)
        for a in systems:
            assert leq[a, a]
        for a, b, c in itertools.product(systems, repeat=3):
            if leq[a, b] and leq[b, c]:
                assert leq[a, c]
        for a, b in itertools.product(systems, repeat=2):
            rel = dominance(CORPUS, a, b, g).relation
            same_cells = ({(x.party, x.severity) for x in CORPUS.row(a, g)}
                          == {(x.party, x.severity) for x in CORPUS.row(b, g)})
            assert (rel is Relation.EQUAL) == (leq[a, b] and leq[b, a]) == same_cells
            expected = {(True, True): Relation.EQUAL, (True, False): Relation.STRICTLY_DOMINATES,
                        (False, True): Relation.STRICTLY_DOMINATED_BY, (False, False): Relation.INCOMPARABLE}
            assert rel is expected[leq[a, b], leq[b, a]]


def test_frontier_matches_oracle_on_corpus():
    for g in [*GOALS, None]:
        assert pareto_frontier(CORPUS, g) == naive_frontier(CORPUS, g)


def test_frontier_examples():
    assert (S.PAPER_VOTING,) in pareto_frontier(CORPUS, G.DELIVERY_VERIFICATION)
    assert any(S.PAPER_VOTING in c for c in pareto_frontier(CORPUS, G.BALLOT_SECRECY))
    single = TrustModel.build([S.POSTAL_VOTING], [G.BALLOT_SECRECY], [])
    assert pareto_frontier(single, G.BALLOT_SECRECY) == [(S.POSTAL_VOTING,)]


def test_equivalence_classes_partition():
    for g in GOALS:
        classes = equivalence_classes(CORPUS, g)
        flat = [s for c in classes for s in c]
        assert sorted(flat) == sorted(CORPUS.systems) and len(flat) == len(set(flat))


@settings(max_examples=200, deadline=None)
@given(comparable_models())
def test_frontier_matches_oracle_random(m):
    for g in m.sorted_goals():
        assert pareto_frontier(m, g) == naive_frontier(m, g)


# -- scoring ---------------------------------------------------------------

def test_score_examples():
    empty = TrustModel.build([S.PAPER_VOTING], [G.DELIVERY_VERIFICATION], [])
    assert score(empty, S.PAPER_VOTING, G.DELIVERY_VERIFICATION) == 0
    assert score(CORPUS, S.IVOTING_INDIVIDUAL, G.BALLOT_BOX_INTEGRITY) == 64
    doubled = WeightConfig(2, 8, 32, Fraction(1, 2))
    for s in CORPUS.sorted_systems():
        assert score(CORPUS, s, None, doubled) == 2 * score(CORPUS, s, None)


def test_score_is_exact_rational():
    w = WeightConfig(Fraction(1, 3), Fraction(1, 3), Fraction(2, 3), Fraction(1, 7))
    total = score(CORPUS, S.CRYPTO_POSTAL_VOTING, None, w)
    assert isinstance(total, Fraction)
    naive = sum((w.impact_weight(a.impact) * (w.conditional_factor if a.mode is TrustMode.CONDITIONAL else 1)
                 for a in CORPUS.assumptions if a.system is S.CRYPTO_POSTAL_VOTING), Fraction(0))
    assert total == naive


@pytest.mark.parametrize("args", [(2, 1, 4, Fraction(1, 2)), (-1, 1, 1, 1), (1, 2, 3, 0), (1, 2, 3, 2)])
def test_inadmissible_weights(args):
    with pytest.raises(ValueError):
        WeightConfig(*args)


def test_weight_parse():
    assert WeightConfig.parse("1,4,16,1/2") == DEFAULT_WEIGHTS
    assert str(DEFAULT_WEIGHTS) == "1,4,16,1/2"
    with pytest.raises(ValueError):
        WeightConfig.parse("1,2,3")
    with pytest.raises(ValueError):
        WeightConfig.parse("1,2,x,1")


def test_rank_examples():
    r = rank(CORPUS, G.DELIVERY_VERIFICATION)
    assert (r[0].system, r[0].score, r[0].position) == (S.PAPER_VOTING, 0, 1)
    r = rank(CORPUS, G.EQUAL_AND_UNIVERSAL_SUFFRAGE)
    assert {e.system for e in r[-2:]} == {S.IVOTING_INDIVIDUAL, S.IVOTING_UNIVERSAL}
    assert r[-1].tied and r[-1].position == r[-2].position == 7
    flat = TrustModel.build([S.PAPER_VOTING, S.POSTAL_VOTING, S.IVOTING_UNIVERSAL], [G.BALLOT_SECRECY], [])
    groups = tie_groups(rank(flat, G.BALLOT_SECRECY))
    assert len(groups) == 1 and [e.system for e in groups[0]] == flat.sorted_systems()


def test_rank_is_sorted_with_competition_positions():
    for g in [*GOALS, None]:
        entries = rank(CORPUS, g)
        assert [e.score for e in entries] == sorted(e.score for e in entries)
        for i, e in enumerate(entries):
            assert e.position == 1 + sum(x.score < e.score for x in entries)


@settings(max_examples=300, deadline=None)
@given(comparable_models(), admissible_weights())
def test_score_monotone_under_dominance(m, w):
    systems = m.sorted_systems()
    for g in [*m.sorted_goals(), None]:
        for a, b in itertools.product(systems, repeat=2):
            if below(m, a, b, g):
                assert score(m, a, g, w) <= score(m, b, g, w)


@settings(max_examples=200, deadline=None)
@given(comparable_models(), admissible_weights(strict=True))
def test_strict_dominance_strictly_lowers_score_with_strict_weights(m, w):
    for g in m.sorted_goals():
        for a, b in itertools.product(m.sorted_systems(), repeat=2):
            if dominance(m, a, b, g).relation is Relation.STRICTLY_DOMINATES:
                assert score(m, a, g, w) < score(m, b, g, w)


@settings(max_examples=200, deadline=None)
@given(trust_models(), admissible_weights(), st.data())
def test_removal_never_increases_score(m, w, data):
    if not m.assumptions:
        return
    cell = data.draw(st.sampled_from(m.sorted_assumptions()))
    after = m.without([cell.key])
    for g in [cell.goal, None]:
        assert score(after, cell.system, g, w) <= score(m, cell.system, g, w)


# -- matrix ----------------------------------------------------------------

def test_goal_matrix_examples():
    mat = goal_matrix(CORPUS, G.BALLOT_SECRECY)
    assert mat.filled(S.PAPER_VOTING) == 4 and len(mat.parties) == 12
    mat = goal_matrix(CORPUS, G.TALLY_INTEGRITY)
    row = mat.rows[mat.systems.index(S.CRYPTO_POSTAL_VOTING)]
    assert [p for p, c in zip(mat.parties, row) if c is not None] == [P.ELECTION_OBSERVER]


def test_goal_matrix_counts_match_profiles():
    for g in GOALS:
        mat = goal_matrix(CORPUS, g)
        for s in mat.systems:
            assert mat.filled(s) == profile(CORPUS, s, g).total


def test_matrix_cell_text():
    mat = goal_matrix(CORPUS, G.BALLOT_SECRECY)
    row = dict(zip(mat.parties, mat.rows[mat.systems.index(S.CRYPTO_POSTAL_VOTING)]))
    assert str(row[P.SOFTWARE_VENDOR]) == "all/conditional"
    assert str(row[P.ELECTION_ORGANISER]).startswith("all/full[")
