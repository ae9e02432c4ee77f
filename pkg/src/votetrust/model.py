"""Domain vocabulary for trust-assumption models of voting systems.

Parties, goals, systems, impact levels and trust modes are closed
enumerations. A :class:`TrustModel` is an immutable bag of
:class:`TrustAssumption` cells plus a catalog of :class:`ConditionNote`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping

from .diagnostics import SourceSpan


class PartyId(str, Enum):
    VOTER = "voter"
    VOTERS_COMPUTER = "voters_computer"
    REGISTRAR = "registrar"
    ELECTION_ORGANISER = "election_organiser"
    INFRASTRUCTURE_PROVIDER = "infrastructure_provider"
    POLLING_STATION_OFFICIAL = "polling_station_official"
    PRINTING_HOUSE = "printing_house"
    ELECTION_OBSERVER = "election_observer"
    IDENTITY_PROVIDER = "identity_provider"
    POSTAL_SERVICE = "postal_service"
    HARDWARE_VENDOR = "hardware_vendor"
    SOFTWARE_VENDOR = "software_vendor"

    def __str__(self) -> str:
        return self.value

    @property
    def display_name(self) -> str:
        return _PARTY_NAMES[self]


_PARTY_NAMES = {
    PartyId.VOTER: "Voter",
    PartyId.VOTERS_COMPUTER: "Voter's computer",
    PartyId.REGISTRAR: "Registrar",
    PartyId.ELECTION_ORGANISER: "Election organiser or election services",
    PartyId.INFRASTRUCTURE_PROVIDER: "Infrastructure provider/maintenance",
    PartyId.POLLING_STATION_OFFICIAL: "Polling station official",
    PartyId.PRINTING_HOUSE: "Printing house",
    PartyId.ELECTION_OBSERVER: "Election observer/auditor",
    PartyId.IDENTITY_PROVIDER: "Identity provider",
    PartyId.POSTAL_SERVICE: "Postal service or third party delivery",
    PartyId.HARDWARE_VENDOR: "Hardware vendor",
    PartyId.SOFTWARE_VENDOR: "Software vendor",
}


class GoalId(str, Enum):
    BALLOT_SECRECY = "ballot_secrecy"
    COERCION_RESISTANCE = "coercion_resistance"
    EQUAL_AND_UNIVERSAL_SUFFRAGE = "equal_and_universal_suffrage"
    ELIGIBILITY_VERIFICATION = "eligibility_verification"
    DELIVERY_VERIFICATION = "delivery_verification"
    BALLOT_BOX_INTEGRITY = "ballot_box_integrity"
    TALLY_INTEGRITY = "tally_integrity"

    def __str__(self) -> str:
        return self.value

    @property
    def display_name(self) -> str:
        return _GOAL_INFO[self][0]

    @property
    def definition_refs(self) -> tuple[str, ...]:
        """Names of the individual requirements this goal block covers."""
        return _GOAL_INFO[self][1]


_GOAL_INFO: dict[GoalId, tuple[str, tuple[str, ...]]] = {
    GoalId.BALLOT_SECRECY: ("Ballot secrecy", ("Ballot secrecy",)),
    GoalId.COERCION_RESISTANCE: ("Coercion-resistance", ("Coercion resistance",)),
    GoalId.EQUAL_AND_UNIVERSAL_SUFFRAGE: (
        "Equal & universal suffrage",
        ("Equal suffrage", "Universal suffrage"),
    ),
    GoalId.ELIGIBILITY_VERIFICATION: (
        "Verification of eligibility",
        ("Verification of eligibility",),
    ),
    GoalId.DELIVERY_VERIFICATION: ("Verification of delivery", ("Verification of delivery",)),
    GoalId.BALLOT_BOX_INTEGRITY: (
        "Verification of ballot box integrity",
        ("Verification of ballot box integrity",),
    ),
    GoalId.TALLY_INTEGRITY: (
        "Verification of tally integrity",
        ("Verification of tally integrity",),
    ),
}


class SystemClass(str, Enum):
    POLLING_STATION_PAPER = "polling_station_paper"
    POSTAL = "postal"
    MACHINE = "machine"
    INTERNET = "internet"


class SystemId(str, Enum):
    PAPER_VOTING = "paper_voting"
    CRYPTO_PAPER_VOTING = "crypto_paper_voting"
    POSTAL_VOTING = "postal_voting"
    CRYPTO_POSTAL_VOTING = "crypto_postal_voting"
    MACHINE_VOTING_PAPER_TRAIL = "machine_voting_paper_trail"
    MACHINE_VOTING_NO_TRAIL = "machine_voting_no_trail"
    IVOTING_INDIVIDUAL = "ivoting_individual"
    IVOTING_UNIVERSAL = "ivoting_universal"

    def __str__(self) -> str:
        return self.value

    @property
    def display_name(self) -> str:
        return _SYSTEM_INFO[self][0]

    @property
    def system_class(self) -> SystemClass:
        return _SYSTEM_INFO[self][1]


_SYSTEM_INFO: dict[SystemId, tuple[str, SystemClass]] = {
    SystemId.PAPER_VOTING: ("Paper voting", SystemClass.POLLING_STATION_PAPER),
    SystemId.CRYPTO_PAPER_VOTING: ("Cryptographic paper voting", SystemClass.POLLING_STATION_PAPER),
    SystemId.POSTAL_VOTING: ("Postal voting", SystemClass.POSTAL),
    SystemId.CRYPTO_POSTAL_VOTING: ("Cryptographic postal voting", SystemClass.POSTAL),
    SystemId.MACHINE_VOTING_PAPER_TRAIL: ("Machine voting with paper trail", SystemClass.MACHINE),
    SystemId.MACHINE_VOTING_NO_TRAIL: ("Machine voting, no paper trail", SystemClass.MACHINE),
    SystemId.IVOTING_INDIVIDUAL: ("I-voting (individual verifiability)", SystemClass.INTERNET),
    SystemId.IVOTING_UNIVERSAL: ("I-voting (universal verifiability)", SystemClass.INTERNET),
}

SYSTEM_BY_DISPLAY_NAME: Mapping[str, SystemId] = {
    info[0]: system for system, info in _SYSTEM_INFO.items()
}


class Impact(str, Enum):
    SINGLE = "single"
    SUBSET = "subset"
    ALL = "all"

    def __str__(self) -> str:
        return self.value

    @property
    def rank(self) -> int:
        return _IMPACT_RANK[self]


_IMPACT_RANK = {Impact.SINGLE: 1, Impact.SUBSET: 2, Impact.ALL: 3}


class TrustMode(str, Enum):
    FULL = "full"
    CONDITIONAL = "conditional"

    def __str__(self) -> str:
        return self.value

    @property
    def rank(self) -> int:
        return 2 if self is TrustMode.FULL else 1


class Condition(str, Enum):
    """Scenario conditions that can void conditionally-trusted cells."""

    RELIABLE_IDS_AVAILABLE = "reliable_ids_available"
    CODE_VOTING_IN_USE = "code_voting_in_use"
    PRINT_ON_DEMAND = "print_on_demand"

    def __str__(self) -> str:
        return self.value


# Canonical display orders.
PARTIES: tuple[PartyId, ...] = tuple(PartyId)
GOALS: tuple[GoalId, ...] = tuple(GoalId)
SYSTEMS: tuple[SystemId, ...] = tuple(SystemId)
IMPACTS: tuple[Impact, ...] = tuple(Impact)
MODES: tuple[TrustMode, ...] = (TrustMode.CONDITIONAL, TrustMode.FULL)


@dataclass(frozen=True)
class SeverityKey:
    """An (impact, mode) pair, partially ordered componentwise."""

    impact: Impact
    mode: TrustMode = TrustMode.FULL

    @property
    def ranks(self) -> tuple[int, int]:
        return (self.impact.rank, self.mode.rank)

    def __str__(self) -> str:
        return f"{self.impact.value}/{self.mode.value}"


def severity_key(impact: Impact, mode: TrustMode) -> SeverityKey:
    return SeverityKey(Impact(impact), TrustMode(mode))


def severity_leq(a: SeverityKey, b: SeverityKey) -> bool:
    return a.impact.rank <= b.impact.rank and a.mode.rank <= b.mode.rank


ALL_SEVERITIES: tuple[SeverityKey, ...] = tuple(
    SeverityKey(impact, mode) for impact in IMPACTS for mode in MODES
)


def canonical_systems() -> list[SystemId]:
    return list(SYSTEMS)


def canonical_sorted(items: Iterable, order: tuple) -> list:
    index = {item: i for i, item in enumerate(order)}
    return sorted(items, key=index.__getitem__)


@dataclass(frozen=True)
class ConditionNote:
    id: int
    text: str
    toggle: Condition | None = None
    span: SourceSpan | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TrustAssumption:
    system: SystemId
    goal: GoalId
    party: PartyId
    severity: SeverityKey
    notes: frozenset[int] = frozenset()
    rationale: str | None = None
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    @property
    def key(self) -> tuple[SystemId, GoalId, PartyId]:
        return (self.system, self.goal, self.party)

    @property
    def impact(self) -> Impact:
        return self.severity.impact

    @property
    def mode(self) -> TrustMode:
        return self.severity.mode


def _sort_key(a: TrustAssumption) -> tuple:
    return (
        SYSTEMS.index(a.system),
        GOALS.index(a.goal),
        PARTIES.index(a.party),
        a.severity.ranks,
        sorted(a.notes),
        a.rationale or "",
    )


@dataclass(frozen=True)
class TrustModel:
    """An immutable collection of trust assumptions.

    Equality is structural and ignores ``provenance`` and source spans.
    Construction does not validate; use :func:`votetrust.validate_model` or
    go through the parser, which only returns validated models.
    """

    systems: frozenset[SystemId] = frozenset()
    goals: frozenset[GoalId] = frozenset()
    assumptions: frozenset[TrustAssumption] = frozenset()
    notes: frozenset[ConditionNote] = frozenset()
    provenance: str = field(default="", compare=False)

    @classmethod
    def build(
        cls,
        systems: Iterable[SystemId] = (),
        goals: Iterable[GoalId] = (),
        assumptions: Iterable[TrustAssumption] = (),
        notes: Iterable[ConditionNote] = (),
        provenance: str = "",
    ) -> TrustModel:
        """Construct a model, adding systems/goals referenced by assumptions."""
        assumptions = frozenset(assumptions)
        return cls(
            systems=frozenset(systems) | {a.system for a in assumptions},
            goals=frozenset(goals) | {a.goal for a in assumptions},
            assumptions=assumptions,
            notes=frozenset(notes),
            provenance=provenance,
        )

    @cached_property
    def note_catalog(self) -> dict[int, ConditionNote]:
        return {n.id: n for n in sorted(self.notes, key=lambda n: (n.id, n.text))}

    @cached_property
    def cells(self) -> dict[tuple[SystemId, GoalId, PartyId], TrustAssumption]:
        """Assumptions keyed by (system, goal, party); last one wins on duplicates."""
        return {a.key: a for a in self.sorted_assumptions()}

    @cached_property
    def _by_row(self) -> dict[tuple[SystemId, GoalId], frozenset[TrustAssumption]]:
        rows: dict[tuple[SystemId, GoalId], set[TrustAssumption]] = {}
        for a in self.assumptions:
            rows.setdefault((a.system, a.goal), set()).add(a)
        return {k: frozenset(v) for k, v in rows.items()}

    def row(self, system: SystemId, goal: GoalId) -> frozenset[TrustAssumption]:
        return self._by_row.get((system, goal), frozenset())

    def sorted_systems(self) -> list[SystemId]:
        return canonical_sorted(self.systems, SYSTEMS)

    def sorted_goals(self) -> list[GoalId]:
        return canonical_sorted(self.goals, GOALS)

    def sorted_assumptions(self) -> list[TrustAssumption]:
        return sorted(self.assumptions, key=_sort_key)

    def sorted_notes(self) -> list[ConditionNote]:
        return list(self.note_catalog.values())

    def without(self, keys: Iterable[tuple[SystemId, GoalId, PartyId]]) -> TrustModel:
        drop = set(keys)
        return TrustModel(
            systems=self.systems,
            goals=self.goals,
            assumptions=frozenset(a for a in self.assumptions if a.key not in drop),
            notes=self.notes,
            provenance=self.provenance,
        )
