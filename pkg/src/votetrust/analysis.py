"""Counting, dominance and weighted scoring over trust models.

``goal=None`` means the overall scope (all goals of the model) wherever a
goal argument is accepted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .diagnostics import UnknownReferenceError
from .model import (
    GOALS,
    IMPACTS,
    MODES,
    PARTIES,
    GoalId,
    Impact,
    PartyId,
    SystemId,
    TrustAssumption,
    TrustMode,
    TrustModel,
    severity_leq,
)


def _check_system(model: TrustModel, system: SystemId) -> SystemId:
    try:
        system = SystemId(system)
    except ValueError:
        raise UnknownReferenceError(f"unknown system '{system}'") from None
    if system not in model.systems:
        raise UnknownReferenceError(f"system '{system.value}' is not in the model")
    return system


def _check_goal(model: TrustModel, goal: GoalId) -> GoalId:
    try:
        goal = GoalId(goal)
    except ValueError:
        raise UnknownReferenceError(f"unknown goal '{goal}'") from None
    if goal not in model.goals:
        raise UnknownReferenceError(f"goal '{goal.value}' is not in the model")
    return goal


def _scope_goals(model: TrustModel, goal: GoalId | None) -> list[GoalId]:
    return model.sorted_goals() if goal is None else [_check_goal(model, goal)]


def assumption_set(model: TrustModel, system: SystemId, goal: GoalId) -> frozenset[TrustAssumption]:
    return model.row(_check_system(model, system), _check_goal(model, goal))


@dataclass(frozen=True)
class CriticalityProfile:
    total: int
    by_impact: dict[Impact, int]
    by_mode: dict[TrustMode, int]

    @classmethod
    def of(cls, assumptions: Iterable[TrustAssumption]) -> CriticalityProfile:
        assumptions = list(assumptions)
        return cls(
            total=len(assumptions),
            by_impact={i: sum(a.impact is i for a in assumptions) for i in IMPACTS},
            by_mode={m: sum(a.mode is m for a in assumptions) for m in MODES},
        )

    def __str__(self) -> str:
        return (f"total {self.total}, all {self.by_impact[Impact.ALL]}, "
                f"subset {self.by_impact[Impact.SUBSET]}, single {self.by_impact[Impact.SINGLE]}")


def profile(model: TrustModel, system: SystemId, goal: GoalId | None) -> CriticalityProfile:
    system = _check_system(model, system)
    cells = [a for g in _scope_goals(model, goal) for a in model.row(system, g)]
    return CriticalityProfile.of(cells)


# -- dominance -------------------------------------------------------------

class Relation(str, Enum):
    EQUAL = "equal"
    STRICTLY_DOMINATES = "strictly_dominates"
    STRICTLY_DOMINATED_BY = "strictly_dominated_by"
    INCOMPARABLE = "incomparable"


class WitnessKind(str, Enum):
    MISSING_IN_A = "missing_in_a"  # trusted by b only
    MISSING_IN_B = "missing_in_b"  # trusted by a only
    MORE_SEVERE_IN_A = "more_severe_in_a"
    MORE_SEVERE_IN_B = "more_severe_in_b"
    INCOMPARABLE_SEVERITY = "incomparable_severity"


@dataclass(frozen=True)
class Witness:
    goal: GoalId
    party: PartyId
    kind: WitnessKind


@dataclass(frozen=True)
class DominanceResult:
    relation: Relation
    witness: tuple[Witness, ...] = ()


def _obstructions(model: TrustModel, a: SystemId, b: SystemId, goal: GoalId) -> tuple[list[Witness], list[Witness]]:
    """Reasons a is not below b, and reasons b is not below a, for one goal."""
    cells_a = {x.party: x.severity for x in model.row(a, goal)}
    cells_b = {x.party: x.severity for x in model.row(b, goal)}
    not_ab: list[Witness] = []
    not_ba: list[Witness] = []
    for party in PARTIES:
        sa, sb = cells_a.get(party), cells_b.get(party)
        if sa is None and sb is None:
            continue
        if sb is None:
            not_ab.append(Witness(goal, party, WitnessKind.MISSING_IN_B))
        elif sa is None:
            not_ba.append(Witness(goal, party, WitnessKind.MISSING_IN_A))
        else:
            ab, ba = severity_leq(sa, sb), severity_leq(sb, sa)
            if not ab and not ba:
                w = Witness(goal, party, WitnessKind.INCOMPARABLE_SEVERITY)
                not_ab.append(w)
                not_ba.append(w)
            elif not ab:
                not_ab.append(Witness(goal, party, WitnessKind.MORE_SEVERE_IN_A))
            elif not ba:
                not_ba.append(Witness(goal, party, WitnessKind.MORE_SEVERE_IN_B))
    return not_ab, not_ba


def below(model: TrustModel, a: SystemId, b: SystemId, goal: GoalId | None) -> bool:
    """True when ``a`` needs no more trust than ``b`` on the scope."""
    a, b = _check_system(model, a), _check_system(model, b)
    return all(not _obstructions(model, a, b, g)[0] for g in _scope_goals(model, goal))


def dominance(model: TrustModel, a: SystemId, b: SystemId, goal: GoalId | None = None) -> DominanceResult:
    """Compare two systems by trusted-party inclusion and per-party severity.

    ``a`` is below ``b`` on a goal when every party ``a`` trusts is also
    trusted by ``b`` at an equal or higher severity. Overall scope requires
    this for every goal in the model.
    """
    a, b = _check_system(model, a), _check_system(model, b)
    not_ab: list[Witness] = []
    not_ba: list[Witness] = []
    for g in _scope_goals(model, goal):
        x, y = _obstructions(model, a, b, g)
        not_ab += x
        not_ba += y
    if not not_ab and not not_ba:
        return DominanceResult(Relation.EQUAL)
    if not not_ab:
        return DominanceResult(Relation.STRICTLY_DOMINATES, tuple(not_ba))
    if not not_ba:
        return DominanceResult(Relation.STRICTLY_DOMINATED_BY, tuple(not_ab))
    both = sorted(set(not_ab) | set(not_ba), key=lambda w: (
        GOALS.index(w.goal), PARTIES.index(w.party), list(WitnessKind).index(w.kind)))
    return DominanceResult(Relation.INCOMPARABLE, tuple(both))


def equivalence_classes(model: TrustModel, goal: GoalId | None) -> list[tuple[SystemId, ...]]:
    classes: list[list[SystemId]] = []
    for system in model.sorted_systems():
        for cls in classes:
            if dominance(model, cls[0], system, goal).relation is Relation.EQUAL:
                cls.append(system)
                break
        else:
            classes.append([system])
    return [tuple(c) for c in classes]


def pareto_frontier(model: TrustModel, goal: GoalId | None) -> list[tuple[SystemId, ...]]:
    """Equivalence classes that no other class strictly dominates, in canonical order."""
    if goal is not None:
        _check_goal(model, goal)
    classes = equivalence_classes(model, goal)
    return [
        cls for cls in classes
        if not any(
            other is not cls and dominance(model, other[0], cls[0], goal).relation is Relation.STRICTLY_DOMINATES
            for other in classes
        )
    ]


# -- scoring ---------------------------------------------------------------

def _rational(value) -> Fraction:
    if isinstance(value, float):
        return Fraction(value).limit_denominator()
    return Fraction(value)


@dataclass(frozen=True)
class WeightConfig:
    w_single: Fraction = Fraction(1)
    w_subset: Fraction = Fraction(4)
    w_all: Fraction = Fraction(16)
    conditional_factor: Fraction = Fraction(1, 2)

    def __post_init__(self):
        for name in ("w_single", "w_subset", "w_all", "conditional_factor"):
            object.__setattr__(self, name, _rational(getattr(self, name)))
        if min(self.w_single, self.w_subset, self.w_all) < 0:
            raise ValueError("impact weights must be nonnegative")
        if not self.w_single <= self.w_subset <= self.w_all:
            raise ValueError("impact weights must satisfy w_single <= w_subset <= w_all")
        if not 0 < self.conditional_factor <= 1:
            raise ValueError("conditional_factor must lie in (0, 1]")

    @classmethod
    def parse(cls, text: str) -> WeightConfig:
        """Read ``"single,subset,all,conditional_factor"``, e.g. ``"1,4,16,1/2"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 4 comma-separated rationals, got {len(parts)}")
        try:
            values = [Fraction(p) for p in parts]
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"invalid rational in weights {text!r}") from None
        return cls(*values)

    def impact_weight(self, impact: Impact) -> Fraction:
        return {Impact.SINGLE: self.w_single, Impact.SUBSET: self.w_subset, Impact.ALL: self.w_all}[impact]

    def weight(self, a: TrustAssumption) -> Fraction:
        w = self.impact_weight(a.impact)
        return w * self.conditional_factor if a.mode is TrustMode.CONDITIONAL else w

    def __str__(self) -> str:
        return ",".join(str(x) for x in (self.w_single, self.w_subset, self.w_all, self.conditional_factor))


DEFAULT_WEIGHTS = WeightConfig()


def score(model: TrustModel, system: SystemId, goal: GoalId | None = None,
          weights: WeightConfig = DEFAULT_WEIGHTS) -> Fraction:
    system = _check_system(model, system)
    return sum(
        (weights.weight(a) for g in _scope_goals(model, goal) for a in model.row(system, g)),
        Fraction(0),
    )


@dataclass(frozen=True)
class RankEntry:
    position: int  # competition ranking: tied systems share the lowest position
    system: SystemId
    score: Fraction
    tied: bool = field(default=False)


def rank(model: TrustModel, goal: GoalId | None = None,
         weights: WeightConfig = DEFAULT_WEIGHTS) -> list[RankEntry]:
    """Systems by ascending score; ties keep canonical order and share a position."""
    scored = [(score(model, s, goal, weights), s) for s in model.sorted_systems()]
    order = sorted(range(len(scored)), key=lambda i: (scored[i][0], i))
    counts: dict[Fraction, int] = {}
    for value, _ in scored:
        counts[value] = counts.get(value, 0) + 1
    out: list[RankEntry] = []
    for idx, i in enumerate(order):
        value, system = scored[i]
        position = out[-1].position if out and out[-1].score == value else idx + 1
        out.append(RankEntry(position, system, value, counts[value] > 1))
    return out


def tie_groups(entries: list[RankEntry]) -> list[list[RankEntry]]:
    groups: list[list[RankEntry]] = []
    for e in entries:
        if groups and groups[-1][0].position == e.position:
            groups[-1].append(e)
        else:
            groups.append([e])
    return groups


# -- tabular projection ----------------------------------------------------

@dataclass(frozen=True)
class MatrixCell:
    impact: Impact
    mode: TrustMode
    notes: tuple[int, ...] = ()

    def __str__(self) -> str:
        notes = f"[{','.join(map(str, self.notes))}]" if self.notes else ""
        return f"{self.impact.value}/{self.mode.value}{notes}"


@dataclass(frozen=True)
class GoalMatrix:
    goal: GoalId
    systems: tuple[SystemId, ...]
    parties: tuple[PartyId, ...]
    rows: tuple[tuple[MatrixCell | None, ...], ...]

    def filled(self, system: SystemId) -> int:
        return sum(c is not None for c in self.rows[self.systems.index(system)])


def goal_matrix(model: TrustModel, goal: GoalId) -> GoalMatrix:
    goal = _check_goal(model, goal)
    systems = tuple(model.sorted_systems())
    rows = []
    for system in systems:
        cells = {a.party: a for a in model.row(system, goal)}
        rows.append(tuple(
            MatrixCell(cells[p].impact, cells[p].mode, tuple(sorted(cells[p].notes))) if p in cells else None
            for p in PARTIES
        ))
    return GoalMatrix(goal, systems, PARTIES, tuple(rows))
