"""What-if analysis: corrupted coalitions, condition toggles, cell removal."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .analysis import (
    DEFAULT_WEIGHTS,
    CriticalityProfile,
    WeightConfig,
    _check_goal,
    _check_system,
    profile,
    rank,
)
from .diagnostics import ModelError, ParseDiagnostic, error, has_errors
from .dsl import _lookup, tokenize
from .model import (
    IMPACTS,
    PARTIES,
    Condition,
    GoalId,
    Impact,
    PartyId,
    SystemId,
    TrustAssumption,
    TrustModel,
)

Coalition = frozenset[PartyId]

_DEFAULT_CONDITIONS = {
    Condition.RELIABLE_IDS_AVAILABLE: True,
    Condition.CODE_VOTING_IN_USE: False,
    Condition.PRINT_ON_DEMAND: False,
}


@dataclass(frozen=True)
class ScenarioEnv:
    reliable_ids_available: bool = True
    code_voting_in_use: bool = False
    print_on_demand: bool = False

    @classmethod
    def from_mapping(cls, conditions: Mapping[Condition | str, bool]) -> ScenarioEnv:
        values = {c.value: v for c, v in _DEFAULT_CONDITIONS.items()}
        for key, value in conditions.items():
            values[Condition(key).value] = bool(value)
        return cls(**values)

    def holds(self, condition: Condition) -> bool:
        return getattr(self, Condition(condition).value)

    def as_dict(self) -> dict[str, bool]:
        return {c.value: self.holds(c) for c in Condition}


DEFAULT_ENV = ScenarioEnv()


def is_voided(model: TrustModel, assumption: TrustAssumption, env: ScenarioEnv) -> bool:
    """A cell is voided when it carries toggleable notes and every one of them is active."""
    catalog = model.note_catalog
    toggles = [catalog[n].toggle for n in assumption.notes if n in catalog and catalog[n].toggle]
    return bool(toggles) and all(env.holds(t) for t in toggles)


def effective_assumptions(model: TrustModel, system: SystemId, goal: GoalId,
                          env: ScenarioEnv = DEFAULT_ENV) -> frozenset[TrustAssumption]:
    row = model.row(_check_system(model, system), _check_goal(model, goal))
    return frozenset(a for a in row if not is_voided(model, a, env))


@dataclass(frozen=True)
class Breach:
    level: Impact | None
    triggered: tuple[TrustAssumption, ...] = ()


def _max_impact(cells: Iterable[TrustAssumption]) -> Impact | None:
    ranks = [a.impact.rank for a in cells]
    return IMPACTS[max(ranks) - 1] if ranks else None


def breach(model: TrustModel, system: SystemId, goal: GoalId, coalition: Iterable[PartyId],
           env: ScenarioEnv = DEFAULT_ENV) -> Breach:
    coalition = frozenset(PartyId(p) for p in coalition)
    triggered = sorted(
        (a for a in effective_assumptions(model, system, goal, env) if a.party in coalition),
        key=lambda a: PARTIES.index(a.party),
    )
    return Breach(_max_impact(triggered), tuple(triggered))


def _party_levels(model: TrustModel, system: SystemId, goal: GoalId, env: ScenarioEnv) -> list[int]:
    """Highest impact rank each party (by bit index) can trigger alone; 0 when none."""
    levels = [0] * len(PARTIES)
    for a in effective_assumptions(model, system, goal, env):
        i = PARTIES.index(a.party)
        levels[i] = max(levels[i], a.impact.rank)
    return levels


def minimal_coalitions(model: TrustModel, system: SystemId, goal: GoalId, target: Impact,
                       env: ScenarioEnv = DEFAULT_ENV) -> list[Coalition]:
    """All inclusion-minimal party sets whose breach reaches ``target``.

    Every subset of the 12 parties is checked; masks are visited by size so
    any mask containing an earlier hit is skipped as non-minimal. Output is
    ordered by size, then by canonical party order.
    """
    target = Impact(target)
    levels = _party_levels(model, system, goal, env)
    n = len(PARTIES)
    found: list[int] = []
    for mask in _MASKS_BY_SIZE:
        if any((mask & f) == f for f in found):
            continue
        level = max((levels[i] for i in range(n) if mask >> i & 1), default=0)
        if level >= target.rank:
            found.append(mask)
    return [frozenset(PARTIES[i] for i in range(n) if m >> i & 1) for m in found]


_MASKS_BY_SIZE = sorted(
    range(1 << len(PARTIES)),
    key=lambda m: (bin(m).count("1"), [i for i in range(len(PARTIES)) if m >> i & 1]),
)


def coalition_sort_key(c: Iterable[PartyId]) -> tuple:
    idx = sorted(PARTIES.index(p) for p in c)
    return (len(idx), tuple(idx))


def system_resilience(model: TrustModel, system: SystemId,
                      env: ScenarioEnv = DEFAULT_ENV) -> dict[GoalId, dict[Impact, int | None]]:
    """Smallest breaking coalition size per goal and impact level (None when unbreakable)."""
    system = _check_system(model, system)
    out: dict[GoalId, dict[Impact, int | None]] = {}
    for goal in model.sorted_goals():
        out[goal] = {}
        for level in IMPACTS:
            found = minimal_coalitions(model, system, goal, level, env)
            out[goal][level] = min((len(c) for c in found), default=None)
    return out


@dataclass(frozen=True)
class BreachEntry:
    system: SystemId
    goal: GoalId
    level: Impact | None
    triggered: tuple[TrustAssumption, ...]


def breach_report(model: TrustModel, coalition: Iterable[PartyId], env: ScenarioEnv = DEFAULT_ENV,
                  systems: Iterable[SystemId] | None = None) -> list[BreachEntry]:
    coalition = frozenset(coalition)
    chosen = model.sorted_systems() if systems is None else [_check_system(model, s) for s in systems]
    out = []
    for system in chosen:
        for goal in model.sorted_goals():
            b = breach(model, system, goal, coalition, env)
            out.append(BreachEntry(system, goal, b.level, b.triggered))
    return out


# -- scenario files ---------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    coalition: Coalition = frozenset()
    env: ScenarioEnv = DEFAULT_ENV


def parse_scenario_with_diagnostics(text: str, file_name: str = "<input>") -> tuple[Scenario | None, list[ParseDiagnostic]]:
    """Read ``corrupt PARTY;`` and ``set CONDITION = true|false;`` lines."""
    tokens, diags = tokenize(text, file_name)
    parties: set[PartyId] = set()
    conditions: dict[Condition, bool] = {}
    i = 0

    def tok(k: int):
        return tokens[min(k, len(tokens) - 1)]

    while tok(i).kind != "EOF":
        head = tok(i)
        if head.kind == "IDENT" and head.value == "corrupt":
            name, semi = tok(i + 1), tok(i + 2)
            if name.kind != "IDENT":
                diags.append(error(f"expected party name, found {name.describe()}", name.span))
            else:
                party = _lookup(PartyId, name, "party", diags)
                if party is not None:
                    parties.add(party)
                if not (semi.kind == "PUNCT" and semi.value == ";"):
                    diags.append(error(f"expected ';', found {semi.describe()}", semi.span))
            i += 3
        elif head.kind == "IDENT" and head.value == "set":
            name, eq, val, semi = tok(i + 1), tok(i + 2), tok(i + 3), tok(i + 4)
            cond = _lookup(Condition, name, "condition", diags) if name.kind == "IDENT" else None
            if name.kind != "IDENT":
                diags.append(error(f"expected condition name, found {name.describe()}", name.span))
            elif not (eq.kind == "PUNCT" and eq.value == "="):
                diags.append(error(f"expected '=', found {eq.describe()}", eq.span))
            elif val.kind != "IDENT" or val.value not in ("true", "false"):
                diags.append(error(f"expected true or false, found {val.describe()}", val.span))
            elif not (semi.kind == "PUNCT" and semi.value == ";"):
                diags.append(error(f"expected ';', found {semi.describe()}", semi.span))
            elif cond is not None:
                if cond in conditions and conditions[cond] != (val.value == "true"):
                    diags.append(error(f"condition '{cond.value}' set twice with different values", name.span))
                conditions[cond] = val.value == "true"
            i += 5
        else:
            diags.append(error(f"expected 'corrupt' or 'set', found {head.describe()}", head.span))
            i += 1
            while tok(i).kind != "EOF" and not (tok(i - 1).kind == "PUNCT" and tok(i - 1).value == ";"):
                i += 1
    if has_errors(diags):
        return None, diags
    return Scenario(frozenset(parties), ScenarioEnv.from_mapping(conditions)), diags


def parse_scenario(text: str, file_name: str = "<input>") -> Scenario:
    scenario, diags = parse_scenario_with_diagnostics(text, file_name)
    if scenario is None:
        raise ModelError(diags)
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), str(path))


# -- removal deltas ---------------------------------------------------------

@dataclass(frozen=True)
class ProfileChange:
    system: SystemId
    goal: GoalId
    before: CriticalityProfile
    after: CriticalityProfile


@dataclass(frozen=True)
class RankChange:
    goal: GoalId | None  # None = overall
    system: SystemId
    before_position: int
    after_position: int
    before_score: object
    after_score: object


@dataclass(frozen=True)
class DeltaReport:
    removed: tuple[TrustAssumption, ...]
    weights: WeightConfig
    profile_changes: tuple[ProfileChange, ...] = ()
    rank_changes: tuple[RankChange, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.removed and not self.profile_changes and not self.rank_changes


CellKey = tuple[SystemId, GoalId, PartyId]


def whatif_remove(model: TrustModel, selector: Iterable[CellKey],
                  weights: WeightConfig = DEFAULT_WEIGHTS) -> tuple[TrustModel, DeltaReport]:
    """Copy of ``model`` without the selected cells, plus what changed.

    Raises KeyError when a selected cell does not exist.
    """
    keys = []
    for s, g, p in selector:
        key = (SystemId(s), GoalId(g), PartyId(p))
        if key not in model.cells:
            raise KeyError(f"no cell ({key[0].value}, {key[1].value}, {key[2].value}) in the model")
        keys.append(key)
    removed = tuple(model.cells[k] for k in sorted(set(keys), key=lambda k: (
        list(SystemId).index(k[0]), list(GoalId).index(k[1]), PARTIES.index(k[2]))))
    after = model.without(keys)

    profile_changes = []
    for system, goal in sorted({(k[0], k[1]) for k in keys}, key=lambda sg: (
            list(SystemId).index(sg[0]), list(GoalId).index(sg[1]))):
        p0, p1 = profile(model, system, goal), profile(after, system, goal)
        if p0 != p1:
            profile_changes.append(ProfileChange(system, goal, p0, p1))

    rank_changes = []
    for goal in [*model.sorted_goals(), None]:
        r0 = {e.system: e for e in rank(model, goal, weights)}
        r1 = {e.system: e for e in rank(after, goal, weights)}
        for system in model.sorted_systems():
            e0, e1 = r0[system], r1[system]
            if (e0.position, e0.score) != (e1.position, e1.score):
                rank_changes.append(RankChange(goal, system, e0.position, e1.position, e0.score, e1.score))
    return after, DeltaReport(removed, weights, tuple(profile_changes), tuple(rank_changes))
