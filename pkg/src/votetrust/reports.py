"""Builders turning analysis results into :class:`~votetrust.render.Report` values."""
from __future__ import annotations

from fractions import Fraction

from .analysis import (
    CriticalityProfile,
    DominanceResult,
    GoalMatrix,
    RankEntry,
    WeightConfig,
    equivalence_classes,
)
from .corpus import ClaimReport
from .diagnostics import ParseDiagnostic
from .model import IMPACTS, PARTIES, GoalId, Impact, SystemId, TrustMode, TrustModel
from .render import Report
from .scenarios import BreachEntry, Coalition, DeltaReport, ScenarioEnv


def _scope(goal: GoalId | None) -> str:
    return "overall" if goal is None else goal.value


def _num(x: Fraction) -> str:
    return str(x)


def matrix_report(matrix: GoalMatrix) -> Report:
    rows = [[s.value, *("" if c is None else str(c) for c in row)]
            for s, row in zip(matrix.systems, matrix.rows)]
    data = {
        "goal": matrix.goal.value,
        "parties": [p.value for p in matrix.parties],
        "rows": [
            {
                "system": s.value,
                "trust": {
                    p.value: None if c is None else {"impact": c.impact.value, "mode": c.mode.value, "notes": list(c.notes)}
                    for p, c in zip(matrix.parties, row)
                },
            }
            for s, row in zip(matrix.systems, matrix.rows)
        ],
    }
    return Report(f"Trust matrix: {matrix.goal.display_name}", ["system", *(p.value for p in matrix.parties)], rows, data,
                  summary=["cell = impact/mode[notes]"])


def _profile_dict(p: CriticalityProfile) -> dict:
    return {
        "total": p.total,
        "impact": {i.value: p.by_impact[i] for i in IMPACTS},
        "mode": {m.value: p.by_mode[m] for m in (TrustMode.FULL, TrustMode.CONDITIONAL)},
    }


def profile_report(system: SystemId, goal: GoalId | None, p: CriticalityProfile) -> Report:
    row = [system.value, _scope(goal), str(p.total), *(str(p.by_impact[i]) for i in reversed(IMPACTS)),
           str(p.by_mode[TrustMode.FULL]), str(p.by_mode[TrustMode.CONDITIONAL])]
    return Report(
        f"Profile: {system.value} / {_scope(goal)}",
        ["system", "goal", "total", "all", "subset", "single", "full", "conditional"],
        [row],
        {"system": system.value, "goal": _scope(goal), **_profile_dict(p)},
        summary=[str(p), f"full {p.by_mode[TrustMode.FULL]}, conditional {p.by_mode[TrustMode.CONDITIONAL]}"],
    )


def compare_report(a: SystemId, b: SystemId, goal: GoalId | None, result: DominanceResult) -> Report:
    rows = [[w.goal.value, w.party.value, w.kind.value] for w in result.witness]
    return Report(
        f"Dominance: {a.value} vs {b.value} ({_scope(goal)})",
        ["goal", "party", "witness"],
        rows,
        {"a": a.value, "b": b.value, "scope": _scope(goal), "relation": result.relation.value,
         "witness": [dict(zip(["goal", "party", "witness"], r)) for r in rows]},
        summary=[f"{a.value} {result.relation.value} {b.value}"],
    )


def frontier_report(model: TrustModel, goal: GoalId | None, frontier: list[tuple[SystemId, ...]]) -> Report:
    classes = equivalence_classes(model, goal)
    rows = [[" ".join(s.value for s in cls), "yes" if cls in frontier else "no"] for cls in classes]
    return Report(
        f"Pareto frontier: {_scope(goal)}",
        ["class", "frontier"],
        rows,
        {"scope": _scope(goal), "frontier": [[s.value for s in cls] for cls in frontier],
         "classes": [[s.value for s in cls] for cls in classes]},
        summary=[f"{len(frontier)} of {len(classes)} equivalence classes are undominated"],
    )


def score_report(goal: GoalId | None, weights: WeightConfig, scores: list[tuple[SystemId, Fraction]]) -> Report:
    rows = [[s.value, _num(v)] for s, v in scores]
    return Report(f"Scores: {_scope(goal)}", ["system", "score"], rows,
                  {"scope": _scope(goal), "weights": str(weights),
                   "scores": [{"system": s.value, "score": _num(v)} for s, v in scores]},
                  summary=[f"weights single,subset,all,conditional_factor = {weights}"])


def rank_report(goal: GoalId | None, weights: WeightConfig, entries: list[RankEntry]) -> Report:
    rows = [[str(e.position), e.system.value, _num(e.score), "yes" if e.tied else "no"] for e in entries]
    return Report(f"Ranking: {_scope(goal)} (lower is better)", ["position", "system", "score", "tied"], rows,
                  {"scope": _scope(goal), "weights": str(weights),
                   "ranking": [{"position": e.position, "system": e.system.value, "score": _num(e.score),
                                "tied": e.tied} for e in entries]},
                  summary=[f"weights single,subset,all,conditional_factor = {weights}"])


def breach_report(coalition: Coalition, env: ScenarioEnv, entries: list[BreachEntry]) -> Report:
    parties = [p.value for p in PARTIES if p in coalition]
    rows = [[e.system.value, e.goal.value, e.level.value if e.level else "",
             " ".join(a.party.value for a in e.triggered)] for e in entries]
    conds = ", ".join(f"{k}={'true' if v else 'false'}" for k, v in env.as_dict().items())
    return Report(
        "Breach analysis",
        ["system", "goal", "breach", "triggered"],
        rows,
        {"coalition": parties, "conditions": env.as_dict(),
         "breaches": [{"system": e.system.value, "goal": e.goal.value,
                       "breach": e.level.value if e.level else None,
                       "triggered": [a.party.value for a in e.triggered]} for e in entries]},
        summary=[f"corrupt: {' '.join(parties) or '(none)'}", f"conditions: {conds}"],
    )


def delta_report(delta: DeltaReport) -> Report:
    rows = []
    for c in delta.profile_changes:
        rows.append(["profile", c.system.value, c.goal.value, str(c.before), str(c.after)])
    for r in delta.rank_changes:
        rows.append(["rank", r.system.value, _scope(r.goal),
                     f"#{r.before_position} ({r.before_score})", f"#{r.after_position} ({r.after_score})"])
    removed = [f"{a.system.value}:{a.goal.value}:{a.party.value}" for a in delta.removed]
    return Report(
        "What-if removal",
        ["change", "system", "scope", "before", "after"],
        rows,
        {"removed": removed, "weights": str(delta.weights),
         "changes": [dict(zip(["change", "system", "scope", "before", "after"], r)) for r in rows]},
        summary=[f"removed: {' '.join(removed) or '(nothing)'}"],
    )


def coalition_report(system: SystemId, goal: GoalId, level: Impact, found: list[Coalition]) -> Report:
    rows = [[str(len(c)), " ".join(p.value for p in PARTIES if p in c)] for c in found]
    return Report(
        f"Minimal coalitions: {system.value} / {goal.value} at >= {level.value}",
        ["size", "parties"],
        rows,
        {"system": system.value, "goal": goal.value, "level": level.value,
         "coalitions": [[p.value for p in PARTIES if p in c] for c in found]},
        summary=[f"{len(found)} minimal coalition(s)"],
    )


def resilience_report(system: SystemId, table: dict[GoalId, dict[Impact, int | None]]) -> Report:
    def fmt(v):
        return "" if v is None else str(v)

    rows = [[g.value, *(fmt(levels[i]) for i in IMPACTS)] for g, levels in table.items()]
    return Report(
        f"Resilience: {system.value}",
        ["goal", *(i.value for i in IMPACTS)],
        rows,
        {"system": system.value,
         "resilience": {g.value: {i.value: v for i, v in levels.items()} for g, levels in table.items()}},
        summary=["smallest coalition reaching each impact level (blank = none)"],
    )


def claims_report(report: ClaimReport) -> Report:
    rows = []
    for r in report.results:
        c = r.claim
        rows.append([c.id, c.goal.value, r.status.value.upper(), c.describe(),
                     "" if r.computed is None else str(r.computed), c.quote, r.note])
    passed = sum(r.passed for r in report.results)
    return Report(
        "Claims check",
        ["id", "goal", "status", "predicate", "computed", "quote", "note"],
        rows,
        {"passed": passed, "total": len(report.results),
         "claims": [{"id": r.claim.id, "goal": r.claim.goal.value, "predicate": r.claim.predicate.value,
                     "systems": [s.value for s in r.claim.systems],
                     "level": r.claim.level.value if r.claim.level else None,
                     "expected": r.claim.expected, "table": r.claim.table_value,
                     "status": r.status.value, "computed": r.computed,
                     "computed_systems": [s.value for s in r.computed_systems],
                     "quote": r.claim.quote, "note": r.note} for r in report.results]},
        summary=[f"{passed} of {len(report.results)} claims pass"],
    )


def format_diagnostics(diags: list[ParseDiagnostic]) -> str:
    return "".join(f"{d}\n" for d in diags)

