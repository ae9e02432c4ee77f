from __future__ import annotations

from collections import Counter

from .diagnostics import ParseDiagnostic, SourceSpan, error, warning
from .model import TrustModel


def _fallback_span(model: TrustModel) -> SourceSpan:
    return SourceSpan(model.provenance or "<model>")


def validate_model(model: TrustModel) -> list[ParseDiagnostic]:
    """Check key uniqueness, reference resolution and note-catalog completeness.

    Errors and informational warnings are returned in a deterministic order;
    nothing is raised.
    """
    out: list[ParseDiagnostic] = []
    fallback = _fallback_span(model)

    note_ids = Counter(n.id for n in model.notes)
    for note in sorted(model.notes, key=lambda n: (n.id, n.text)):
        if note.id < 1:
            out.append(error(f"note id must be positive, got {note.id}", note.span or fallback, "validate"))
    for note_id, count in sorted(note_ids.items()):
        if count > 1:
            out.append(error(f"conflicting note {note_id}: declared with different text", fallback, "validate"))

    seen: set[tuple] = set()
    for a in model.sorted_assumptions():
        span = a.span or fallback
        if a.key in seen:
            out.append(error(
                f"duplicate cell ({a.system.value}, {a.goal.value}, {a.party.value})", span, "validate"))
        seen.add(a.key)
        if a.system not in model.systems:
            out.append(error(f"undeclared system '{a.system.value}'", span, "validate"))
        if a.goal not in model.goals:
            out.append(error(f"undeclared goal '{a.goal.value}'", span, "validate"))
        for note_id in sorted(a.notes):
            if note_id not in note_ids:
                out.append(error(f"undeclared note {note_id}", span, "validate"))

    for system in model.sorted_systems():
        for goal in model.sorted_goals():
            if not model.row(system, goal):
                out.append(warning(
                    f"no assumptions for goal '{goal.value}' in system '{system.value}'",
                    fallback, "validate"))
    return out
