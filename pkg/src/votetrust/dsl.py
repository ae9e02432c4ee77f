"""Reader and writer for the ``.vtm`` trust-model text format.

Example::

    # vtm v1
    note 5 "Trusted, unless code voting is used." when code_voting_in_use;

    system "I-voting (individual verifiability)" {
      goal ballot_secrecy {
        trust voters_computer { impact = single; notes = 5; }
      }
    }

``mode`` defaults to ``full``. Comments run from ``#`` to end of line.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Sequence

from .diagnostics import (
    ModelError,
    ParseDiagnostic,
    SourceSpan,
    error,
    has_errors,
    warning,
)
from .model import (
    SYSTEM_BY_DISPLAY_NAME,
    Condition,
    ConditionNote,
    GoalId,
    Impact,
    PartyId,
    SeverityKey,
    SystemId,
    TrustAssumption,
    TrustMode,
    TrustModel,
)
from .validation import validate_model

HEADER = "# vtm v1"
_HEADER_RE = re.compile(r"#\s*vtm\s+v(\S+)")

_PUNCT = set("{}=;,")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t"}
_UNESCAPES = {v: "\\" + k for k, v in _ESCAPES.items()}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, STRING, PUNCT, EOF
    value: str
    span: SourceSpan

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        if self.kind == "STRING":
            return f"string {quote(self.value)}"
        return f"'{self.value}'"


def tokenize(text: str, file_name: str = "<input>") -> tuple[list[Token], list[ParseDiagnostic]]:
    """Split text into tokens; lexical problems become diagnostics."""
    text = text.replace("\r\n", "\n")
    tokens: list[Token] = []
    diags: list[ParseDiagnostic] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def span() -> SourceSpan:
        return SourceSpan(file_name, line, col)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
        elif ch in " \t\r\f\v﻿":
            i, col = i + 1, col + 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            # column no longer matters until the newline resets it
        elif ch in _PUNCT:
            tokens.append(Token("PUNCT", ch, span()))
            i, col = i + 1, col + 1
        elif ch == '"':
            start = span()
            j = i + 1
            chars: list[str] = []
            closed = False
            while j < n and text[j] != "\n":
                c = text[j]
                if c == '"':
                    closed = True
                    break
                if c == "\\" and j + 1 < n:
                    esc = text[j + 1]
                    if esc in _ESCAPES:
                        chars.append(_ESCAPES[esc])
                    else:
                        diags.append(error(
                            f"invalid escape '\\{esc}' in string",
                            SourceSpan(file_name, line, col + (j - i))))
                        chars.append(esc)
                    j += 2
                    continue
                chars.append(c)
                j += 1
            if not closed:
                diags.append(error("unterminated string", start))
                col += j - i
                i = j
                continue
            tokens.append(Token("STRING", "".join(chars), start))
            col += j + 1 - i
            i = j + 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], span()))
            col += j - i
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_" or text[j] == "-"):
                j += 1
            tokens.append(Token("IDENT", text[i:j], span()))
            col += j - i
            i = j
        else:
            diags.append(error(f"unexpected character {ch!r}", span()))
            i, col = i + 1, col + 1
    tokens.append(Token("EOF", "", span()))
    return tokens, diags


def quote(text: str) -> str:
    return '"' + "".join(_UNESCAPES.get(c, c) for c in text) + '"'


def _lookup(enum_cls, token: Token, what: str, diags: list[ParseDiagnostic]):
    try:
        return enum_cls(token.value)
    except ValueError:
        diags.append(error(f"unknown {what} token '{token.value}'", token.span))
        return None


@dataclass
class _Document:
    systems: set[SystemId] = field(default_factory=set)
    goals: set[GoalId] = field(default_factory=set)
    assumptions: list[TrustAssumption] = field(default_factory=list)
    notes: list[ConditionNote] = field(default_factory=list)


class _Parser:
    """Recursive-descent parser that keeps going after errors."""

    def __init__(self, tokens: list[Token], diags: list[ParseDiagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diags = diags
        self.doc = _Document()

    # -- token helpers -------------------------------------------------
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    def expect(self, kind: str, value: str | None = None, what: str | None = None) -> Token | None:
        if self.at(kind, value):
            return self.advance()
        tok = self.peek()
        wanted = what or (f"'{value}'" if value else kind.lower())
        self.diags.append(error(f"expected {wanted}, found {tok.describe()}", tok.span))
        return None

    def skip_past(self, *stops: str) -> None:
        """Skip tokens up to and including the first punctuation in ``stops``."""
        while not self.at("EOF"):
            tok = self.advance()
            if tok.kind == "PUNCT" and tok.value in stops:
                return

    # -- grammar -------------------------------------------------------
    def parse(self) -> _Document:
        while not self.at("EOF"):
            tok = self.peek()
            if tok.kind == "IDENT" and tok.value == "system":
                self.system()
            elif tok.kind == "IDENT" and tok.value == "note":
                self.note()
            elif tok.kind == "IDENT" and tok.value == "goal":
                self.diags.append(error("goal block outside a system block", tok.span))
                self.goal(None)
            elif tok.kind == "IDENT" and tok.value == "trust":
                self.diags.append(error("trust cell outside a goal block", tok.span))
                self.cell(None, None)
            else:
                self.diags.append(error(f"expected 'system' or 'note', found {tok.describe()}", tok.span))
                self.advance()
        return self.doc

    def note(self) -> None:
        self.advance()
        id_tok = self.expect("INT", what="note id")
        text_tok = self.expect("STRING", what="note text") if id_tok else None
        toggle = None
        ok = id_tok is not None and text_tok is not None
        if ok and self.at("IDENT", "when"):
            self.advance()
            cond_tok = self.expect("IDENT", what="condition")
            if cond_tok is None:
                ok = False
            else:
                toggle = _lookup(Condition, cond_tok, "condition", self.diags)
                ok = ok and toggle is not None
        if ok and self.expect("PUNCT", ";"):
            note_id = int(id_tok.value)
            if note_id < 1:
                self.diags.append(error(f"note id must be positive, got {note_id}", id_tok.span))
            elif any(n.id == note_id for n in self.doc.notes):
                self.diags.append(error(f"duplicate note {note_id}", id_tok.span))
            else:
                self.doc.notes.append(ConditionNote(note_id, text_tok.value, toggle, id_tok.span))
        else:
            self.skip_past(";", "}")

    def system(self) -> None:
        self.advance()
        system = None
        name_tok = self.peek()
        if name_tok.kind in ("STRING", "IDENT"):
            self.advance()
            system = SYSTEM_BY_DISPLAY_NAME.get(name_tok.value)
            if system is None and name_tok.value in SystemId._value2member_map_:
                system = SystemId(name_tok.value)
            if system is None:
                self.diags.append(error(f"unknown system '{name_tok.value}'", name_tok.span))
        else:
            self.diags.append(error(f"expected system name, found {name_tok.describe()}", name_tok.span))
        if system is not None:
            self.doc.systems.add(system)
        if not self.expect("PUNCT", "{"):
            self.skip_past("}")
            return
        while not self.at("EOF") and not self.at("PUNCT", "}"):
            tok = self.peek()
            if tok.kind == "IDENT" and tok.value == "goal":
                self.goal(system)
            elif tok.kind == "IDENT" and tok.value == "trust":
                self.diags.append(error("trust cell outside a goal block", tok.span))
                self.cell(system, None)
            else:
                self.diags.append(error(f"expected 'goal' or '}}', found {tok.describe()}", tok.span))
                self.advance()
        self.expect("PUNCT", "}")

    def goal(self, system: SystemId | None) -> None:
        self.advance()
        goal = None
        goal_tok = self.expect("IDENT", what="goal name")
        if goal_tok is not None:
            goal = _lookup(GoalId, goal_tok, "goal", self.diags)
        if goal is not None and system is not None:
            self.doc.goals.add(goal)
        if not self.expect("PUNCT", "{"):
            self.skip_past("}")
            return
        while not self.at("EOF") and not self.at("PUNCT", "}"):
            tok = self.peek()
            if tok.kind == "IDENT" and tok.value == "trust":
                self.cell(system, goal)
            else:
                self.diags.append(error(f"expected 'trust' or '}}', found {tok.describe()}", tok.span))
                self.advance()
        self.expect("PUNCT", "}")

    def cell(self, system: SystemId | None, goal: GoalId | None) -> None:
        trust_tok = self.advance()
        party = None
        party_tok = self.expect("IDENT", what="party name")
        if party_tok is not None:
            party = _lookup(PartyId, party_tok, "party", self.diags)
        if not self.expect("PUNCT", "{"):
            self.skip_past("}")
            return
        attrs: dict[str, Any] = {}
        ok = party is not None
        while not self.at("EOF") and not self.at("PUNCT", "}"):
            name_tok = self.expect("IDENT", what="attribute name")
            if name_tok is None:
                self.skip_past(";")
                ok = False
                continue
            name = name_tok.value
            if name not in ("impact", "mode", "notes", "rationale"):
                self.diags.append(error(f"unknown attribute '{name}'", name_tok.span))
                self.skip_past(";")
                ok = False
                continue
            if name in attrs:
                self.diags.append(error(f"attribute '{name}' given twice", name_tok.span))
                ok = False
            if not self.expect("PUNCT", "="):
                self.skip_past(";")
                ok = False
                continue
            value = self.attribute_value(name)
            if value is None:
                ok = False
                self.skip_past(";")
                continue
            attrs[name] = value
            if not self.expect("PUNCT", ";"):
                ok = False
                self.skip_past(";")
        self.expect("PUNCT", "}")
        if "impact" not in attrs and party is not None:
            self.diags.append(error("missing 'impact' in trust cell", trust_tok.span))
            ok = False
        if ok and system is not None and goal is not None:
            self.doc.assumptions.append(TrustAssumption(
                system=system,
                goal=goal,
                party=party,
                severity=SeverityKey(attrs["impact"], attrs.get("mode", TrustMode.FULL)),
                notes=frozenset(attrs.get("notes", ())),
                rationale=attrs.get("rationale"),
                span=trust_tok.span,
            ))

    def attribute_value(self, name: str):
        if name == "impact":
            tok = self.expect("IDENT", what="impact level")
            return tok and _lookup(Impact, tok, "impact", self.diags)
        if name == "mode":
            tok = self.expect("IDENT", what="trust mode")
            return tok and _lookup(TrustMode, tok, "mode", self.diags)
        if name == "rationale":
            tok = self.expect("STRING", what="rationale string")
            return tok and tok.value
        ids = []
        while True:
            tok = self.expect("INT", what="note id")
            if tok is None:
                return None
            ids.append(int(tok.value))
            if not self.at("PUNCT", ","):
                return ids
            self.advance()


def _check_header(text: str, file_name: str) -> list[ParseDiagnostic]:
    first = text.lstrip("﻿").split("\n", 1)[0].strip()
    m = _HEADER_RE.fullmatch(first)
    if m and m.group(1) != "1":
        return [warning(f"unsupported format version 'v{m.group(1)}', reading as v1", SourceSpan(file_name, 1, 1))]
    return []


def parse_document(text: str, file_name: str = "<input>") -> tuple[TrustModel | None, list[ParseDiagnostic]]:
    """Parse a single file without cross-file checks (notes may dangle)."""
    tokens, diags = tokenize(text, file_name)
    diags = _check_header(text, file_name) + diags
    doc = _Parser(tokens, diags).parse()
    if has_errors(diags):
        return None, diags
    seen: dict[tuple, TrustAssumption] = {}
    for a in doc.assumptions:
        if a.key in seen:
            first = seen[a.key].span
            diags.append(error(
                f"duplicate cell ({a.system.value}, {a.goal.value}, {a.party.value}); first defined at {first}",
                a.span))
        else:
            seen[a.key] = a
    if has_errors(diags):
        return None, diags
    model = TrustModel.build(doc.systems, doc.goals, doc.assumptions, doc.notes, provenance=file_name)
    return model, diags


def parse_with_diagnostics(text: str, file_name: str = "<input>") -> tuple[TrustModel | None, list[ParseDiagnostic]]:
    model, diags = parse_document(text, file_name)
    if model is None:
        return None, diags
    diags = diags + validate_model(model)
    return (None if has_errors(diags) else model), diags


def parse_model(text: str, file_name: str = "<input>") -> TrustModel:
    """Parse and validate ``.vtm`` text.

    Raises :class:`ModelError` carrying every diagnostic when the text has
    lexical, syntax or vocabulary errors, duplicate cells, or references to
    undeclared notes.
    """
    model, diags = parse_with_diagnostics(text, file_name)
    if model is None:
        raise ModelError(diags)
    return model


def _cell_line(a: TrustAssumption) -> str:
    parts = [f"impact = {a.impact.value};"]
    if a.mode is not TrustMode.FULL:
        parts.append(f"mode = {a.mode.value};")
    if a.notes:
        parts.append("notes = " + ", ".join(str(n) for n in sorted(a.notes)) + ";")
    if a.rationale is not None:
        parts.append(f"rationale = {quote(a.rationale)};")
    return f"trust {a.party.value} {{ " + " ".join(parts) + " }"


def serialize_model(model: TrustModel) -> str:
    """Canonical text: notes first, then systems, goals and parties in table order."""
    lines = [HEADER]
    for note in model.sorted_notes():
        when = f" when {note.toggle.value}" if note.toggle else ""
        lines.append(f"note {note.id} {quote(note.text)}{when};")
    goals = model.sorted_goals()
    for system in model.sorted_systems():
        lines.append("")
        lines.append(f"system {quote(system.display_name)} {{")
        for goal in goals:
            row = sorted(model.row(system, goal), key=lambda a: list(PartyId).index(a.party))
            if not row:
                lines.append(f"  goal {goal.value} {{ }}")
                continue
            lines.append(f"  goal {goal.value} {{")
            lines.extend("    " + _cell_line(a) for a in row)
            lines.append("  }")
        lines.append("}")
    return "\n".join(lines) + "\n"


def merge_with_diagnostics(models: Sequence[TrustModel]) -> tuple[TrustModel | None, list[ParseDiagnostic]]:
    diags: list[ParseDiagnostic] = []
    cells: dict[tuple, TrustAssumption] = {}
    notes: dict[int, ConditionNote] = {}
    systems: set[SystemId] = set()
    goals: set[GoalId] = set()
    for model in models:
        fallback = SourceSpan(model.provenance or "<model>")
        systems |= model.systems
        goals |= model.goals
        for note in model.sorted_notes():
            prior = notes.get(note.id)
            if prior is None:
                notes[note.id] = note
            elif prior != note:
                diags.append(error(f"conflicting note text for note {note.id}", note.span or fallback, "validate"))
        for a in model.sorted_assumptions():
            prior = cells.get(a.key)
            label = f"({a.system.value}, {a.goal.value}, {a.party.value})"
            if prior is None:
                cells[a.key] = a
            elif prior == a:
                diags.append(warning(f"duplicate cell {label} deduplicated", a.span or fallback, "validate"))
            else:
                diags.append(error(f"conflicting cell {label}", a.span or fallback, "validate"))
    if has_errors(diags):
        return None, diags
    provenance = "; ".join(m.provenance for m in models if m.provenance)
    return TrustModel.build(systems, goals, cells.values(), notes.values(), provenance), diags


def merge_models(models: Sequence[TrustModel]) -> TrustModel:
    """Union of models. Conflicting cells or note texts raise :class:`ModelError`."""
    merged, diags = merge_with_diagnostics(models)
    if merged is None:
        raise ModelError(diags)
    return merged


# -- JSON -----------------------------------------------------------------

def model_to_json(model: TrustModel) -> dict[str, Any]:
    goals = model.sorted_goals()
    return {
        "format": "vtm",
        "version": 1,
        "notes": [
            {"note": n.id, "text": n.text, "when": n.toggle.value if n.toggle else None}
            for n in model.sorted_notes()
        ],
        "systems": [
            {
                "system": system.value,
                "name": system.display_name,
                "goals": [
                    {
                        "goal": goal.value,
                        "trust": [
                            {
                                "party": a.party.value,
                                "impact": a.impact.value,
                                "mode": a.mode.value,
                                "notes": sorted(a.notes),
                                "rationale": a.rationale,
                            }
                            for a in sorted(model.row(system, goal), key=lambda a: list(PartyId).index(a.party))
                        ],
                    }
                    for goal in goals
                ],
            }
            for system in model.sorted_systems()
        ],
    }


def _json_enum(enum_cls, value, what: str, where: str, span: SourceSpan, diags: list[ParseDiagnostic]):
    try:
        return enum_cls(value)
    except ValueError:
        diags.append(error(f"unknown {what} token '{value}' at {where}", span))
        return None


def parse_json_with_diagnostics(text: str, file_name: str = "<input>") -> tuple[TrustModel | None, list[ParseDiagnostic]]:
    """Read the JSON export back through the same vocabulary checks and validation."""
    span = SourceSpan(file_name)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        return None, [error(f"invalid JSON: {exc.msg}", SourceSpan(file_name, exc.lineno, exc.colno))]
    diags: list[ParseDiagnostic] = []
    systems, goals, cells, notes = set(), set(), [], []
    try:
        for i, n in enumerate(data.get("notes", [])):
            toggle = n.get("when")
            if toggle is not None:
                toggle = _json_enum(Condition, toggle, "condition", f"notes[{i}]", span, diags)
            notes.append(ConditionNote(int(n["note"]), str(n["text"]), toggle))
        for si, s in enumerate(data.get("systems", [])):
            system = _json_enum(SystemId, s["system"], "system", f"systems[{si}]", span, diags)
            if system is not None:
                systems.add(system)
            for gi, g in enumerate(s.get("goals", [])):
                goal = _json_enum(GoalId, g["goal"], "goal", f"systems[{si}].goals[{gi}]", span, diags)
                if goal is not None:
                    goals.add(goal)
                for ci, c in enumerate(g.get("trust", [])):
                    where = f"systems[{si}].goals[{gi}].trust[{ci}]"
                    party = _json_enum(PartyId, c["party"], "party", where, span, diags)
                    impact = _json_enum(Impact, c["impact"], "impact", where, span, diags)
                    mode = _json_enum(TrustMode, c.get("mode", "full"), "mode", where, span, diags)
                    if None in (system, goal, party, impact, mode):
                        continue
                    cells.append(TrustAssumption(
                        system, goal, party, SeverityKey(impact, mode),
                        frozenset(int(x) for x in c.get("notes", [])), c.get("rationale"), span))
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        diags.append(error(f"malformed model JSON: {exc!r}", span))
    if has_errors(diags):
        return None, diags
    seen = set()
    for a in cells:
        if a.key in seen:
            diags.append(error(f"duplicate cell ({a.system.value}, {a.goal.value}, {a.party.value})", span))
        seen.add(a.key)
    if has_errors(diags):
        return None, diags
    return TrustModel.build(systems, goals, cells, notes, provenance=file_name), diags


def parse_json_model(text: str, file_name: str = "<input>") -> TrustModel:
    model, diags = parse_json_with_diagnostics(text, file_name)
    if model is not None:
        diags = diags + validate_model(model)
    if model is None or has_errors(diags):
        raise ModelError(diags)
    return model


def read_documents(paths: Iterable[str | Path]) -> Iterator[tuple[TrustModel | None, list[ParseDiagnostic]]]:
    """Parse each file (``.json`` or ``.vtm``) without cross-file validation.

    Raises OSError for unreadable files.
    """
    for path in paths:
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() == ".json":
            yield parse_json_with_diagnostics(text, str(path))
        else:
            yield parse_document(text, str(path))


def load_models(
    sources: Iterable[TrustModel | tuple[TrustModel | None, list[ParseDiagnostic]]],
) -> tuple[TrustModel | None, list[ParseDiagnostic]]:
    """Merge already-parsed documents and validate the result as a whole."""
    diags: list[ParseDiagnostic] = []
    models: list[TrustModel] = []
    for src in sources:
        if isinstance(src, TrustModel):
            models.append(src)
            continue
        model, ds = src
        diags.extend(ds)
        if model is not None:
            models.append(model)
    if has_errors(diags):
        return None, diags
    merged, ds = merge_with_diagnostics(models)
    diags.extend(ds)
    if merged is None:
        return None, diags
    diags.extend(validate_model(merged))
    return (None if has_errors(diags) else merged), diags
