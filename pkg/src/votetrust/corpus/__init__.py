"""Bundled trust matrix for the eight canonical voting systems, and its claims.

``table1.vtm`` holds the cells, ``notes.vtm`` the 14 footnotes and
``claims.vtm`` the comparative statements that are re-derived from the cells
by :func:`check_paper_claims`.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources

from ..analysis import profile
from ..diagnostics import ModelError, ParseDiagnostic, error, has_errors
from ..dsl import _lookup, load_models, parse_document, tokenize
from ..model import SYSTEMS, GoalId, Impact, SystemId, TrustModel
from ..validation import validate_model

__all__ = [
    "CORPUS_FILES",
    "Claim",
    "ClaimReport",
    "ClaimResult",
    "Predicate",
    "check_paper_claims",
    "corpus_text",
    "load_builtin_corpus",
    "load_claims",
    "parse_claims",
    "validate_model",
]

CORPUS_FILES = ("notes.vtm", "table1.vtm")

PROVENANCE = (
    "Trust matrix for eight voting systems (12 parties, 7 goals) with 14 footnotes. "
    "Merged machine-voting and i-voting rows are repeated for both variants. "
    "Footnote 11 names both printing house and software vendor, but in the "
    "cryptographic paper voting / ballot secrecy row only the printing-house cell carries it; "
    "the cells are encoded exactly as tabulated."
)


def corpus_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_builtin_corpus() -> TrustModel:
    """The validated bundled model. Corrupted data raises :class:`ModelError`."""
    docs = [parse_document(corpus_text(name), f"corpus/{name}") for name in CORPUS_FILES]
    model, diags = load_models(docs)
    if model is None:
        raise ModelError(diags)
    return TrustModel(model.systems, model.goals, model.assumptions, model.notes, PROVENANCE)


# -- claims -----------------------------------------------------------------

class Predicate(str, Enum):
    COUNT_EQUALS = "count_equals"
    COUNT_MAX_AMONG_SYSTEMS = "count_max_among_systems"
    COUNT_MIN_AMONG_SYSTEMS = "count_min_among_systems"
    LEVEL_COUNT_EQUALS = "level_count_equals"
    LEVEL_COUNT_MAX_AMONG_SYSTEMS = "level_count_max_among_systems"
    EMPTY_SET = "empty_set"


# (takes a list of systems, takes an impact level, takes an expected integer)
_SIGNATURES = {
    Predicate.COUNT_EQUALS: (False, False, True),
    Predicate.COUNT_MAX_AMONG_SYSTEMS: (True, False, True),
    Predicate.COUNT_MIN_AMONG_SYSTEMS: (True, False, True),
    Predicate.LEVEL_COUNT_EQUALS: (False, True, True),
    Predicate.LEVEL_COUNT_MAX_AMONG_SYSTEMS: (True, True, True),
    Predicate.EMPTY_SET: (False, False, False),
}


@dataclass(frozen=True)
class Claim:
    id: str
    goal: GoalId
    predicate: Predicate
    systems: tuple[SystemId, ...]
    quote: str
    level: Impact | None = None
    expected: int | None = None
    table_value: int | None = None
    discrepancy: str | None = None

    def describe(self) -> str:
        systems = ", ".join(s.value for s in self.systems)
        level = f" level={self.level.value}" if self.level else ""
        expected = f" expected={self.expected}" if self.expected is not None else ""
        return f"{self.predicate.value}({systems}{level}{expected}) on {self.goal.value}"


def parse_claims(text: str, file_name: str = "<claims>") -> list[Claim]:
    """Read ``claim ID GOAL PREDICATE ARGS... "QUOTE" [table N "NOTE"];`` statements."""
    tokens, diags = tokenize(text, file_name)
    claims: list[Claim] = []
    i = 0
    while tokens[i].kind != "EOF":
        start = i
        while tokens[i].kind != "EOF" and not (tokens[i].kind == "PUNCT" and tokens[i].value == ";"):
            i += 1
        if tokens[i].kind == "EOF":
            diags.append(error("expected ';' at end of claim", tokens[i].span))
            break
        claim = _claim_from_tokens(tokens[start:i], diags)
        if claim is not None:
            if any(c.id == claim.id for c in claims):
                diags.append(error(f"duplicate claim id '{claim.id}'", tokens[start].span))
            claims.append(claim)
        i += 1
    if has_errors(diags):
        raise ModelError(diags)
    return claims


def _claim_from_tokens(toks, diags: list[ParseDiagnostic]) -> Claim | None:
    def fail(msg, tok):
        diags.append(error(msg, tok.span))
        return None

    if len(toks) < 5 or toks[0].value != "claim" or toks[0].kind != "IDENT":
        return fail("expected 'claim ID GOAL PREDICATE ...'", toks[0])
    claim_id, goal_tok, pred_tok = toks[1], toks[2], toks[3]
    goal = _lookup(GoalId, goal_tok, "goal", diags)
    predicate = _lookup(Predicate, pred_tok, "predicate", diags)
    if goal is None or predicate is None:
        return None
    wants_list, wants_level, wants_int = _SIGNATURES[predicate]
    rest = list(toks[4:])

    systems = []
    while rest and rest[0].kind == "IDENT":
        system = _lookup(SystemId, rest.pop(0), "system", diags)
        if system is None:
            return None
        systems.append(system)
        if rest and rest[0].kind == "PUNCT" and rest[0].value == "," and wants_list:
            rest.pop(0)
            continue
        break
    if not systems or (len(systems) > 1 and not wants_list):
        return fail(f"predicate '{predicate.value}' takes {'a list of systems' if wants_list else 'one system'}", pred_tok)
    level = None
    if wants_level:
        if not rest or rest[0].kind != "IDENT":
            return fail("expected impact level", rest[0] if rest else pred_tok)
        level = _lookup(Impact, rest.pop(0), "impact", diags)
        if level is None:
            return None
    expected = None
    if wants_int:
        if not rest or rest[0].kind != "INT":
            return fail("expected integer", rest[0] if rest else pred_tok)
        expected = int(rest.pop(0).value)
    if not rest or rest[0].kind != "STRING":
        return fail("expected quoted claim text", rest[0] if rest else pred_tok)
    quote = rest.pop(0).value
    table_value = discrepancy = None
    if rest:
        if not (rest[0].kind == "IDENT" and rest[0].value == "table" and len(rest) == 3
                and rest[1].kind == "INT" and rest[2].kind == "STRING"):
            return fail("expected 'table N \"note\"' or ';'", rest[0])
        table_value, discrepancy = int(rest[1].value), rest[2].value
    return Claim(claim_id.value, goal, predicate, tuple(systems), quote, level, expected, table_value, discrepancy)


@lru_cache(maxsize=None)
def _builtin_claims() -> tuple[Claim, ...]:
    return tuple(parse_claims(corpus_text("claims.vtm"), "corpus/claims.vtm"))


def load_claims() -> list[Claim]:
    return list(_builtin_claims())


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_EVALUABLE = "not_evaluable"


@dataclass(frozen=True)
class ClaimResult:
    claim: Claim
    status: Status
    computed: int | None = None
    computed_systems: tuple[SystemId, ...] = ()
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS


@dataclass(frozen=True)
class ClaimReport:
    results: tuple[ClaimResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[ClaimResult]:
        return [r for r in self.results if not r.passed]

    def __getitem__(self, claim_id: str) -> ClaimResult:
        for r in self.results:
            if r.claim.id == claim_id:
                return r
        raise KeyError(claim_id)


def _count(model: TrustModel, system: SystemId, goal: GoalId, level: Impact | None) -> int:
    p = profile(model, system, goal)
    return p.total if level is None else p.by_impact[level]


def _evaluate(model: TrustModel, claim: Claim) -> ClaimResult:
    if claim.goal not in model.goals:
        return ClaimResult(claim, Status.NOT_EVALUABLE, note=f"goal '{claim.goal.value}' missing from model")
    missing = [s for s in claim.systems if s not in model.systems]
    if missing:
        return ClaimResult(claim, Status.NOT_EVALUABLE,
                           note="systems missing from model: " + ", ".join(s.value for s in missing))
    pred = claim.predicate
    if pred is Predicate.EMPTY_SET:
        n = _count(model, claim.systems[0], claim.goal, None)
        status = Status.PASS if n == 0 else Status.FAIL
        return ClaimResult(claim, status, n, note="" if n == 0 else f"expected no assumptions, found {n}")
    if pred in (Predicate.COUNT_EQUALS, Predicate.LEVEL_COUNT_EQUALS):
        n = _count(model, claim.systems[0], claim.goal, claim.level)
        if n == claim.expected:
            return ClaimResult(claim, Status.PASS, n)
        if claim.table_value is not None and n == claim.table_value:
            note = f"prose/table discrepancy: claim states {claim.expected}, table gives {n}; {claim.discrepancy}"
        else:
            note = f"expected {claim.expected}, computed {n}"
        return ClaimResult(claim, Status.FAIL, n, note=note)

    if set(SYSTEMS) - model.systems:
        return ClaimResult(claim, Status.NOT_EVALUABLE, note="comparison claims need all 8 canonical systems")
    counts = {s: _count(model, s, claim.goal, claim.level) for s in model.sorted_systems()}
    best = min(counts.values()) if pred is Predicate.COUNT_MIN_AMONG_SYSTEMS else max(counts.values())
    winners = tuple(s for s, n in counts.items() if n == best)
    notes = []
    if best != claim.expected:
        notes.append(f"extreme value is {best}, claim states {claim.expected}")
    if set(winners) != set(claim.systems):
        notes.append("attained by " + ", ".join(s.value for s in winners))
    status = Status.FAIL if notes else Status.PASS
    if notes and claim.discrepancy:
        notes.append(claim.discrepancy)
    return ClaimResult(claim, status, best, winners, "; ".join(notes))


def check_paper_claims(model: TrustModel, claims: list[Claim] | None = None) -> ClaimReport:
    """Evaluate every claim (builtin catalog by default) against ``model``.

    Failures and unevaluable claims are reported, never raised.
    """
    claims = load_claims() if claims is None else claims
    return ClaimReport(tuple(_evaluate(model, c) for c in claims))

