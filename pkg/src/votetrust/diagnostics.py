from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True, order=True)
class SourceSpan:
    file: str
    line: int = 1
    column: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: Severity
    message: str
    span: SourceSpan
    # "parse" for lexical/syntax/vocabulary problems, "validate" for model-level ones
    stage: str = "parse"

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def __str__(self) -> str:
        return f"{self.span}: {self.severity.value}: {self.message}"


def error(message: str, span: SourceSpan, stage: str = "parse") -> ParseDiagnostic:
    return ParseDiagnostic(Severity.ERROR, message, span, stage)


def warning(message: str, span: SourceSpan, stage: str = "parse") -> ParseDiagnostic:
    return ParseDiagnostic(Severity.WARNING, message, span, stage)


def has_errors(diagnostics: list[ParseDiagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


class ModelError(ValueError):
    """Raised when text or models cannot be turned into a valid model."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = list(diagnostics)
        errors = [d for d in self.diagnostics if d.is_error]
        head = str(errors[0]) if errors else "invalid model"
        more = f" (+{len(errors) - 1} more)" if len(errors) > 1 else ""
        super().__init__(head + more)


class UnknownReferenceError(KeyError):
    """A system or goal that is not part of the model was requested."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown reference"
