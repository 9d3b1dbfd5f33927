"""Source positions, diagnostics and the reporter that collects them."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


@dataclass(frozen=True, order=True)
class SourcePos:
    file: str
    line: int = 1
    column: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


NOWHERE = SourcePos("<unknown>")


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    pos: SourcePos = field(default=NOWHERE)

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def sort_key(self):
        return (self.pos, self.code, self.message)

    def __str__(self) -> str:
        return f"{self.severity.value} {self.code} {self.pos} {self.message}"


class CompileError(Exception):
    """Raised when a phase finishes with at least one error diagnostic."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = sorted(diagnostics, key=Diagnostic.sort_key)
        errors = [d for d in self.diagnostics if d.is_error]
        first = errors[0] if errors else None
        super().__init__(str(first) if first else "compilation failed")

    @property
    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics if d.is_error]


class Reporter:
    def __init__(self):
        self.diagnostics: list[Diagnostic] = []
        self._seen: set[Diagnostic] = set()

    def _add(self, diag: Diagnostic) -> None:
        if diag not in self._seen:
            self._seen.add(diag)
            self.diagnostics.append(diag)

    def error(self, code: str, pos: SourcePos, message: str) -> None:
        self._add(Diagnostic(Severity.ERROR, code, message, pos))

    def warning(self, code: str, pos: SourcePos, message: str) -> None:
        self._add(Diagnostic(Severity.WARNING, code, message, pos))

    def extend(self, diags) -> None:
        for d in diags:
            self._add(d)

    @property
    def has_errors(self) -> bool:
        return any(d.is_error for d in self.diagnostics)

    def error_count(self) -> int:
        return sum(1 for d in self.diagnostics if d.is_error)

    def sorted(self) -> list[Diagnostic]:
        return sorted(self.diagnostics, key=Diagnostic.sort_key)

    def raise_if_errors(self) -> None:
        if self.has_errors:
            raise CompileError(self.diagnostics)


def run_phase(fn, *args, reporter: Reporter | None = None, **kwargs):
    """Call ``fn`` with a reporter; raise if none was supplied and errors arose."""
    own = reporter is None
    rep = Reporter() if own else reporter
    result = fn(*args, rep, **kwargs)
    if own:
        rep.raise_if_errors()
    return result
