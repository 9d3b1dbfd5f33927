from __future__ import annotations

from dataclasses import dataclass

from archlang.diagnostics import Reporter, SourcePos, run_phase
from archlang.syntax import ast
from archlang.syntax.lexer import Kind, lex
from archlang.syntax.parser import ParseError, Parser


@dataclass(frozen=True)
class Stimulus:
    port: str
    literal: ast.Expr
    pos: SourcePos


def _parse_stimulus(source: str, file: str, reporter: Reporter) -> list[Stimulus]:
    out: list[Stimulus] = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        line_rep = Reporter()
        tokens = lex(line, file, line_rep)
        # lexing a single line always reports line 1
        tokens = [
            t.__class__(t.kind, t.text, SourcePos(file, lineno, t.pos.column), t.value)
            for t in tokens
        ]
        bad = SourcePos(file, lineno, len(line) - len(line.lstrip()) + 1)
        if line_rep.has_errors:
            reporter.error("E0110", bad, f"line {lineno}: malformed stimulus")
            continue
        p = Parser(tokens, Reporter())
        try:
            port = p.ident("port name")
            value = p.literal()
            if p.tok.kind is not Kind.EOF:
                raise ParseError
        except ParseError:
            reporter.error(
                "E0110", bad, f"line {lineno}: expected '<port> <literal>', got {stripped!r}")
            continue
        out.append(Stimulus(port.text, value, port.pos))
    return out


def parse_stimulus(source: str, file: str = "<stimuli>", reporter: Reporter | None = None) -> list[Stimulus]:
    """Parse a stimulus file: one ``<port> <literal>`` per line, ``#`` comments."""
    return run_phase(_parse_stimulus, source, file, reporter=reporter)
