from __future__ import annotations

import enum
from dataclasses import dataclass

from archlang.diagnostics import Reporter, SourcePos, run_phase

INT_MAX = 2**63 - 1

KEYWORDS = frozenset({
    "component", "autoconnect", "port", "in", "out", "enum", "connect",
    "state", "handler", "if", "else", "this", "true", "false",
    "public", "private",
})

# longest first so that two-character operators win
PUNCTUATION = (
    "->", "&&", "||", "==", "!=", "<=", ">=",
    "{", "}", "(", ")", "[", "]", ",", ";", ".", "=", "!", "<", ">",
    "+", "-", "*", "/",
)

ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


class Kind(enum.Enum):
    KEYWORD = "keyword"
    IDENT = "identifier"
    INT = "integer literal"
    STRING = "string literal"
    PUNCT = "punctuation"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: Kind
    text: str
    pos: SourcePos
    value: object = None

    def is_(self, text: str) -> bool:
        return self.kind in (Kind.KEYWORD, Kind.PUNCT) and self.text == text

    def describe(self) -> str:
        if self.kind is Kind.EOF:
            return "end of input"
        return repr(self.text)


def _is_ident_start(ch: str) -> bool:
    return ch == "_" or ("a" <= ch <= "z") or ("A" <= ch <= "Z")


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or ("0" <= ch <= "9")


def lex(source: str, file: str, reporter: Reporter) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r\f":
            i, col = i + 1, col + 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i, col = i + 1, col + 1
            continue

        pos = SourcePos(file, line, col)

        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(source[j]):
                j += 1
            text = source[i:j]
            kind = Kind.KEYWORD if text in KEYWORDS else Kind.IDENT
            tokens.append(Token(kind, text, pos))
            col += j - i
            i = j
            continue

        if "0" <= ch <= "9":
            j = i
            while j < n and "0" <= source[j] <= "9":
                j += 1
            text = source[i:j]
            value = int(text)
            if value > INT_MAX:
                reporter.error("E0104", pos, f"integer literal {text} exceeds 64-bit range")
                value = 0
            tokens.append(Token(Kind.INT, text, pos, value))
            col += j - i
            i = j
            continue

        if ch == '"':
            j = i + 1
            chars: list[str] = []
            closed = False
            while j < n and source[j] != "\n":
                c = source[j]
                if c == '"':
                    closed = True
                    break
                if c == "\\" and j + 1 < n and source[j + 1] in ESCAPES:
                    chars.append(ESCAPES[source[j + 1]])
                    j += 2
                    continue
                chars.append(c)
                j += 1
            if not closed:
                reporter.error("E0102", pos, "unterminated string literal")
                col += j - i
                i = j
                continue
            tokens.append(Token(Kind.STRING, source[i:j + 1], pos, "".join(chars)))
            col += j + 1 - i
            i = j + 1
            continue

        for p in PUNCTUATION:
            if source.startswith(p, i):
                tokens.append(Token(Kind.PUNCT, p, pos))
                i, col = i + len(p), col + len(p)
                break
        else:
            reporter.error("E0101", pos, f"illegal character {ch!r}")
            i, col = i + 1, col + 1

    tokens.append(Token(Kind.EOF, "", SourcePos(file, line, col)))
    return tokens


def tokenize(source: str, file: str = "<input>", reporter: Reporter | None = None) -> list[Token]:
    """Split ``source`` into tokens, ending with an EOF token."""
    return run_phase(lex, source, file, reporter=reporter)
