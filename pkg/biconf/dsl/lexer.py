"""Tokenizer for manifold description sources."""

import re
from dataclasses import dataclass

from biconf.core.errors import DslSyntaxError


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, NUMBER, EOF, or the punctuation character itself
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<punct>[{}\[\](),;=+\-*/^])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    """Split source text into tokens, ending with an EOF token."""
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, column)
        kind = match.lastgroup
        lexeme = match.group()
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind == "number":
            is_int = lexeme.isdigit()
            tokens.append(Token("INT" if is_int else "NUMBER", lexeme, line, column))
        elif kind == "ident":
            tokens.append(Token("IDENT", lexeme, line, column))
        elif kind == "punct":
            tokens.append(Token(lexeme, lexeme, line, column))
        pos = match.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens
