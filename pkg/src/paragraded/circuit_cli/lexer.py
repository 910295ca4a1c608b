"""
Tokenizer for the circuit language.

Tokenizing never fails: characters that start no token become diagnostics and are
skipped, so every input yields a token stream ending in EOF.
"""

import re
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class Span(BaseModel):
    """1-based line and column of the first character, plus its length."""
    model_config = ConfigDict(frozen=True)

    line: int = Field(ge=1)
    column: int = Field(ge=1)
    length: int = Field(default=1, ge=0)

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"

    def as_tuple(self) -> Tuple[int, int]:
        return (self.line, self.column)


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class DiagnosticCode(str, Enum):
    UNEXPECTED_CHARACTER = "E100"
    SYNTAX = "E200"
    UNKNOWN_GATE = "E300"
    UNDECLARED_REGISTER = "E301"
    MALFORMED_GRADE = "E302"
    DUPLICATE_REGISTER = "E303"
    PARAMETER_COUNT = "E304"


class Diagnostic(BaseModel):
    model_config = ConfigDict(frozen=True)

    severity: Severity = Severity.ERROR
    code: DiagnosticCode
    message: str
    span: Span
    hint: Optional[str] = None

    def format(self, source_name: str = "<input>") -> str:
        text = f"{source_name}:{self.span}: {self.severity.value} {self.code.value}: {self.message}"
        return f"{text}\n  hint: {self.hint}" if self.hint else text


class TokenKind(str, Enum):
    IDENT = "identifier"
    NUMBER = "number"
    LPAREN = "'('"
    RPAREN = "')'"
    COMMA = "','"
    SEMI = "';'"
    EOF = "end of input"


class Token(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: TokenKind
    text: str
    span: Span


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<punct>[(),;])
    """,
    re.VERBOSE,
)

_PUNCT = {"(": TokenKind.LPAREN, ")": TokenKind.RPAREN, ",": TokenKind.COMMA, ";": TokenKind.SEMI}


def tokenize(source: str) -> Tuple[List[Token], List[Diagnostic]]:
    tokens: List[Token] = []
    diagnostics: List[Diagnostic] = []
    line, line_start, pos = 1, 0, 0

    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        column = pos - line_start + 1
        if match is None:
            diagnostics.append(
                Diagnostic(
                    code=DiagnosticCode.UNEXPECTED_CHARACTER,
                    message=f"unexpected character {source[pos]!r}",
                    span=Span(line=line, column=column),
                )
            )
            pos += 1
            continue

        kind, text = match.lastgroup, match.group()
        span = Span(line=line, column=column, length=len(text))
        if kind == "newline":
            line, line_start = line + 1, match.end()
        elif kind == "number":
            tokens.append(Token(kind=TokenKind.NUMBER, text=text, span=span))
        elif kind == "ident":
            tokens.append(Token(kind=TokenKind.IDENT, text=text, span=span))
        elif kind == "punct":
            tokens.append(Token(kind=_PUNCT[text], text=text, span=span))
        pos = match.end()

    tokens.append(Token(kind=TokenKind.EOF, text="", span=Span(line=line, column=pos - line_start + 1, length=0)))
    return tokens, diagnostics
