"""
Recursive-descent parser for the circuit language.

    program    := statement* EOF
    statement  := 'ququart' ID ';'
                | 'gate' NAME ['(' NUMBER ')'] ID ';'
                | 'qplate' 'pi' ID ';'
                | 'declare-interface' NAME ';'
                | 'assert-grade' ID grade ';'
                | 'measure' ID ';'
    grade      := '(' BIT ',' BIT ')'

Comments run from '#' to the end of the line. The grammar is LL(1). After an error the
parser skips to the next ';' and carries on, so a single pass reports every problem.
Registers must be declared before their first use.
"""

import math
from typing import List, Literal, Optional, Set, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from ..core.exceptions import ParseError
from ..grading import Grade
from ..ququart.gates import canonical_gate_name, is_parametric
from .lexer import Diagnostic, DiagnosticCode, Span, Token, TokenKind, tokenize

KEYWORDS = ("ququart", "gate", "qplate", "declare-interface", "assert-grade", "measure")


class QuquartDecl(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["ququart"] = "ququart"
    register: str
    span: Span


class GateStmt(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["gate"] = "gate"
    gate: str = Field(description="Canonical gate name")
    params: Tuple[float, ...] = ()
    register: str
    span: Span
    register_span: Span


class QplateStmt(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["qplate"] = "qplate"
    register: str
    span: Span
    register_span: Span


class DeclareInterface(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["declare-interface"] = "declare-interface"
    gate: str
    span: Span


class AssertGrade(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["assert-grade"] = "assert-grade"
    register: str
    grade: Grade
    span: Span
    register_span: Span


class Measure(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["measure"] = "measure"
    register: str
    span: Span
    register_span: Span


Statement = Union[QuquartDecl, GateStmt, QplateStmt, DeclareInterface, AssertGrade, Measure]


class Program(BaseModel):
    model_config = ConfigDict(frozen=True)

    statements: List[Statement] = Field(default_factory=list)

    @property
    def registers(self) -> List[str]:
        return [s.register for s in self.statements if isinstance(s, QuquartDecl)]

    @property
    def interfaces(self) -> List[str]:
        return [s.gate for s in self.statements if isinstance(s, DeclareInterface)]

    def structure(self) -> List[Tuple]:
        """Statements without their spans, for structural comparison."""
        out: List[Tuple] = []
        for s in self.statements:
            fields = s.model_dump(exclude={"span", "register_span"})
            out.append(tuple(sorted((k, str(v)) for k, v in fields.items())))
        return out


class ParseResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    program: Optional[Program] = None
    diagnostics: List[Diagnostic] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.program is not None


class _Syntax(Exception):
    """Unwinds one statement after its diagnostic has been recorded."""


class _Parser:
    def __init__(self, tokens: List[Token], diagnostics: List[Diagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics = diagnostics
        self.registers: Set[str] = set()

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.current
        if token.kind is not TokenKind.EOF:
            self.pos += 1
        return token

    def _error(self, code: DiagnosticCode, message: str, span: Span, hint: Optional[str] = None) -> None:
        self.diagnostics.append(Diagnostic(code=code, message=message, span=span, hint=hint))

    def _expect(self, kind: TokenKind, what: Optional[str] = None) -> Token:
        token = self.current
        if token.kind is not kind:
            found = token.kind.value if token.kind is TokenKind.EOF else repr(token.text)
            self._error(DiagnosticCode.SYNTAX, f"expected {what or kind.value}, found {found}", token.span)
            raise _Syntax()
        return self._advance()

    def _keyword(self, word: str) -> Token:
        token = self.current
        if token.kind is not TokenKind.IDENT or token.text != word:
            self._error(DiagnosticCode.SYNTAX, f"expected '{word}', found {token.text or token.kind.value!r}", token.span)
            raise _Syntax()
        return self._advance()

    def _synchronize(self) -> None:
        while self.current.kind not in (TokenKind.SEMI, TokenKind.EOF):
            self._advance()
        self._advance()

    def _register_use(self) -> Token:
        token = self._expect(TokenKind.IDENT, "register name")
        if token.text not in self.registers:
            self._error(
                DiagnosticCode.UNDECLARED_REGISTER,
                f"undeclared register {token.text}",
                token.span,
                hint=f"add 'ququart {token.text};' before its first use",
            )
        return token

    def parse(self) -> List[Statement]:
        statements: List[Statement] = []
        while self.current.kind is not TokenKind.EOF:
            start = self.pos
            try:
                statement = self._statement()
                if statement is not None:
                    statements.append(statement)
            except _Syntax:
                self._synchronize()
            if self.pos == start:
                self._advance()
        return statements

    def _statement(self) -> Optional[Statement]:
        head = self.current
        if head.kind is not TokenKind.IDENT or head.text not in KEYWORDS:
            self._error(
                DiagnosticCode.SYNTAX,
                f"expected a statement, found {head.text!r}",
                head.span,
                hint=f"statements start with one of: {', '.join(KEYWORDS)}",
            )
            raise _Syntax()
        self._advance()
        return getattr(self, "_" + head.text.replace("-", "_"))(head.span)

    def _ququart(self, span: Span) -> QuquartDecl:
        name = self._expect(TokenKind.IDENT, "register name")
        self._expect(TokenKind.SEMI)
        if name.text in self.registers:
            self._error(DiagnosticCode.DUPLICATE_REGISTER, f"register {name.text} is already declared", name.span)
        self.registers.add(name.text)
        return QuquartDecl(register=name.text, span=span)

    def _gate(self, span: Span) -> Optional[GateStmt]:
        name = self._expect(TokenKind.IDENT, "gate name")
        params: Tuple[float, ...] = ()
        if self.current.kind is TokenKind.LPAREN:
            self._advance()
            value = self._expect(TokenKind.NUMBER, "angle")
            self._expect(TokenKind.RPAREN)
            params = (float(value.text),)
        register = self._register_use()
        self._expect(TokenKind.SEMI)

        canonical = canonical_gate_name(name.text)
        if canonical is None:
            self._error(DiagnosticCode.UNKNOWN_GATE, f"unknown gate {name.text}", name.span, hint="see 'paragraded simulate --help' for gate names")
            return None
        if is_parametric(canonical) != bool(params):
            expected = "one angle" if is_parametric(canonical) else "no parameters"
            self._error(DiagnosticCode.PARAMETER_COUNT, f"gate {canonical} takes {expected}", name.span)
            return None
        if params and not math.isfinite(params[0]):
            self._error(DiagnosticCode.PARAMETER_COUNT, f"angle {params[0]} is not finite", name.span)
            return None
        return GateStmt(gate=canonical, params=params, register=register.text, span=span, register_span=register.span)

    def _qplate(self, span: Span) -> QplateStmt:
        self._keyword("pi")
        register = self._register_use()
        self._expect(TokenKind.SEMI)
        return QplateStmt(register=register.text, span=span, register_span=register.span)

    def _declare_interface(self, span: Span) -> Optional[DeclareInterface]:
        name = self._expect(TokenKind.IDENT, "gate name")
        self._expect(TokenKind.SEMI)
        canonical = canonical_gate_name(name.text)
        if canonical is None:
            self._error(DiagnosticCode.UNKNOWN_GATE, f"unknown gate {name.text}", name.span)
            return None
        return DeclareInterface(gate=canonical, span=span)

    def _bit(self) -> Optional[int]:
        token = self.current
        if token.kind is TokenKind.NUMBER and token.text in ("0", "1"):
            self._advance()
            return int(token.text)
        self._error(
            DiagnosticCode.MALFORMED_GRADE,
            f"malformed grade literal: {token.text or token.kind.value!r} is not a bit",
            token.span,
            hint="grades are written (a,b) with a, b in {0, 1}",
        )
        raise _Syntax()

    def _assert_grade(self, span: Span) -> AssertGrade:
        register = self._register_use()
        opening = self.current
        if opening.kind is not TokenKind.LPAREN:
            self._error(DiagnosticCode.MALFORMED_GRADE, "malformed grade literal: expected '('", opening.span, hint="write (a,b)")
            raise _Syntax()
        self._advance()
        a = self._bit()
        self._expect(TokenKind.COMMA)
        b = self._bit()
        self._expect(TokenKind.RPAREN)
        self._expect(TokenKind.SEMI)
        return AssertGrade(register=register.text, grade=Grade(a=a, b=b), span=span, register_span=register.span)

    def _measure(self, span: Span) -> Measure:
        register = self._register_use()
        self._expect(TokenKind.SEMI)
        return Measure(register=register.text, span=span, register_span=register.span)


def parse(source: str) -> ParseResult:
    """
    Parse circuit source text.

    Never raises: the result holds either a Program or at least one diagnostic.
    """
    tokens, diagnostics = tokenize(source)
    parser = _Parser(tokens, diagnostics)
    statements = parser.parse()
    if diagnostics:
        ordered = sorted(diagnostics, key=lambda d: d.span.as_tuple())
        return ParseResult(diagnostics=ordered)
    return ParseResult(program=Program(statements=statements))


def parse_program(source: str) -> Program:
    """
    Raises:
        ParseError: Carrying every diagnostic
    """
    result = parse(source)
    if result.program is None:
        first = result.diagnostics[0]
        raise ParseError(f"{first.span}: {first.message}", diagnostics=result.diagnostics)
    return result.program


def _format_statement(s: Statement) -> str:
    if isinstance(s, QuquartDecl):
        return f"ququart {s.register};"
    if isinstance(s, GateStmt):
        params = f"({s.params[0]!r})" if s.params else ""
        return f"gate {s.gate}{params} {s.register};"
    if isinstance(s, QplateStmt):
        return f"qplate pi {s.register};"
    if isinstance(s, DeclareInterface):
        return f"declare-interface {s.gate};"
    if isinstance(s, AssertGrade):
        return f"assert-grade {s.register} ({s.grade.a},{s.grade.b});"
    return f"measure {s.register};"


def pretty_print(program: Program) -> str:
    """Canonical source text, one statement per line."""
    return "".join(_format_statement(s) + "\n" for s in program.statements)
