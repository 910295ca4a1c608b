import numpy as np
import pytest

from paragraded.circuit_cli import (
    DiagnosticCode,
    execute,
    parse,
    parse_program,
    pretty_print,
    tokenize,
)
from paragraded.circuit_cli.lexer import Diagnostic, TokenKind
from paragraded.core.exceptions import GradeConservationError, ParseError
from paragraded.grading import G01

PROGRAM = """
# prepare and check a helicity flip
ququart q;
gate Hb q;
gate RZ_a(0.25) q;
gate H_b q;
qplate pi q;
declare-interface X_b;
gate X_b q;
assert-grade q (0,1);
measure q;
"""


def _codes(source: str):
    return [d.code for d in parse(source).diagnostics]


@pytest.mark.unit
class TestLexer:
    def test_token_stream(self):
        tokens, diagnostics = tokenize("gate RZ_a(-0.5) q;")
        assert not diagnostics
        assert [t.kind for t in tokens] == [
            TokenKind.IDENT,
            TokenKind.IDENT,
            TokenKind.LPAREN,
            TokenKind.NUMBER,
            TokenKind.RPAREN,
            TokenKind.IDENT,
            TokenKind.SEMI,
            TokenKind.EOF,
        ]
        assert tokens[3].text == "-0.5"

    def test_keywords_with_hyphens_are_single_tokens(self):
        tokens, _ = tokenize("declare-interface X_b;")
        assert tokens[0].text == "declare-interface"

    def test_spans_track_lines(self):
        tokens, _ = tokenize("ququart q;\n  measure q;")
        measure = tokens[3]
        assert (measure.span.line, measure.span.column) == (2, 3)

    def test_comments_are_skipped(self):
        tokens, _ = tokenize("# nothing here\n")
        assert [t.kind for t in tokens] == [TokenKind.EOF]

    def test_bad_character_is_reported_and_skipped(self):
        tokens, diagnostics = tokenize("ququart @q;")
        assert diagnostics[0].code is DiagnosticCode.UNEXPECTED_CHARACTER
        assert str(diagnostics[0].span) == "1:9"
        assert [t.text for t in tokens[:-1]] == ["ququart", "q", ";"]


@pytest.mark.unit
class TestParser:
    def test_minimal_program(self):
        program = parse_program("ququart q; gate Hb q;")
        assert len(program.statements) == 2
        assert program.registers == ["q"]
        assert program.statements[1].gate == "H_b"

    def test_full_program(self):
        program = parse_program(PROGRAM)
        assert [s.kind for s in program.statements] == [
            "ququart",
            "gate",
            "gate",
            "gate",
            "qplate",
            "declare-interface",
            "gate",
            "assert-grade",
            "measure",
        ]
        assert program.interfaces == ["X_b"]
        assert program.statements[2].params == (0.25,)

    def test_undeclared_register_position(self):
        result = parse("gate Hb q;")
        assert not result.ok
        first = result.diagnostics[0]
        assert first.code is DiagnosticCode.UNDECLARED_REGISTER
        assert str(first.span) == "1:9"
        assert first.hint

    @pytest.mark.parametrize(
        "source, code",
        [
            ("ququart q; $", DiagnosticCode.UNEXPECTED_CHARACTER),
            ("ququart ;", DiagnosticCode.SYNTAX),
            ("ququart q; gate Hb q", DiagnosticCode.SYNTAX),
            ("frobnicate q;", DiagnosticCode.SYNTAX),
            ("ququart q; gate Foo q;", DiagnosticCode.UNKNOWN_GATE),
            ("declare-interface Foo;", DiagnosticCode.UNKNOWN_GATE),
            ("measure r;", DiagnosticCode.UNDECLARED_REGISTER),
            ("ququart q; assert-grade q (2,0);", DiagnosticCode.MALFORMED_GRADE),
            ("ququart q; assert-grade q 0,1;", DiagnosticCode.MALFORMED_GRADE),
            ("ququart q; ququart q;", DiagnosticCode.DUPLICATE_REGISTER),
            ("ququart q; gate RZ_a q;", DiagnosticCode.PARAMETER_COUNT),
            ("ququart q; gate Hb(0.5) q;", DiagnosticCode.PARAMETER_COUNT),
            ("ququart q; gate RZ_a(1e999) q;", DiagnosticCode.PARAMETER_COUNT),
        ],
    )
    def test_diagnostic_codes(self, source, code):
        assert code in _codes(source)

    def test_recovery_reports_every_error(self):
        codes = _codes("ququart q;\ngate Foo q;\nmeasure r;\nassert-grade q (0,7);\n")
        assert codes == [
            DiagnosticCode.UNKNOWN_GATE,
            DiagnosticCode.UNDECLARED_REGISTER,
            DiagnosticCode.MALFORMED_GRADE,
        ]

    def test_diagnostics_sorted_by_position(self):
        spans = [d.span.as_tuple() for d in parse("measure a;\nmeasure b;\n").diagnostics]
        assert spans == sorted(spans)

    def test_parse_program_raises_with_every_diagnostic(self):
        with pytest.raises(ParseError) as info:
            parse_program("measure a; measure b;")
        assert len(info.value.diagnostics) == 2
        assert info.value.exit_code == 1
        assert all(isinstance(d, Diagnostic) for d in info.value.diagnostics)
        assert [d["code"] for d in info.value.details["diagnostics"]] == ["E301", "E301"]

    def test_diagnostic_format(self):
        text = parse("gate Hb q;").diagnostics[0].format("c.qq")
        assert text.startswith("c.qq:1:9: error E301: undeclared register q")
        assert "hint:" in text

    def test_pretty_print_round_trip(self):
        program = parse_program(PROGRAM)
        printed = pretty_print(program)
        again = parse_program(printed)
        assert again.structure() == program.structure()
        assert pretty_print(again) == printed


@pytest.mark.unit
class TestParserFuzz:
    VOCABULARY = [
        "ququart", "gate", "qplate", "pi", "declare-interface", "assert-grade", "measure",
        "q", "r", "Hb", "X_b", "RZ_a", "CNOT_ba", "(", ")", ",", ";", "0", "1", "2", "0.5", "#", "\n", "@",
    ]

    def _check(self, source: str) -> None:
        result = parse(source)
        assert result.ok != bool(result.diagnostics)

    def test_random_bytes(self, rng):
        for _ in range(500):
            raw = rng.integers(0, 256, size=int(rng.integers(0, 64)), dtype=np.uint8).tobytes()
            self._check(raw.decode("utf-8", errors="replace"))

    def test_random_token_soup(self, rng):
        for _ in range(500):
            words = rng.choice(self.VOCABULARY, size=int(rng.integers(0, 24)))
            self._check(" ".join(words))

    @pytest.mark.slow
    def test_many_random_inputs(self, rng):
        for _ in range(100_000):
            raw = rng.integers(0, 256, size=int(rng.integers(0, 48)), dtype=np.uint8).tobytes()
            self._check(raw.decode("utf-8", errors="replace"))


@pytest.mark.unit
class TestInterpreter:
    def test_undeclared_flip_fails_in_strict_mode(self):
        program = parse_program("ququart q;\ngate Xb q;\nassert-grade q (0,1);\n")
        with pytest.raises(GradeConservationError) as info:
            execute(program, strict=True)
        assert info.value.gate_index == 0
        assert info.value.span == (2, 1)

    def test_permissive_mode_reports(self):
        program = parse_program("ququart q; gate Xb q; assert-grade q (0,1);")
        result = execute(program, strict=False)
        assert result.passed
        assert result.registers[0].ledger.flagged
        assert "undeclared" in result.report()

    def test_declared_interface_passes_strict_mode(self):
        program = parse_program("ququart q; declare-interface X_b; gate Xb q; assert-grade q (0,1);")
        result = execute(program, strict=True)
        assert result.passed
        assert result.registers[0].ledger.charge == G01

    def test_full_program(self):
        result = execute(parse_program(PROGRAM), strict=True)
        assert len(result.assertions) == 1
        assert len(result.measurements) == 1
        assert sum(result.measurements[0].probabilities.values()) == pytest.approx(1.0)

    def test_measure_superposition(self):
        result = execute(parse_program("ququart q; gate Hb q; measure q;"), strict=True)
        probs = result.measurements[0].probabilities
        assert probs["0"] == pytest.approx(0.5)
        assert probs["1"] == pytest.approx(0.5)

    def test_failing_assertion(self):
        result = execute(parse_program("ququart q; gate Hb q; assert-grade q (0,1);"), strict=True)
        assert not result.passed
        assert result.assertions[0].weight == pytest.approx(0.5)
        assert "FAILED" in result.report()

    def test_qplate_on_flipped_state(self):
        source = "ququart q; declare-interface X_b; gate X_b q; qplate pi q; assert-grade q (1,1);"
        assert execute(parse_program(source), strict=True).passed

    def test_registers_are_independent(self):
        source = "ququart q; ququart r; gate Hb q; assert-grade r (0,0);"
        result = execute(parse_program(source), strict=True)
        assert [reg.name for reg in result.registers] == ["q", "r"]
        assert result.passed
