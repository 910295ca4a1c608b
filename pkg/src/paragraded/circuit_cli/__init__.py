"""
Circuit Language and CLI
========================

Lexer, parser and interpreter for ququart circuit files, the identity audit suites,
and the ``paragraded`` command line.
"""

from .audits import SUITES, run_audits
from .interpreter import SimulationResult, execute
from .lexer import Diagnostic, DiagnosticCode, Span, tokenize
from .parser import ParseResult, Program, parse, parse_program, pretty_print

__all__ = [
    "Diagnostic",
    "DiagnosticCode",
    "ParseResult",
    "Program",
    "SUITES",
    "SimulationResult",
    "Span",
    "execute",
    "parse",
    "parse_program",
    "pretty_print",
    "run_audits",
    "tokenize",
]
