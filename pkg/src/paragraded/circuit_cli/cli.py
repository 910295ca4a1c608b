"""
Paragraded Command-Line Entry Point
===================================

``paragraded <subcommand>`` drives every module of the library. Results go to stdout,
errors to stderr; ``--json`` replaces the human output with one JSON document.

Exit codes: 0 success, 1 usage or input error, 2 assertion or identity failure,
3 numerical failure.
"""

import argparse
import sys
import time
import traceback
import uuid
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..core.exceptions import EXIT_NUMERICAL, ConfigurationError, ParagradedError, ValidationError
from ..fracnoise import Provenance
from ..ququart.gates import gate_names
from ..utils.config import Config
from ..utils.logger import log_run_summary, setup_logger
from .audits import SUITES
from .router import CommandOutcome, CommandRouter

logger = setup_logger("paragraded")

_FORMATS = """
file formats:
  circuit files   statements end in ';', '#' starts a comment:
                    ququart q;  gate Hb q;  gate RZ_a(0.5) q;  qplate pi q;
                    declare-interface X_b;  assert-grade q (0,1);  measure q;
  matrix CSV      as written by the library: '# basis:' line, a 'row' header and
                  re/im column pairs; or bare rows of complex() entries such as 0.5-0.5j
  output CSV      header row first; floats in round-trip precision
"""


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors become ValidationError so they share the exit-code mapping."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ValidationError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="paragraded",
        description="Graded paraparticle algebra, ququart circuits and fractional-noise diagnostics.",
        epilog=_FORMATS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=_FORMATS,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--json", action="store_true", help="print the report as a single JSON document")
        return p

    p = command("simulate", "run a circuit file and print final states and grade ledgers")
    p.add_argument("file", help="circuit source file")
    p.add_argument("--permissive", action="store_true", help="report undeclared grade changes instead of failing")
    p.epilog = _FORMATS + f"\ngate names: {', '.join(gate_names())}\n"

    p = command("audit-algebra", "run every exhaustive identity suite")
    p.add_argument("--suite", action="append", choices=list(SUITES), help="run only this suite (repeatable)")
    p.add_argument("--perturb", choices=list(SUITES), help="push this suite's first residual past tolerance")
    p.add_argument("--fail-fast", action="store_true", help="stop at the first failing suite")
    p.add_argument("--seed", type=int, default=None, help="defaults to PARAGRADED_SEED")

    p = command("xy-entropy", "entanglement entropy of the periodic XX chain and central-charge fit")
    p.add_argument("--n", type=int, required=True, help="number of sites (even)")
    p.add_argument("--lmin", type=int, required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--j", type=float, default=1.0, help="coupling J")
    p.add_argument("--csv", type=Path, default=None, help="write 'l, chord, S' here instead of stdout")

    p = command("fbm", "sample fractional Brownian paths")
    p.add_argument("--hurst", type=float, required=True)
    p.add_argument("--n", type=int, required=True, help="samples per path")
    p.add_argument("--paths", type=int, default=1)
    p.add_argument("--seed", type=int, default=None, help="defaults to PARAGRADED_SEED")
    p.add_argument("--method", choices=[m.value for m in Provenance], default=Provenance.EXACT.value)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--csv", type=Path, default=None, help="write 't, path_0, ...' here instead of stdout")

    p = command("synthesize", "decompose unitaries into CNOT_ba and rotations")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--random", type=int, metavar="K", help="K Haar-random unitaries")
    target.add_argument("--matrix", type=Path, metavar="CSV", help="4x4 unitary from CSV")
    p.add_argument("--seed", type=int, default=None, help="defaults to PARAGRADED_SEED")
    p.add_argument("--csv", type=Path, default=None)

    p = command("truth-table", "graded CNOT or Toffoli truth table against the printed rows")
    p.add_argument("kind", help="cnot or toffoli")
    p.add_argument("--csv", type=Path, default=None)

    p = command("yang-baxter", "Yang-Baxter residuals of the braid operator at q = exp(i phase)")
    p.add_argument("--q", type=float, required=True, metavar="PHASE", help="phase of q in radians")
    p.add_argument("--csv", type=Path, default=None, help="write per-triple residuals here")

    command("run-info", "print resolved configuration and its checks")
    return parser


def _emit(outcome: CommandOutcome, args: argparse.Namespace) -> None:
    if args.json:
        print(outcome.report.model_dump_json(indent=2))
        return
    csv_path = getattr(args, "csv", None)
    if outcome.csv is not None:
        if csv_path is not None:
            csv_path.write_text(outcome.csv, encoding="utf-8")
        elif args.command in ("xy-entropy", "fbm"):
            sys.stdout.write(outcome.csv)
    if outcome.text:
        print(outcome.text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and return its exit code.

    Args:
        argv: Arguments without the program name; sys.argv[1:] when None
    """
    run_id = uuid.uuid4().hex[:12]
    start_time = time.perf_counter()
    params: Dict[str, Any] = {"argv": list(sys.argv[1:] if argv is None else argv)}

    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            raise ValidationError("a subcommand is required")
        params.update({k: str(v) if isinstance(v, Path) else v for k, v in vars(args).items()})

        config = Config()
        checks = config.validate_config()
        if args.command != "run-info" and not all(checks.values()):
            failed: List[str] = [name for name, ok in checks.items() if not ok]
            raise ConfigurationError(f"Invalid configuration: {', '.join(failed)}")

        logger.info(f"Run {run_id}: {args.command}")
        outcome = CommandRouter(config).process_command(args.command, args)
        _emit(outcome, args)

        elapsed = time.perf_counter() - start_time
        log_run_summary(logger, run_id, params, {"exit_code": outcome.exit_code, "elapsed_s": round(elapsed, 4)})
        return outcome.exit_code

    except ParagradedError as e:
        print(f"error [{e.error_code}]: {e.message}", file=sys.stderr)
        log_run_summary(logger, run_id, params, error=e)
        return e.exit_code

    except Exception as e:
        logger.error(f"Unexpected error in run {run_id}: {e}")
        logger.debug(traceback.format_exc())
        print(f"error [INTERNAL_ERROR]: {type(e).__name__}: {e}", file=sys.stderr)
        log_run_summary(logger, run_id, params, error=e)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
