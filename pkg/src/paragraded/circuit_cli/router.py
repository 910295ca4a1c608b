"""
Paragraded Command Router
=========================

Central router that turns a parsed command line into a library call. Every handler
returns a CommandOutcome; the entry point decides how to print it and which exit code
to return.
"""

import cmath
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..braiding import BraidParams, r_operator, yang_baxter_csv, yang_baxter_residual
from ..core.exceptions import EXIT_IDENTITY, EXIT_OK, ParseError, ValidationError
from ..fracnoise import fbm_config, hurst_estimate, sample_paths
from ..ququart.cartan import cartan_coords
from ..ququart.gates import haar_unitary
from ..ququart.synthesis import synthesis_error, synthesize_su4
from ..ququart.truth_tables import truth_table
from ..spin_chain import central_charge_fit
from ..utils.config import Config
from ..utils.export import matrix_from_csv, table_to_csv
from .audits import run_audits
from .interpreter import execute
from .parser import parse

logger = logging.getLogger(__name__)


class CommandOutcome(BaseModel):
    """What a command produced: a report for --json, text for humans, an optional CSV artifact."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    report: BaseModel
    text: str = ""
    csv: Optional[str] = None
    exit_code: int = EXIT_OK


class FbmRunReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    hurst: float
    n: int
    dt: float
    paths: int
    seed: int
    provenance: str
    endpoint_variance: float = Field(description="Sample variance of B_H(t_n) across paths")
    expected_endpoint_variance: float = Field(description="t_n^(2H)")
    estimated_hurst: Optional[float] = Field(default=None, description="Mean periodogram estimate when n >= 256")


class SynthesisRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    cnots: int
    error: float
    cartan: Tuple[float, float, float]
    global_phase: float
    gates: List[str]


class SynthesisReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: Optional[int] = None
    records: List[SynthesisRecord] = Field(default_factory=list)

    @property
    def worst_error(self) -> float:
        return max((r.error for r in self.records), default=0.0)

    @property
    def max_cnots(self) -> int:
        return max((r.cnots for r in self.records), default=0)


class YangBaxterReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    phase: float
    q: Tuple[float, float] = Field(description="(re, im) of q")
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


class RunInfo(BaseModel):
    model_config = ConfigDict(frozen=True)

    config: Dict[str, Any]
    checks: Dict[str, bool]


def _fbm_csv(paths) -> str:
    header = ["t"] + [f"path_{i}" for i in range(len(paths))]
    columns = [paths[0].times] + [p.values for p in paths]
    rows = (tuple(float(v) for v in row) for row in np.column_stack(columns))
    return table_to_csv(header, rows)


class CommandRouter:
    """
    Dispatches subcommands to their handlers.

    Handlers receive the argparse namespace and never print; output is the caller's job.
    """

    def __init__(self, config: Config):
        """
        Initialize the command router.

        Args:
            config: Resolved configuration
        """
        self.config = config
        self._handlers: Dict[str, Callable[[Any], CommandOutcome]] = {
            "simulate": self.simulate,
            "audit-algebra": self.audit_algebra,
            "xy-entropy": self.xy_entropy,
            "fbm": self.fbm,
            "synthesize": self.synthesize,
            "truth-table": self.truth_table,
            "yang-baxter": self.yang_baxter,
            "run-info": self.run_info,
        }

    @property
    def commands(self) -> List[str]:
        return list(self._handlers)

    def process_command(self, command: str, args: Any) -> CommandOutcome:
        """
        Run one subcommand.

        Raises:
            ValidationError: For an unknown command
        """
        handler = self._handlers.get(command)
        if handler is None:
            raise ValidationError(f"Unknown command '{command}'", details={"known": self.commands})
        logger.info(f"Dispatching {command}")
        return handler(args)

    def simulate(self, args: Any) -> CommandOutcome:
        path = Path(args.file)
        try:
            source = path.read_text(encoding="utf-8", errors="replace")
        except OSError as e:
            raise ValidationError(f"Cannot read circuit file {path}: {e.strerror}") from e

        result = parse(source)
        if result.program is None:
            listing = "\n".join(d.format(str(path)) for d in result.diagnostics)
            raise ParseError(f"{len(result.diagnostics)} diagnostic(s) in {path}\n{listing}", diagnostics=result.diagnostics)

        simulation = execute(result.program, strict=not args.permissive)
        return CommandOutcome(
            report=simulation,
            text=simulation.report(),
            exit_code=EXIT_OK if simulation.passed else EXIT_IDENTITY,
        )

    def audit_algebra(self, args: Any) -> CommandOutcome:
        seed = self.config.seed if args.seed is None else args.seed
        summary = run_audits(seed, suites=args.suite or None, perturb=args.perturb, fail_fast=args.fail_fast)
        failing = [
            f"  {r.suite}: {c.name} residual {c.residual:.3e} > {c.tolerance:.1e}"
            for r in summary.reports
            for c in r.checks
            if not c.passed
        ]
        findings = sum(len(r.findings) for r in summary.reports)
        lines = [summary.table(), f"{len(summary.reports)} suites, {findings} documented findings"]
        if failing:
            lines += ["failing checks:"] + failing
        return CommandOutcome(
            report=summary,
            text="\n".join(lines),
            exit_code=EXIT_OK if summary.passed else EXIT_IDENTITY,
        )

    def xy_entropy(self, args: Any) -> CommandOutcome:
        fit = central_charge_fit(args.n, args.lmin, args.lmax, j=args.j)
        return CommandOutcome(report=fit, text=fit.summary(), csv=fit.to_csv())

    def fbm(self, args: Any) -> CommandOutcome:
        seed = self.config.seed if args.seed is None else args.seed
        config = fbm_config(args.hurst, args.n, dt=args.dt, seed=seed)
        paths = sample_paths(config, args.paths, method=args.method)

        endpoints = np.array([p.values[-1] for p in paths])
        estimated = None
        if config.n >= 256:
            estimated = float(np.mean([hurst_estimate(p, bootstrap=0).hurst for p in paths]))
        report = FbmRunReport(
            hurst=config.hurst,
            n=config.n,
            dt=config.dt,
            paths=len(paths),
            seed=config.seed,
            provenance=paths[0].provenance,
            endpoint_variance=float(np.var(endpoints, ddof=1)) if len(paths) > 1 else 0.0,
            expected_endpoint_variance=float(paths[0].times[-1] ** (2 * config.hurst)),
            estimated_hurst=estimated,
        )
        text = (
            f"{report.paths} {report.provenance} path(s), H = {report.hurst}, n = {report.n}, seed {report.seed}\n"
            f"endpoint variance {report.endpoint_variance:.6f} (expected {report.expected_endpoint_variance:.6f})"
        )
        if estimated is not None:
            text += f"\nmean periodogram H estimate {estimated:.4f}"
        return CommandOutcome(report=report, text=text, csv=_fbm_csv(paths))

    def synthesize(self, args: Any) -> CommandOutcome:
        seed: Optional[int] = None
        if args.matrix is not None:
            targets = [matrix_from_csv(args.matrix)]
        else:
            if args.random < 1:
                raise ValidationError(f"--random needs a positive count, got {args.random}")
            seed = self.config.seed if args.seed is None else args.seed
            rngs = [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(args.random)]
            targets = [haar_unitary(rng) for rng in rngs]

        records = []
        for i, u in enumerate(targets):
            circuit = synthesize_su4(u, tol=self.config.tol_synth)
            records.append(
                SynthesisRecord(
                    index=i,
                    cnots=circuit.cnot_count(),
                    error=synthesis_error(u, circuit),
                    cartan=cartan_coords(u).as_tuple(),
                    global_phase=circuit.global_phase,
                    gates=circuit.labels(),
                )
            )
        report = SynthesisReport(seed=seed, records=records)
        text = "\n".join(
            [f"#{r.index}: {r.cnots} CNOT(s), error {r.error:.2e}: {' '.join(r.gates)}" for r in records]
            + [f"worst error {report.worst_error:.2e}, at most {report.max_cnots} CNOT(s)"]
        )
        csv_text = table_to_csv(
            ["index", "cnots", "error", "c1", "c2", "c3", "gates"],
            [(r.index, r.cnots, r.error, *r.cartan, " ".join(r.gates)) for r in records],
        )
        return CommandOutcome(report=report, text=text, csv=csv_text)

    def truth_table(self, args: Any) -> CommandOutcome:
        table = truth_table(args.kind)
        mismatches = sum(1 for row in table.rows if not row.matches)
        text = table.table() + f"\n{len(table.rows) - mismatches}/{len(table.rows)} printed rows reproduced"
        return CommandOutcome(
            report=table,
            text=text,
            csv=table.to_csv(),
            exit_code=EXIT_OK if table.all_match else EXIT_IDENTITY,
        )

    def yang_baxter(self, args: Any) -> CommandOutcome:
        q = cmath.exp(1j * args.q)
        r = r_operator(BraidParams(q=q))
        report = YangBaxterReport(
            phase=args.q,
            q=(q.real, q.imag),
            residual=yang_baxter_residual(r),
            tolerance=self.config.tol_exact,
        )
        status = "holds" if report.passed else "FAILS"
        text = f"q = exp({args.q} i): Yang-Baxter residual {report.residual:.3e} over 64 triples, {status}"
        return CommandOutcome(
            report=report,
            text=text,
            csv=yang_baxter_csv(r),
            exit_code=EXIT_OK if report.passed else EXIT_IDENTITY,
        )

    def run_info(self, args: Any) -> CommandOutcome:
        info = RunInfo(config=self.config.as_dict(), checks=self.config.validate_config())
        lines = [f"{key:<16} {value}" for key, value in info.config.items()]
        lines += [f"{name:<32} {'ok' if ok else 'FAILED'}" for name, ok in info.checks.items()]
        return CommandOutcome(report=info, text="\n".join(lines))
