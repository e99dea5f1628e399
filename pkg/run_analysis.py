#!/usr/bin/env python3
"""
Command-line driver for the Jacobi coefficient inequality toolkit
=================================================================

Subcommands:
  eval            classical and orthonormal Jacobi polynomial values
  quad            Gauss-Jacobi nodes and weights
  transform       corpus coefficients with Parseval and round-trip checks
  mseq            Paley weight constants M_omega
  verify          inequality sweeps, (a)-parts by default, (b)-parts with --theorem *-b
  counterexample  the p = 1 divergence trace of g_N

Reports go to stdout (or --out) as JSON lines or CSV; logs and progress bars go
to stderr. Exit status: 0 success, 1 unexpected failure, 2 invalid arguments
or config, 3 numerical-confidence problems (the report is still written).

Usage:
    python run_analysis.py eval --n 0 --t 0.5 --alpha 0 --beta 0
    python run_analysis.py verify --theorem hy --p 2 --corpus polys
    python run_analysis.py counterexample --omega pow:-2 --ladder 16..4096
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from jacobi_core import (
    ConvergenceError,
    JacobiParams,
    PreconditionError,
    eval_jacobi,
    eval_orthonormal,
    sigma,
    weight_mass,
)
from quadrature import gauss_jacobi_rule
from jacobi_transform import analyze, synthesize, tail_indicator
from corpus import CorpusBuilder, find_item, parse_omega, parseval_gap, resolve_corpus
from inequalities import (
    ANALYSIS_THEOREMS,
    DEFAULT_WEIGHT_TRUNCATION,
    SYNTHESIS_THEOREMS,
    SweepConfig,
    compute_m_omega,
    summarize_reports,
    verify_sweep,
    verify_synthesis_sweep,
)
from counterexample import (
    DEFAULT_LADDER,
    INCONSISTENCY_FLAG,
    InconsistencyError,
    bump_trials,
    build_gn,
    divergence_trace,
    duality_check,
    oriented_params,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_LOW_CONFIDENCE = 3

THEOREM_CHOICES = {
    "paley": ("Paley-a",),
    "hy": ("HY-a",),
    "hyp": ("HYP-a",),
    "all": ANALYSIS_THEOREMS,
    "paley-b": ("Paley-b",),
    "hy-b": ("HY-b",),
    "hyp-b": ("HYP-b",),
    "all-b": SYNTHESIS_THEOREMS,
}
LOW_CONFIDENCE_FLAGS = {
    "low_confidence_coefficients",
    "low_confidence_norm",
    "m_omega_truncated",
    "non_convergent_ladder",
    "reanalysis_mismatch",
    INCONSISTENCY_FLAG,
}
ROUNDTRIP_POINTS = 20
DEFAULT_DUALITY_MAX_DEGREE = 32


@dataclass
class RunConfig:
    """Everything one CLI invocation needs"""
    command: str
    params: JacobiParams = JacobiParams(0.0, 0.0)
    n: int = 0
    t: Tuple[float, ...] = ()
    m: int = 16
    p: Tuple[float, ...] = ()
    s: Tuple[float, ...] = ()
    q: Tuple[float, ...] = ()
    r: Tuple[float, ...] = ()
    omegas: Tuple[str, ...] = ()
    omega_truncation: int = DEFAULT_WEIGHT_TRUNCATION
    corpus: str = "default"
    items: Tuple[str, ...] = ()
    ladder: Optional[Tuple[int, ...]] = None
    theorem: str = "all"
    fmt: str = "jsonl"
    out: str = "-"
    seed: int = 0
    max_degree: int = 200
    permissive: bool = False
    summary: bool = False
    check_grid: bool = True
    duality_max_degree: int = DEFAULT_DUALITY_MAX_DEGREE
    progress: bool = True

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        def tup(name: str) -> tuple:
            return tuple(getattr(args, name, None) or ())

        return cls(
            command=args.command,
            params=JacobiParams(args.alpha, args.beta),
            n=getattr(args, "n", 0),
            t=tup("t"),
            m=getattr(args, "m", 16),
            p=tup("p"),
            s=tup("s"),
            q=tup("q"),
            r=tup("r"),
            omegas=tup("omega"),
            omega_truncation=getattr(args, "omega_truncation", DEFAULT_WEIGHT_TRUNCATION),
            corpus=getattr(args, "corpus", "default"),
            items=tup("item"),
            ladder=getattr(args, "ladder", None),
            theorem=getattr(args, "theorem", "all"),
            fmt=args.format,
            out=args.out,
            seed=args.seed,
            max_degree=getattr(args, "max_degree", 200),
            permissive=getattr(args, "permissive", False),
            summary=getattr(args, "summary", False),
            check_grid=not getattr(args, "no_grid_check", False),
            duality_max_degree=getattr(args, "duality_max_degree", DEFAULT_DUALITY_MAX_DEGREE),
            progress=not args.quiet,
        )


@dataclass
class RunResult:
    records: List[Dict] = field(default_factory=list)
    low_confidence: bool = False


def setup_logging(level: str = "INFO", log_file: Optional[str] = None):
    """Configure logging for the application; stdout is reserved for reports"""
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def parse_ladder(text: str) -> Tuple[int, ...]:
    """`a..b` (doublings of a up to b) or a comma-separated list of degrees"""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
            if lo < 1 or hi < lo:
                raise ValueError(f"need 1 <= a <= b, got {lo}..{hi}")
            ladder = []
            while lo <= hi:
                ladder.append(lo)
                lo *= 2
            return tuple(ladder)
        return tuple(sorted({int(x) for x in text.split(",") if x.strip()}))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Bad ladder '{text}': {e}") from e


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--alpha', type=float, default=0.0, help='Jacobi alpha > -1 (default: 0)')
    common.add_argument('--beta', type=float, default=0.0, help='Jacobi beta > -1 (default: 0)')
    common.add_argument('--format', choices=['jsonl', 'csv'], default='jsonl',
                        help='Report format (default: jsonl)')
    common.add_argument('--out', '-o', default='-',
                        help='Report path, - for stdout (default: -)')
    common.add_argument('--seed', type=int, default=0,
                        help='Seed for randomized check points (default: 0)')
    common.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        default='INFO', help='Logging level (default: INFO)')
    common.add_argument('--log-file', help='Also write the log to this file')
    common.add_argument('--quiet', '-q', action='store_true', help='Hide progress bars')
    return common


def _weight_options(command: argparse.ArgumentParser):
    command.add_argument('--omega-truncation', type=int, default=DEFAULT_WEIGHT_TRUNCATION,
                         help=f'Truncation N_omega of pow/geo weights '
                              f'(default: {DEFAULT_WEIGHT_TRUNCATION})')


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments"""
    common = _common_parser()
    parser = argparse.ArgumentParser(
        description="Jacobi polynomial expansions and Paley / Hausdorff-Young coefficient "
                    "inequalities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python run_analysis.py eval --n 3 --t -0.5 0 0.5 --alpha 1 --beta 0
  python run_analysis.py quad --m 8 --alpha -0.5 --beta -0.5 --format csv
  python run_analysis.py transform --corpus default --item sign --max-degree 100
  python run_analysis.py mseq --omega pow:-2 geo:0.5
  python run_analysis.py verify --theorem hyp --p 1.5 --omega pow:-2 --summary
  python run_analysis.py verify --theorem all-b --q 3 --corpus corpus_example.json
  python run_analysis.py counterexample --omega pow:-2 --ladder 16..4096
        """
    )
    commands = parser.add_subparsers(dest='command', required=True)

    evaluate = commands.add_parser('eval', parents=[common],
                                   help='Evaluate P_n and its orthonormal version')
    evaluate.add_argument('--n', type=int, required=True, help='Polynomial degree')
    evaluate.add_argument('--t', type=float, nargs='+', required=True, help='Points in [-1, 1]')

    quad = commands.add_parser('quad', parents=[common], help='Gauss-Jacobi nodes and weights')
    quad.add_argument('--m', type=int, default=16, help='Number of nodes (default: 16)')

    transform = commands.add_parser('transform', parents=[common], help='Analyze corpus items')
    transform.add_argument('--corpus', default='default',
                           help='Built-in corpus name or JSON config path')
    transform.add_argument('--item', nargs='+', help='Only these corpus ids')
    transform.add_argument('--max-degree', type=int, default=200,
                           help='Truncation N (default: 200)')

    mseq = commands.add_parser('mseq', parents=[common], help='Paley weight constants')
    mseq.add_argument('--omega', nargs='+', help='Weights as pow:e, geo:r or table:path')
    mseq.add_argument('--corpus', default='default', help='Source of default weights')
    _weight_options(mseq)

    verify = commands.add_parser('verify', parents=[common], help='Inequality verification sweep')
    verify.add_argument('--theorem', choices=sorted(THEOREM_CHOICES), default='all',
                        help='Theorem part(s) to check (default: all analysis parts)')
    verify.add_argument('--p', type=float, nargs='+', help='Analysis exponents in (1, 2]')
    verify.add_argument('--s', type=float, nargs='+', help='HYP-a exponents in [p, p\']')
    verify.add_argument('--q', type=float, nargs='+', help='Synthesis exponents in [2, inf)')
    verify.add_argument('--r', type=float, nargs='+', help='HYP-b exponents in [q\', q]')
    verify.add_argument('--omega', nargs='+', help='Weights as pow:e, geo:r or table:path')
    verify.add_argument('--corpus', default='default',
                        help='Built-in corpus name or JSON config path')
    verify.add_argument('--ladder', type=parse_ladder,
                        help='Synthesis truncations, a..b or comma list')
    verify.add_argument('--max-degree', type=int, default=200, help='Truncation N (default: 200)')
    verify.add_argument('--permissive', action='store_true',
                        help='Report signed phi in the (b)-parts instead of failing')
    verify.add_argument('--summary', action='store_true',
                        help='Emit empirical constants instead of reports')
    _weight_options(verify)

    counter = commands.add_parser('counterexample', parents=[common],
                                  help='Divergence trace of g_N at p = 1')
    counter.add_argument('--omega', nargs=1, default=['pow:-2'], help='Weight (default: pow:-2)')
    counter.add_argument('--ladder', type=parse_ladder, default='16..4096',
                         help='Truncations, a..b or comma list')
    counter.add_argument('--no-grid-check', action='store_true',
                         help='Skip the grid sup consistency check')
    counter.add_argument('--duality-max-degree', type=int, default=DEFAULT_DUALITY_MAX_DEGREE,
                         help='Largest N that also gets the bump duality bound')
    _weight_options(counter)

    return parser.parse_args(argv)


def run_eval(config: RunConfig, result: RunResult):
    params = config.params
    for t in config.t:
        result.records.append({
            "alpha": params.alpha, "beta": params.beta, "n": config.n, "t": t,
            "value": eval_jacobi(params, config.n, t),
            "orthonormal": eval_orthonormal(params, config.n, t),
        })


def run_quad(config: RunConfig, result: RunResult):
    rule = gauss_jacobi_rule(config.params, config.m)
    mass_error = abs(float(np.sum(rule.weights)) - weight_mass(config.params))
    logger.info(f"{config.m}-point rule for {config.params}: weight sum error {mass_error:.3g}")
    result.records.extend(
        {"alpha": config.params.alpha, "beta": config.params.beta, "i": i, "node": x, "weight": w}
        for i, (x, w) in enumerate(zip(rule.nodes, rule.weights))
    )


def run_transform(config: RunConfig, result: RunResult):
    params = config.params
    items = CorpusBuilder(params).build(resolve_corpus(config.corpus).entries)
    if config.items:
        missing = [i for i in config.items if find_item(items, i) is None]
        if missing:
            raise PreconditionError(f"Unknown corpus ids: {', '.join(missing)}")
        items = [find_item(items, i) for i in config.items]

    rng = np.random.default_rng(config.seed)
    points = np.sort(rng.uniform(-1.0, 1.0, ROUNDTRIP_POINTS))
    for item in items:
        coeffs = analyze(item, config.max_degree, params)
        gap = parseval_gap(item, coeffs) if item.accepts(2.0) else None
        roundtrip = None
        if item.kind == "polynomial" and item.degree <= config.max_degree:
            roundtrip = float(np.max(np.abs(synthesize(coeffs, points) - item(points))))
        flags = ["low_confidence_coefficients"] if coeffs.low_confidence else []
        result.low_confidence |= coeffs.low_confidence
        within = None if gap is None or item.tail_bound is None else gap <= item.tail_bound
        result.records.append({
            "item": item.id, "alpha": params.alpha, "beta": params.beta, "N": coeffs.N,
            "tail_indicator": tail_indicator(coeffs),
            "parseval_gap": gap,
            "tail_bound": item.tail_bound,
            "within_tail_bound": within,
            "roundtrip_error": roundtrip,
            "coefficients": coeffs.values.tolist(),
            "flags": flags,
        })


def _omegas(config: RunConfig):
    if config.omegas:
        return [parse_omega(o, config.omega_truncation) for o in config.omegas]
    return resolve_corpus(config.corpus, config.omega_truncation).omegas


def run_mseq(config: RunConfig, result: RunResult):
    for omega in _omegas(config):
        m = compute_m_omega(omega, config.params)
        if m.divergent:
            flags = ["m_omega_divergent"]
        else:
            flags = ["m_omega_truncated"] if m.truncated else []
        result.low_confidence |= m.truncated and not m.divergent
        result.records.append({
            "omega": omega.id, "alpha": config.params.alpha, "beta": config.params.beta,
            "sigma": sigma(config.params), "m_omega": m.value, "attained_at": m.attained_at,
            "truncation": m.truncation, "truncated_value": m.truncated_value, "flags": flags,
        })


def run_verify(config: RunConfig, result: RunResult):
    params = config.params
    theorems = THEOREM_CHOICES[config.theorem]
    corpus = resolve_corpus(config.corpus, config.omega_truncation)
    omegas = _omegas(config) if config.omegas else corpus.omegas

    sweep = SweepConfig(theorems=theorems, max_degree=config.max_degree,
                        permissive=config.permissive, progress=config.progress)
    if config.p:
        sweep.p_grid = config.p
    if config.q:
        sweep.q_grid = config.q
    sweep.s_values = config.s or None
    sweep.r_values = config.r or None

    if set(theorems) <= set(SYNTHESIS_THEOREMS):
        reports = verify_synthesis_sweep(corpus.phis, params, omegas, sweep, ladder=config.ladder)
    else:
        items = CorpusBuilder(params).build(corpus.entries)
        reports = verify_sweep(items, params, omegas, sweep)

    result.low_confidence |= any(set(r.flags) & LOW_CONFIDENCE_FLAGS for r in reports)
    if config.summary:
        result.records.extend(summarize_reports(reports).to_dict("records"))
    else:
        result.records.extend(r.to_record() for r in reports)


def run_counterexample(config: RunConfig, result: RunResult):
    params = config.params
    omega = parse_omega(config.omegas[0] if config.omegas else "pow:-2", config.omega_truncation)
    trace = divergence_trace(omega, params, config.ladder or DEFAULT_LADDER,
                             check_grid=config.check_grid, progress=config.progress, strict=False)

    frame = trace.to_frame()
    oriented = oriented_params(params)
    trials = bump_trials(oriented)
    frame["duality_bound"] = [
        duality_check(build_gn(omega, oriented, int(N)), trials)
        if N <= config.duality_max_degree else None
        for N in frame["N"]
    ]
    frame.insert(0, "omega", omega.id)
    frame.insert(1, "alpha", params.alpha)
    frame.insert(2, "beta", params.beta)
    frame["m_omega"] = trace.m_omega.value
    frame["budgets_diverging"] = trace.budgets_diverging
    result.records.extend(frame.to_dict("records"))
    result.low_confidence |= trace.m_omega.truncated and not trace.m_omega.divergent
    result.low_confidence |= not trace.is_consistent


RUNNERS = {
    "eval": run_eval,
    "quad": run_quad,
    "transform": run_transform,
    "mseq": run_mseq,
    "verify": run_verify,
    "counterexample": run_counterexample,
}


def _plain(value):
    """JSON-safe scalar: numpy types unwrapped, NaN and infinities as null"""
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def format_records(records: Iterable[Dict], fmt: str) -> str:
    """Reports as JSON lines or CSV text, deterministic for identical input"""
    rows = [{key: _plain(value) for key, value in record.items()} for record in records]
    if fmt == "jsonl":
        return "".join(json.dumps(row) + "\n" for row in rows)
    flat = [
        {key: ";".join(map(str, v)) if isinstance(v, list) else v for key, v in row.items()}
        for row in rows
    ]
    return pd.DataFrame(flat).to_csv(index=False, lineterminator="\n")


def write_report(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    logger.info(f"Report written to {path}")


def run(config: RunConfig) -> int:
    """Dispatch one command and write its report; returns the exit status

    ConvergenceError and InconsistencyError are re-raised after the records
    collected so far have been written.
    """
    result = RunResult()
    try:
        RUNNERS[config.command](config, result)
    except (ConvergenceError, InconsistencyError):
        write_report(format_records(result.records, config.fmt), config.out)
        logger.warning(f"{config.command}: partial report with {len(result.records)} records")
        raise
    write_report(format_records(result.records, config.fmt), config.out)
    logger.info(f"{config.command}: {len(result.records)} records")
    if result.low_confidence:
        logger.warning("Report contains low-confidence values")
        return EXIT_LOW_CONFIDENCE
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main execution function"""
    try:
        args = parse_arguments(argv)
    except SystemExit as e:
        # argparse exits with 2 on bad arguments and 0 after --help
        return int(e.code or 0)

    setup_logging(args.log_level, args.log_file)

    try:
        config = RunConfig.from_args(args)
        return run(config)

    except (PreconditionError, ValueError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_CONFIG

    except (ConvergenceError, InconsistencyError) as e:
        logger.error(f"Numerical failure: {e}")
        logger.debug("Full error details:", exc_info=True)
        return EXIT_LOW_CONFIDENCE

    except KeyboardInterrupt:
        logger.info("Run interrupted by user")
        return EXIT_FAILURE

    except Exception as e:
        logger.error(f"Run failed: {e}")
        logger.debug("Full error details:", exc_info=True)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
