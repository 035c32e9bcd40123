#!/usr/bin/env python3
"""
Min-diameter toolkit command line.

Subcommands:
  exact            exact (bichromatic) min-diameter by the oracle
  approx           min-diameter estimate of an unweighted DAG (--mode half|exact32)
  bichrom approx   bichromatic min-diameter estimate of a 2-colored DAG
  bichrom finite   whether every red-blue pair has finite min-distance
  gen              gadget, random graph or OV instance files
  verify           oracle-vs-approximation sweep over the regression seeds
  bench            timing over seeded random DAGs

Reports go to standard output as key=value lines, logs to standard error.
Exit codes: 0 success, 1 unexpected error, 2 verification violation,
64 usage error, 74 I/O or file format error.
"""

import sys
import argparse
import logging
import time
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

try:
    from .bench import BENCH_MODES, BENCH_SIZES, build_bench_tasks
    from .bichromatic import approx_bichrom, bichrom_finite
    from .config_loader import SolverSettings, load_config
    from .errors import GraphFileError, MinDiamError, MissingColor, UsageError
    from .generators import (gen_bichrom_dag_lb, gen_bichrom_unweighted_lb,
                             gen_bichrom_weighted_lb, gen_mindiam_lb, gen_ov,
                             gen_random_dag, gen_random_digraph)
    from .graph_io import GraphFile, certificate_comment, read_graph, serialize_graph, serialize_ov, write_text
    from .mindiam import Mode, TesterParams, approx_mindiam
    from .oracle import exact_bichrom_min_diameter, exact_min_diameter
    from .report_models import EstimateReport, FiniteReport
    from .result_exporter import export_records, format_report
    from .verifier import (REGRESSION_SEEDS, VERIFY_SIZES, build_verify_tasks, collect_verification,
                          format_verification_report)
except ImportError:
    from bench import BENCH_MODES, BENCH_SIZES, build_bench_tasks
    from bichromatic import approx_bichrom, bichrom_finite
    from config_loader import SolverSettings, load_config
    from errors import GraphFileError, MinDiamError, MissingColor, UsageError
    from generators import (gen_bichrom_dag_lb, gen_bichrom_unweighted_lb,
                            gen_bichrom_weighted_lb, gen_mindiam_lb, gen_ov,
                            gen_random_dag, gen_random_digraph)
    from graph_io import GraphFile, certificate_comment, read_graph, serialize_graph, serialize_ov, write_text
    from mindiam import Mode, TesterParams, approx_mindiam
    from oracle import exact_bichrom_min_diameter, exact_min_diameter
    from report_models import EstimateReport, FiniteReport
    from result_exporter import export_records, format_report
    from verifier import (REGRESSION_SEEDS, VERIFY_SIZES, build_verify_tasks, collect_verification,
                          format_verification_report)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SOFTWARE = 1
EXIT_VIOLATION = 2
EXIT_USAGE = 64
EXIT_IO = 74

GADGET_KINDS = ("mindiam", "bichrom-dag", "bichrom-unweighted", "bichrom-weighted")


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def setup_logging(log_level: str = "WARNING") -> None:
    """Setup logging configuration; stdout is reserved for reports."""
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stderr),
        ]
    )


def _size(text: str) -> Tuple[int, int]:
    n, sep, m = text.lower().partition("x")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NxM, got {text!r}")
    try:
        return int(n), int(m)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NxM, got {text!r}") from None


def build_parser() -> CliArgumentParser:
    common = CliArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON settings file")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="WARNING",
        help="Logging level (logs go to stderr)"
    )
    common.add_argument("--timeout-ms", type=int, help="Time limit for one estimate")

    graph_input = CliArgumentParser(add_help=False)
    graph_input.add_argument("file", nargs="?", default="-", help="Graph file ('-' for stdin)")

    parser = CliArgumentParser(prog="mindiam", description="Min-diameter approximation toolkit")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CliArgumentParser)

    exact = commands.add_parser("exact", parents=[common, graph_input], help="Exact value by the oracle")
    exact.add_argument("--oracle-max-n", type=int, help="Refuse graphs larger than this")

    approx = commands.add_parser("approx", parents=[common, graph_input], help="Min-diameter estimate")
    approx.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.HALF.value)
    approx.add_argument("--k", type=int, help="Override the cover size parameter k")
    approx.add_argument("--audit", action="store_true", default=None,
                        help="Re-check every engulf step against exact distances")

    bichrom = commands.add_parser("bichrom", help="Bichromatic min-diameter")
    bichrom_commands = bichrom.add_subparsers(dest="bichrom_command", required=True,
                                              parser_class=CliArgumentParser)
    bichrom_commands.add_parser("approx", parents=[common, graph_input], help="(2, M) estimate")
    bichrom_commands.add_parser("finite", parents=[common, graph_input], help="Finiteness check")

    gen = commands.add_parser("gen", help="Generate instances")
    gen_commands = gen.add_subparsers(dest="gen_command", required=True, parser_class=CliArgumentParser)
    gen_common = CliArgumentParser(add_help=False)
    gen_common.add_argument("--n", type=int, required=True)
    gen_common.add_argument("--seed", type=int)
    gen_common.add_argument("--output", default="-", help="Output file ('-' for stdout)")

    gadget = gen_commands.add_parser("gadget", parents=[common, gen_common], help="OV gadget graph")
    gadget.add_argument("--kind", choices=GADGET_KINDS, required=True)
    gadget.add_argument("--t", type=int, default=2)
    gadget.add_argument("--planted", action=argparse.BooleanOptionalAction, default=False)
    gadget.add_argument("--d", type=int, help="OV dimension")

    random_graph = gen_commands.add_parser("random", parents=[common, gen_common], help="Random 2-colored graph")
    random_graph.add_argument("--m", type=int, help="Edge count (default min(2n, n(n-1)/2))")
    random_graph.add_argument("--max-weight", type=int, default=1)
    random_graph.add_argument("--red-fraction", type=float, default=0.5)
    random_graph.add_argument("--cycle-bias", type=float, default=0.0,
                              help="Probability of a backward edge; 0 gives a DAG")
    random_graph.add_argument("--spine", action="store_true", help="Hamiltonian path backbone")
    random_graph.add_argument("--separated", action="store_true", help="All red before all blue")

    ov = gen_commands.add_parser("ov", parents=[common, gen_common], help="OV instance")
    ov.add_argument("--d", type=int, help="Vector dimension")
    ov.add_argument("--planted", action=argparse.BooleanOptionalAction, default=False)

    verify = commands.add_parser("verify", parents=[common], help="Envelope and certificate sweep")
    verify.add_argument("--seeds", type=int, nargs="+", default=list(REGRESSION_SEEDS))
    verify.add_argument("--sizes", type=_size, nargs="+", help="Instance sizes as NxM")
    verify.add_argument("--no-gadgets", action="store_true", help="Skip gadget certificates")
    verify.add_argument("--workers", type=int)
    verify.add_argument("--output", type=Path, help="Export records (.xlsx or .csv)")

    bench = commands.add_parser("bench", parents=[common], help="Timing over random DAGs")
    bench.add_argument("--seeds", type=int, nargs="+")
    bench.add_argument("--sizes", type=_size, nargs="+", default=list(BENCH_SIZES))
    bench.add_argument("--modes", choices=BENCH_MODES, nargs="+", default=list(BENCH_MODES))
    bench.add_argument("--oracle", action="store_true", help="Compare with the oracle when n is small")
    bench.add_argument("--workers", type=int)
    bench.add_argument("--output", type=Path, help="Export records (.xlsx or .csv)")

    return parser


def _settings(args) -> SolverSettings:
    overrides = {
        "k": getattr(args, "k", None),
        "timeout_ms": args.timeout_ms,
        "seed": getattr(args, "seed", None),
        "workers": getattr(args, "workers", None),
        "oracle_max_n": getattr(args, "oracle_max_n", None),
        "audit": getattr(args, "audit", None),
    }
    return load_config(args.config, overrides)


def _emit(lines: Sequence[str]) -> None:
    for line in lines:
        print(line)


def _colored(graph_file: GraphFile, command: str):
    if graph_file.colors is None:
        raise MissingColor(f"'{command}' needs color lines ('c <v> R|B') in the graph file")
    return graph_file.colors


def _batch_processor(settings: SolverSettings, log_level: str):
    try:
        from processing.processor import BatchProcessor
    except ImportError:
        sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
        from processing.processor import BatchProcessor
    return BatchProcessor(workers=settings.workers, log_level=log_level)


def run_exact(args, settings: SolverSettings) -> int:
    graph_file = read_graph(args.file)
    g = graph_file.graph
    start = time.perf_counter()
    value = exact_min_diameter(g, settings.oracle_max_n)
    bichromatic = None
    if graph_file.colors is not None:
        bichromatic = exact_bichrom_min_diameter(g, graph_file.colors, settings.oracle_max_n)
    report = EstimateReport(command="exact", n=g.n, m=g.m, value=value, lower=value, upper=value,
                            bichromatic=bichromatic, wall_time_s=round(time.perf_counter() - start, 6))
    _emit(format_report(report))
    return EXIT_OK


def run_approx(args, settings: SolverSettings) -> int:
    g = read_graph(args.file).graph
    mode = Mode(args.mode)
    params = TesterParams.for_graph(g.n, g.m, mode, k=settings.k,
                                    interval_size=settings.interval_size,
                                    base_case_threshold=settings.base_case_threshold,
                                    audit=settings.audit)
    start = time.perf_counter()
    estimate = approx_mindiam(g, mode, params, timeout_ms=settings.timeout_ms)
    report = EstimateReport(command="approx", mode=mode.value, n=g.n, m=g.m, value=estimate.value,
                            lower=estimate.lower, upper=estimate.upper, probes=len(estimate.probes),
                            timed_out=estimate.timed_out,
                            wall_time_s=round(time.perf_counter() - start, 6))
    _emit(format_report(report))
    return EXIT_OK


def run_bichrom(args, settings: SolverSettings) -> int:
    graph_file = read_graph(args.file)
    g = graph_file.graph
    colors = _colored(graph_file, f"bichrom {args.bichrom_command}")
    start = time.perf_counter()

    if args.bichrom_command == "finite":
        finite = bichrom_finite(g, colors)
        report = FiniteReport(n=g.n, m=g.m, finite=finite,
                              wall_time_s=round(time.perf_counter() - start, 6))
    else:
        estimate = approx_bichrom(g, colors, timeout_ms=settings.timeout_ms)
        report = EstimateReport(command="bichrom approx", mode=estimate.mode, n=g.n, m=g.m,
                                value=estimate.value, lower=estimate.lower, upper=estimate.upper,
                                probes=len(estimate.probes), M=estimate.M,
                                ratio_bound=estimate.ratio_bound(), timed_out=estimate.timed_out,
                                wall_time_s=round(time.perf_counter() - start, 6))
    _emit(format_report(report))
    return EXIT_OK


def _gadget(kind: str, ov, t: int):
    if kind == "mindiam":
        return gen_mindiam_lb(ov, t)
    if kind == "bichrom-dag":
        return gen_bichrom_dag_lb(ov, t)
    if kind == "bichrom-unweighted":
        return gen_bichrom_unweighted_lb(ov)
    return gen_bichrom_weighted_lb(ov, t)


def run_gen(args, settings: SolverSettings) -> int:
    seed = settings.seed
    if args.gen_command == "ov":
        ov = gen_ov(args.n, d=args.d, planted=args.planted, seed=seed)
        write_text(serialize_ov(ov), args.output)
        return EXIT_OK

    if args.gen_command == "gadget":
        ov = gen_ov(args.n, d=args.d, planted=args.planted, seed=seed)
        gadget = _gadget(args.kind, ov, args.t)
        cert = gadget.certificate
        comments = [
            f"gadget kind={gadget.kind} n={args.n} planted={str(args.planted).lower()} seed={seed}",
            f"orthogonal={str(gadget.orthogonal).lower()} expected={gadget.expected_diameter}",
            certificate_comment(cert.yes_bound, cert.no_bound, cert.t),
        ]
        text = serialize_graph(gadget.graph, gadget.colors, comments)
    else:
        n = args.n
        m = args.m if args.m is not None else min(2 * n, n * (n - 1) // 2)
        if args.cycle_bias > 0:
            g, colors = gen_random_digraph(n, m, seed=seed, max_weight=args.max_weight,
                                           red_fraction=args.red_fraction, cycle_bias=args.cycle_bias)
        else:
            g, colors = gen_random_dag(n, m, seed=seed, max_weight=args.max_weight,
                                       red_fraction=args.red_fraction, separated=args.separated,
                                       spine=args.spine)
        text = serialize_graph(g, colors, [f"random n={n} m={m} seed={seed}"])

    write_text(text, args.output)
    return EXIT_OK


def run_verify(args, settings: SolverSettings) -> int:
    tasks = build_verify_tasks(args.seeds, args.sizes or VERIFY_SIZES,
                               timeout_ms=settings.timeout_ms, gadgets=not args.no_gadgets)
    processor = _batch_processor(settings, args.log_level)
    results = processor.run(tasks)
    result = collect_verification((r.task_name, r.payload, r.error_message) for r in results)

    for line in format_verification_report(result):
        print(line, file=sys.stderr)
    _emit([
        "command=verify",
        f"status={'passed' if result.is_valid else 'failed'}",
        f"checks={result.metrics.get('checks', 0)}",
        f"violations={len(result.errors)}",
        f"warnings={len(result.warnings)}",
    ])
    if args.output:
        export_records(result.records, args.output, sheet_name='Verification',
                       metadata={'seeds': ' '.join(map(str, args.seeds)), **result.metrics})

    if not result.is_valid:
        logger.error(f"Verification found {len(result.errors)} violations")
        return EXIT_VIOLATION
    return EXIT_OK


def run_bench(args, settings: SolverSettings) -> int:
    seeds = args.seeds or [settings.seed]
    oracle_max_n = settings.oracle_max_n if args.oracle else 0
    tasks = build_bench_tasks(seeds, args.sizes, args.modes, oracle_max_n, settings.timeout_ms)
    processor = _batch_processor(settings, args.log_level)
    results = processor.run(tasks)

    records = []
    for result in results:
        if not result.success:
            logger.error(f"{result.task_name}: {result.error_message}")
            continue
        records.append(result.payload)
        _emit(format_report(result.payload) + [""])

    if args.output:
        export_records(records, args.output, sheet_name='Benchmark',
                       metadata={'seeds': ' '.join(map(str, seeds)), 'workers': settings.workers})
    return EXIT_OK if len(records) == len(results) else EXIT_SOFTWARE


COMMANDS = {
    "exact": run_exact,
    "approx": run_approx,
    "bichrom": run_bichrom,
    "gen": run_gen,
    "verify": run_verify,
    "bench": run_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main function; returns the process exit code."""

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK

    # Setup logging
    setup_logging(args.log_level)

    try:
        settings = _settings(args)
        return COMMANDS[args.command](args, settings)

    except (GraphFileError, OSError) as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO
    except MinDiamError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        logger.exception("Full traceback:")
        return EXIT_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
