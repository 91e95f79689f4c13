"""
Command-line front-end for the linearizability monitor.
Subcommands: check, generate, bench.
"""
import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from colorama import init, Fore

from src import config
from src.bench import BenchPlan, run_bench
from src.framework import Stage
from src.generator import GenConfig, MutationKind, generate_linearizable, mutate
from src.model import AdtKind, HistoryParseError, HistoryValidationError, parse_history, serialize_history
from src.monitor import Monitor, OracleBudgetExceeded
from src.oracle import OracleBudget

# Initialize colorama for cross-platform colored terminal output
init(autoreset=True)

logger = logging.getLogger(__name__)

EXIT_LINEARIZABLE = 0
EXIT_NON_LINEARIZABLE = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3


def _adt(text: str) -> AdtKind:
    try:
        return AdtKind.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _sizes(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from None


def check_file(path: str, fmt: str, adt: Optional[AdtKind], engine: str,
               witness: bool = False) -> Tuple[int, Dict[str, Any]]:
    """
    Check one history file.

    Returns:
        (exit code, JSON-ready payload)
    """
    try:
        text = Path(path).read_bytes()
        history = parse_history(text, fmt, adt)
        budget = OracleBudget(config.ORACLE_MAX_OPS, config.ORACLE_MAX_STATES)
        report = Monitor(engine, budget).check(history)
    except HistoryParseError as e:
        return EXIT_INPUT_ERROR, {"input": path, "error": str(e), "stage": "parse", "line": e.line}
    except HistoryValidationError as e:
        return EXIT_INPUT_ERROR, {
            "input": path, "error": str(e), "stage": Stage.VALIDATION.value,
            "violations": e.violations, "ambiguous_values": e.ambiguous,
        }
    except OSError as e:
        return EXIT_INPUT_ERROR, {"input": path, "error": str(e), "stage": "io"}
    except OracleBudgetExceeded as e:
        return EXIT_INTERNAL_ERROR, {"input": path, "error": str(e), "stage": "oracle",
                                     "verdict": "BUDGET_EXCEEDED"}
    except Exception as e:
        logger.exception("internal error while checking %s", path)
        return EXIT_INTERNAL_ERROR, {"input": path, "error": f"internal error: {e}", "stage": "internal"}

    payload = report.to_dict()
    if not witness:
        payload.pop("witness", None)
    payload["input"] = path
    code = EXIT_LINEARIZABLE if report.linearizable else EXIT_NON_LINEARIZABLE
    return code, payload


def _check_job(job: Tuple[str, str, Optional[AdtKind], str, bool]) -> Tuple[int, Dict[str, Any]]:
    return check_file(*job)


def _print_check(code: int, payload: Dict[str, Any]) -> None:
    print(Fore.CYAN + "-" * 70)
    print(Fore.CYAN + f"📄 {payload.get('input')}")
    if "error" in payload:
        print(Fore.RED + f"❌ {payload['stage']} error: {payload['error']}")
        for violation in payload.get("violations", []):
            print(Fore.WHITE + f"   • {violation}")
        return
    for warning in payload.get("warnings", []):
        print(Fore.YELLOW + f"⚠️  {warning}")
    colour = Fore.GREEN if code == EXIT_LINEARIZABLE else Fore.RED
    mark = "✅" if code == EXIT_LINEARIZABLE else "❌"
    print(colour + f"{mark} {payload['verdict']} ({payload['adt']}, {payload['n_ops']} ops, "
                   f"stage {payload['stage']}, {payload['elapsed_ns'] / 1e6:.3f} ms)")
    if payload.get("reason"):
        print(Fore.WHITE + f"   {payload['reason']}")
    if payload.get("witness"):
        print(Fore.WHITE + f"   witness: {payload['witness']}")


def cmd_check(args: argparse.Namespace) -> int:
    engine = "oracle" if args.oracle else args.engine
    jobs = [(path, args.format, args.adt, engine, args.witness) for path in args.input]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_check_job, jobs))
    else:
        results = [_check_job(job) for job in jobs]

    for code, payload in results:
        if args.json:
            print(json.dumps(payload, sort_keys=True))
        else:
            _print_check(code, payload)
    return max(code for code, _ in results)


def cmd_generate(args: argparse.Namespace) -> int:
    cfg = GenConfig(
        adt=args.adt, n_ops=args.ops, n_procs=args.procs, seed=args.seed,
        peek_ratio=args.peek_ratio, fail_ratio=args.fail_ratio, empty_ratio=args.empty_ratio,
        relax=args.relax, max_values=args.max_values, roles=args.roles,
        n_producers=args.producers,
    )
    try:
        history = generate_linearizable(cfg)
    except ValueError as e:
        print(Fore.RED + f"❌ Invalid configuration: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    verdict = "linearizable"
    changed = None
    if args.mutate:
        history, changed = mutate(history, MutationKind(args.mutate), args.seed)
        verdict = "unknown"

    text = serialize_history(history, "ops")
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)

    summary = {
        "schema_version": config.JSON_SCHEMA_VERSION,
        "adt": cfg.adt.value, "n_ops": len(history), "seed": cfg.seed,
        "path": args.out, "verdict": verdict, "mutation": args.mutate, "changed": changed,
    }
    # keep stdout clean for the history itself when no --out is given
    print(json.dumps(summary, sort_keys=True), file=sys.stdout if args.out else sys.stderr)
    return EXIT_LINEARIZABLE


def cmd_bench(args: argparse.Namespace) -> int:
    plan = BenchPlan(
        adt=args.adt, sizes=tuple(args.sizes), reps=args.reps, seed=args.seed,
        include_mutants=args.include_mutants, engine=args.engine, n_procs=args.procs,
        jobs=args.jobs,
    )
    try:
        plan.validate()
    except ValueError as e:
        print(Fore.RED + f"❌ Invalid plan: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    csv_path = args.csv or str(Path(config.BENCH_OUTPUT_PATH) / f"bench_{plan.adt.value}.csv")
    summary = run_bench(plan, csv_path)
    print(json.dumps(summary, sort_keys=True))
    for warning in summary["warnings"]:
        print(Fore.YELLOW + f"⚠️  {warning}", file=sys.stderr)
    return EXIT_INTERNAL_ERROR if summary["errors"] else EXIT_LINEARIZABLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linmon",
        description="Linearizability monitoring for register, set, stack, queue and priority-queue histories",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log debug output to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="Check one or more history files")
    check.add_argument("--input", nargs="+", required=True, metavar="PATH")
    check.add_argument("--adt", type=_adt, help="ADT when the file has no 'adt' header")
    check.add_argument("--format", choices=["ops", "events"], default="ops")
    check.add_argument("--engine", choices=["fast", "naive", "oracle"], default="fast")
    check.add_argument("--oracle", action="store_true", help="Same as --engine oracle")
    check.add_argument("--witness", action="store_true", help="Include the oracle's linearization")
    check.add_argument("--json", action="store_true", help="One JSON report per input on stdout")
    check.add_argument("--jobs", type=int, default=1, help="Worker processes across input files")
    check.set_defaults(handler=cmd_check)

    gen = sub.add_parser("generate", help="Generate a linearizable history")
    gen.add_argument("--adt", type=_adt, required=True)
    gen.add_argument("--ops", type=int, required=True)
    gen.add_argument("--procs", type=int, default=4)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--peek-ratio", type=float, default=0.2)
    gen.add_argument("--fail-ratio", type=float, default=None)
    gen.add_argument("--empty-ratio", type=float, default=None)
    gen.add_argument("--relax", type=int, default=3)
    gen.add_argument("--max-values", type=int, default=None)
    gen.add_argument("--roles", choices=["mixed", "producer_consumer"], default="mixed")
    gen.add_argument("--producers", type=int, default=None)
    gen.add_argument("--mutate", choices=[k.value for k in MutationKind])
    gen.add_argument("--out", metavar="PATH")
    gen.set_defaults(handler=cmd_generate)

    bench = sub.add_parser("bench", help="Time checks over growing history sizes")
    bench.add_argument("--adt", type=_adt, required=True)
    bench.add_argument("--sizes", type=_sizes, required=True, help="e.g. 125000,250000,500000,1000000")
    bench.add_argument("--reps", type=int, default=config.BENCH_REPS)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--procs", type=int, default=40)
    bench.add_argument("--engine", choices=["fast", "naive"], default="fast")
    bench.add_argument("--include-mutants", action="store_true")
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--csv", metavar="PATH")
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, configure logging and run the chosen subcommand."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        format=config.LOG_FORMAT,
        level=logging.DEBUG if args.verbose else config.LOG_LEVEL,
        stream=sys.stderr,
    )
    try:
        config.validate_config()
        return args.handler(args)
    except ValueError as e:
        print(Fore.RED + f"❌ Configuration Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except Exception as e:
        logger.exception("unexpected failure")
        print(Fore.RED + f"❌ Internal Error: {e}", file=sys.stderr)
        return EXIT_INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
