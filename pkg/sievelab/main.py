"""
Command-line front end. Every run prints one document, JSON by default:

    {"header": <resolved RunConfig>, "result": <payload>}

Exit codes: 0 when the run's claim is verified, 1 when it is not, 2 for
invalid input.
"""

import argparse
import json
import logging
import sys
from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel

from sievelab import __version__
from sievelab.config import get_config, get_section
from sievelab.engine import SieveLabEngine
from sievelab.errors import InvalidInputError, SearchExhaustedError, SieveLabError
from sievelab.models.covering_models import StrategyType
from sievelab.models.optimizer_models import GENERALIZED_EH_GAP_BOUND
from sievelab.models.prime_models import GrowthTable, IntervalCountReport
from sievelab.models.run_models import OutputFormat, RunConfig
from sievelab.models.settings_models import OptimizerSettings
from sievelab.models.simplex_models import BasisFamily
from sievelab.tuples.admissible import load_tuple_file

logger = logging.getLogger("sievelab")

EXIT_OK = 0
EXIT_UNVERIFIED = 1
EXIT_USAGE = 2

GLOBAL_FLAGS = ("command", "action", "seed", "format", "out", "threads", "verbose", "handler")


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _auto_int(text: str) -> Optional[int]:
    return None if text == "auto" else int(text)


def _auto_float(text: str) -> Optional[float]:
    return None if text == "auto" else float(text)


def _encode(value: Any):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, BaseModel):
        return value.model_dump()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _rows(result) -> list:
    if isinstance(result, GrowthTable):
        return result.rows
    if isinstance(result, IntervalCountReport):
        return [{"primes": count, "x_count": n} for count, n in sorted(result.histogram.items())]
    if isinstance(result, list):
        return result
    return [result]


def render(config: RunConfig, result) -> str:
    if config.format is OutputFormat.CSV:
        records = json.loads(json.dumps(_rows(result), default=_encode))
        return pd.json_normalize(records).to_csv(index=False)
    document = {"header": config.model_dump(mode="json"), "result": result}
    return json.dumps(document, default=_encode, sort_keys=True, indent=2) + "\n"


# Subcommand handlers return (result, verified) ---------------------------------


def cmd_optimize(engine: SieveLabEngine, args) -> Tuple[Any, bool]:
    if args.k_range:
        if args.target is None:
            raise InvalidInputError("--k-range needs --target")
        try:
            found = engine.certify_min_k(
                args.target, tuple(args.k_range), degrees=args.degrees, family=args.family
            )
        except SearchExhaustedError as e:
            logger.error("%s", e)
            return {"certified": False, "reason": str(e), "log": e.log}, False
        document = found.certificate.to_document()
        document["log"] = found.log
        return document, True

    if args.k is None:
        raise InvalidInputError("optimize needs --k or --k-range")
    certificate = engine.optimize(
        args.k,
        family=args.family,
        max_degree=args.max_degree,
        target=args.target,
        tolerance=args.tolerance,
    )
    verified = certificate.exceeds_target if args.target is not None else True
    return certificate.to_document(), verified


def cmd_tuple(engine: SieveLabEngine, args) -> Tuple[Any, bool]:
    if args.action == "verify":
        if args.file:
            shifts = load_tuple_file(args.file)
        elif args.shifts:
            shifts = args.shifts
        else:
            raise InvalidInputError("tuple verify needs shifts or --file")
        report = engine.verify_tuple(shifts)
        result = {
            "shifts": [h - shifts[0] for h in shifts],
            "k": len(shifts),
            "diameter": shifts[-1] - shifts[0],
            "report": report,
        }
        return result, report.admissible
    if args.action == "search":
        return engine.search_tuple(args.k, args.budget), True
    return engine.shifted_primes_tuple(args.k), True


def cmd_cover(engine: SieveLabEngine, args) -> Tuple[Any, bool]:
    outcome = engine.cover(
        args.strategy, args.x, y=args.y, z=args.z, seed=args.seed, emit_witness=args.emit_witness
    )
    if not outcome.cover.covered:
        logger.warning(
            "%d elements uncovered, first %s",
            len(outcome.cover.uncovered),
            outcome.cover.uncovered[:10],
        )
    verified = outcome.cover.covered and outcome.witness_verified is not False
    return outcome, verified


def cmd_cover_grid(engine: SieveLabEngine, args) -> Tuple[Any, bool]:
    seeds = list(range(args.seed, args.seed + args.seeds))
    rows = []
    for strategy in args.strategies:
        for x in args.x:
            for result in engine.cover_ensemble(strategy, x, seeds):
                rows.append({"x": x, "strategy": strategy, "y": result.y, "seed": result.seed})
    return rows, True


def cmd_gaps(engine: SieveLabEngine, args) -> Tuple[Any, bool]:
    if args.action == "scan":
        return engine.gaps_scan(args.limit), True
    if args.action == "curves":
        return engine.gaps_curves(args.limit, args.step), True
    return engine.gaps_intervals(args.X, args.y, c=args.c, samples=args.samples), True


def cmd_expect(engine: SieveLabEngine, args) -> Tuple[Any, bool]:
    if args.pipeline:
        result = engine.pipeline(
            args.theta, tuple(args.k_range), degrees=args.degrees, family=args.family
        )
        return result, result.certified
    if args.ratio is None:
        raise InvalidInputError("expect needs --ratio unless --pipeline is given")
    result = engine.expect(args.ratio, args.theta)
    document = result.model_dump()
    document["generalized_eh_gap_bound"] = GENERALIZED_EH_GAP_BOUND
    return document, True


def cmd_concentrate(engine: SieveLabEngine, args) -> Tuple[Any, bool]:
    return engine.concentrate(args.k, args.samples, args.threshold, args.seed), True


def cmd_weights(engine: SieveLabEngine, args) -> Tuple[Any, bool]:
    return engine.weights(args.shifts, args.R, args.X, ell=args.ell, gpy=args.gpy), True


def cmd_prime_class(engine: SieveLabEngine, args) -> Tuple[Any, bool]:
    return engine.prime_class(args.q, args.bound), True


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sievelab", description="Sieve and prime-gap experiments with verifiable output."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, default=0, help="Seed for every randomized step")
    parser.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value
    )
    parser.add_argument("--out", help="Write the document here instead of stdout")
    parser.add_argument("--threads", type=int, help="Cap on worker threads")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    families = [f.value for f in BasisFamily]
    p = sub.add_parser("optimize", help="Certify sum J / I > target on a symmetric basis")
    p.add_argument("--k", type=int)
    p.add_argument("--k-range", type=int, nargs=2, metavar=("LOW", "HIGH"))
    p.add_argument("--family", choices=families)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--degrees", type=_int_list, help="Basis schedule for --k-range, e.g. 5,11,23")
    p.add_argument("--target")
    p.add_argument("--tolerance", type=float)
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("tuple", help="Admissible tuples")
    tuple_sub = p.add_subparsers(dest="action", required=True)
    t = tuple_sub.add_parser("verify")
    t.add_argument("shifts", nargs="?", type=_int_list)
    t.add_argument("--file")
    t = tuple_sub.add_parser("search")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--budget", type=int)
    t = tuple_sub.add_parser("shifted-primes")
    t.add_argument("--k", type=int, required=True)
    p.set_defaults(handler=cmd_tuple)

    strategies = [s.value for s in StrategyType]
    p = sub.add_parser("cover", help="Cover {1..y} by one residue class per prime <= x")
    p.add_argument("--strategy", choices=strategies, default=StrategyType.ERDOS_RANKIN.value)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=_auto_int, default=None, help="Integer or 'auto'")
    p.add_argument("--z", type=_auto_float, default=None, help="Float or 'auto'")
    p.add_argument("--emit-witness", action="store_true")
    p.set_defaults(handler=cmd_cover)

    p = sub.add_parser("cover-grid", help="Largest covered y over x, strategies and seeds")
    p.add_argument("--x", type=_int_list, required=True)
    p.add_argument("--strategies", type=lambda s: s.split(","), default=strategies)
    p.add_argument("--seeds", type=int, default=1, help="Seeds seed, seed + 1, ..")
    p.set_defaults(handler=cmd_cover_grid)

    p = sub.add_parser("gaps", help="Prime gap statistics")
    gaps_sub = p.add_subparsers(dest="action", required=True)
    g = gaps_sub.add_parser("scan")
    g.add_argument("--limit", type=int, required=True)
    g = gaps_sub.add_parser("curves")
    g.add_argument("--limit", type=int, required=True)
    g.add_argument("--step", type=int, required=True)
    g = gaps_sub.add_parser("intervals")
    g.add_argument("--X", type=int, required=True)
    g.add_argument("--y", type=int, required=True)
    g.add_argument("--c", type=float, default=1.0)
    g.add_argument("--samples", type=int)
    p.set_defaults(handler=cmd_gaps)

    p = sub.add_parser("expect", help="Primes guaranteed by a ratio at level theta")
    p.add_argument("--ratio")
    p.add_argument("--theta", default="1/2")
    p.add_argument("--pipeline", action="store_true", help="Run theta -> k -> tuple -> gap bound")
    p.add_argument("--k-range", type=int, nargs=2, default=[2, 60], metavar=("LOW", "HIGH"))
    p.add_argument("--degrees", type=_int_list)
    p.add_argument("--family", choices=families)
    p.set_defaults(handler=cmd_expect)

    p = sub.add_parser("concentrate", help="Product-measure concentration estimates")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(handler=cmd_concentrate)

    p = sub.add_parser("weights", help="Direct sieve weights on a small tuple")
    p.add_argument("--shifts", type=_int_list, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--gpy", action="store_true", help="Use the one-dimensional log power weight")
    p.set_defaults(handler=cmd_weights)

    p = sub.add_parser("prime-class", help="Densest residue class of primes mod q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--bound", type=int)
    p.set_defaults(handler=cmd_prime_class)
    return parser


def setup_logging(verbose: int) -> None:
    settings = get_config().get("logging") or {}
    level = settings.get("level", "WARNING")
    if verbose:
        level = "DEBUG" if verbose > 1 else "INFO"
    logging.basicConfig(
        level=level,
        format=settings.get("format", "%(asctime)s %(levelname)s %(name)s: %(message)s"),
        stream=sys.stderr,
    )


def run_config(args) -> RunConfig:
    parameters = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in GLOBAL_FLAGS
    }
    threads = args.threads or get_section("optimizer", OptimizerSettings).workers
    return RunConfig(
        command=args.command,
        action=getattr(args, "action", None),
        parameters=json.loads(json.dumps(parameters, default=_encode)),
        seed=args.seed,
        format=args.format,
        out=args.out,
        threads=threads,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    setup_logging(args.verbose)

    try:
        if args.threads is not None and args.threads < 1:
            raise InvalidInputError(f"--threads must be at least 1, got {args.threads}")
        config = run_config(args)
        engine = SieveLabEngine(workers=args.threads)
        result, verified = args.handler(engine, args)
    except InvalidInputError as e:
        logger.error("Invalid input: %s", e)
        return EXIT_USAGE
    except SieveLabError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_UNVERIFIED
    except ValueError as e:
        # pydantic validation of parameters lands here
        logger.error("Invalid input: %s", e)
        return EXIT_USAGE

    text = render(config, result)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if verified else EXIT_UNVERIFIED


if __name__ == "__main__":
    sys.exit(main())
