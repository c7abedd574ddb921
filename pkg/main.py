#!/usr/bin/env python3
"""
HUOSP Miner
Command-line entry point: mine, verify, gen and bench
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from dotenv import load_dotenv

from errors import HuospError, InvalidParams, ValidationError
from occupancy import Thresholds
from sequence_database import QSequenceDatabase

# Load environment variables from .env file
load_dotenv()

from data_generator import GenParams, generate
from oracle import OracleLimits, oracle_mine, random_database
from qdb_format import MODES, PERMISSIVE, STRICT, parse_qdb, write_results, write_stats
from sumu_miner import MinerConfig, ResultSet, Variant, mine

logger = logging.getLogger("huosp")

LOG_LEVELS = {
    "error": logging.ERROR,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

ALL_VARIANTS = [v.value for v in Variant]


def setup_logging():
    """Log to standard error at the level named by HUOSP_LOG"""
    name = os.getenv("HUOSP_LOG", "info").strip().lower()
    level = LOG_LEVELS.get(name, logging.INFO)
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    if name not in LOG_LEVELS:
        logger.warning(f"Unknown HUOSP_LOG value '{name}', using info")


def _default_threads() -> int:
    try:
        return max(1, int(os.getenv("HUOSP_THREADS", "1")))
    except ValueError:
        return 1


def _default_mode() -> str:
    return STRICT if os.getenv("HUOSP_STRICT", "1").strip() != "0" else PERMISSIVE


def _number_list(text: str, kind=float) -> List:
    try:
        values = [kind(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a comma-separated list of numbers")
    if not values:
        raise argparse.ArgumentTypeError("list is empty")
    return values


def _thresholds(database: QSequenceDatabase, args) -> Thresholds:
    return Thresholds.create(len(database), args.minuo, minsup_abs=args.minsup_abs,
                             minsup_rel=args.minsup)


def cmd_mine(args) -> int:
    database = parse_qdb(args.input, args.utility_table, args.mode)
    thresholds = _thresholds(database, args)
    config = MinerConfig.for_variant(args.variant, max_pattern_length=args.max_len,
                                     threads=args.threads)
    results, stats = mine(database, thresholds, config)
    write_results(results, args.output)
    print(f"✓ {len(results)} HUOSPs written to {args.output}")
    if args.stats:
        as_csv = args.stats_format == "csv"
        write_stats(stats, args.stats, as_csv=as_csv)
        print(f"✓ Statistics written to {args.stats}")
    return 0


def _verify_one(database: QSequenceDatabase, thresholds: Thresholds,
                limits: OracleLimits) -> Tuple[List[str], ResultSet]:
    """Oracle against all four variants; returns the differences found and the oracle set"""
    expected = oracle_mine(database, thresholds, limits)
    problems = []
    for variant in ALL_VARIANTS:
        config = MinerConfig.for_variant(variant, max_pattern_length=limits.max_pattern_length)
        results, _ = mine(database, thresholds, config)
        diff = expected.diff(results)
        problems += diff.lines("oracle", variant)
    return problems, expected


def cmd_verify(args) -> int:
    limits = OracleLimits(args.max_sequences, args.max_items, args.max_seq_length, args.max_len)
    if args.random:
        thresholds = Thresholds.create(0, args.minuo, minsup_abs=args.minsup_abs)
        failures = 0
        for n in range(args.random):
            seed = args.seed + n
            problems, _ = _verify_one(random_database(seed), thresholds, limits)
            if problems:
                failures += 1
                print(f"✗ seed {seed}:")
                for line in problems:
                    print(f"   {line}")
        if failures:
            print(f"✗ {failures}/{args.random} random databases disagree")
            return 1
        print(f"✓ {args.random}/{args.random} random databases agree")
        return 0

    if not args.input:
        raise InvalidParams("verify needs --input or --random")
    database = parse_qdb(args.input, args.utility_table, args.mode)
    thresholds = _thresholds(database, args)
    problems, expected = _verify_one(database, thresholds, limits)
    if problems:
        for line in problems:
            print(f"   {line}")
        print("✗ result sets differ")
        return 1
    total = len(ALL_VARIANTS) + 1
    print(f"✓ {total}/{total} agree, {len(expected)} patterns")
    return 0


def cmd_gen(args) -> int:
    params = GenParams(args.sequences, args.items, args.avg_itemsets, args.avg_items,
                       args.quantity_max, args.utility_max, args.seed, args.zipf)
    qdb_path, ut_path = generate(params, args.out_prefix)
    print(f"✓ Generated {qdb_path} and {ut_path}")
    return 0


# candidates(left) <= candidates(right) must hold in every bench cell
CANDIDATE_ORDER = [("pes", "peuo"), ("peuo", "simple"), ("tpuo", "peuo")]


def cmd_bench(args) -> int:
    tables = args.utility_table or []
    if tables and len(tables) != len(args.input):
        raise InvalidParams("give one --utility-table per --input, or none")
    rows = []
    failed = False
    for n, path in enumerate(args.input):
        database = parse_qdb(path, tables[n] if tables else None, args.mode)
        for minsup in args.minsup_list:
            for minuo in args.minuo_list:
                if args.relative:
                    thresholds = Thresholds.create(len(database), minuo, minsup_rel=minsup)
                else:
                    thresholds = Thresholds.create(len(database), minuo, minsup_abs=int(minsup))
                cell = {}
                for variant in args.variants:
                    config = MinerConfig.for_variant(variant, threads=args.threads)
                    _, stats = mine(database, thresholds, config)
                    cell[variant] = stats
                    rows.append({"dataset": Path(path).name, "sequences": len(database),
                                 **stats.as_row()})
                label = f"{Path(path).name} minsup={thresholds.minsup_abs} minuo={minuo}"
                counts = {s.huosps for s in cell.values()}
                if len(counts) > 1:
                    print(f"✗ {label}: variants disagree on the HUOSP count "
                          f"({', '.join(f'{v}={s.huosps}' for v, s in cell.items())})")
                    failed = True
                for left, right in CANDIDATE_ORDER:
                    if left in cell and right in cell and cell[left].candidates > cell[right].candidates:
                        print(f"✗ {label}: candidates({left})={cell[left].candidates} > "
                              f"candidates({right})={cell[right].candidates}")
                        failed = True
    if failed:
        return 1
    write_stats(rows, args.out, as_csv=True)
    print(f"✓ {len(rows)} benchmark rows written to {args.out}")
    return 0


def _add_input(parser, required=True):
    parser.add_argument("--input", required=required, help="q-sequence database file")
    parser.add_argument("--utility-table", help="external utility table (omit: quantities are utilities)")
    parser.add_argument("--mode", choices=MODES, default=_default_mode(),
                        help="strict raises on SUtility mismatches and unknown items")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="huosp",
                                     description="High utility-occupancy sequential pattern mining")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine HUOSPs from a database")
    _add_input(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--minsup", type=float, help="relative minimum support in (0, 1]")
    group.add_argument("--minsup-abs", type=int, help="absolute minimum support")
    p.add_argument("--minuo", type=float, required=True, help="minimum utility occupancy in (0, 1]")
    p.add_argument("--variant", choices=ALL_VARIANTS, default=Variant.PES.value)
    p.add_argument("--max-len", type=int, default=0, help="maximum pattern length in items (0 = unbounded)")
    p.add_argument("--output", required=True)
    p.add_argument("--stats", help="write mining statistics to this file")
    p.add_argument("--stats-format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(handler=cmd_mine)

    p = sub.add_parser("verify", help="compare the brute-force oracle with every variant")
    _add_input(p, required=False)
    p.add_argument("--minsup-abs", type=int, required=True)
    p.add_argument("--minuo", type=float, required=True)
    p.set_defaults(minsup=None)
    defaults = OracleLimits()
    p.add_argument("--max-sequences", type=int, default=defaults.max_sequences)
    p.add_argument("--max-items", type=int, default=defaults.max_distinct_items)
    p.add_argument("--max-seq-length", type=int, default=defaults.max_seq_length)
    p.add_argument("--max-len", type=int, default=defaults.max_pattern_length)
    p.add_argument("--random", type=int, default=0, help="check N seeded random databases instead")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("gen", help="generate a synthetic database")
    p.add_argument("--sequences", type=int, required=True)
    p.add_argument("--items", type=int, required=True)
    p.add_argument("--avg-itemsets", type=float, default=GenParams.avg_itemsets_per_sequence)
    p.add_argument("--avg-items", type=float, default=GenParams.avg_items_per_itemset)
    p.add_argument("--quantity-max", type=int, default=GenParams.quantity_max)
    p.add_argument("--utility-max", type=int, default=GenParams.utility_max)
    p.add_argument("--seed", type=int, default=GenParams.seed)
    p.add_argument("--zipf", type=float, default=GenParams.zipf_exponent)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("bench", help="sweep thresholds over all variants into a CSV")
    p.add_argument("--input", action="append", required=True)
    p.add_argument("--utility-table", action="append")
    p.add_argument("--mode", choices=MODES, default=_default_mode())
    p.add_argument("--minsup-list", type=_number_list, required=True)
    p.add_argument("--minuo-list", type=_number_list, required=True)
    p.add_argument("--variants", type=lambda text: text.split(","), default=ALL_VARIANTS)
    p.add_argument("--relative", action="store_true", help="minsup values are fractions of |D|")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if getattr(args, "variants", None):
            unknown = [v for v in args.variants if v not in ALL_VARIANTS]
            if unknown:
                raise InvalidParams(f"Unknown variants {unknown}")
        return args.handler(args)
    except ValidationError as e:
        print(f"✗ {e}")
        return 2
    except (HuospError, OSError) as e:
        print(f"✗ {e}")
        return 1
    except Exception as e:
        logger.exception("unexpected failure")
        print(f"✗ {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
