#!/usr/bin/env python3
"""
SUMU Miner
Depth-first HUOSP search over UO-Tables with the seven pruning strategies.
The four benchmark variants are strategy sets over the same search.
"""

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple

import psutil

from errors import HuospError, InvalidParams
from occupancy import EPSILON, Thresholds
from sequence_database import Item, Pattern, QSequenceDatabase, sort_items
from uol_chain import (I_EXTENSION, S_EXTENSION, UoTable, WorkingDatabase, build_singletons,
                       extend, scan_extensions, table_pes, table_peuo, table_tpuo)

logger = logging.getLogger(__name__)

STRATEGIES = (1, 2, 3, 4, 5, 6, 7)


class Variant(str, Enum):
    SIMPLE = "simple"
    PEUO = "peuo"
    TPUO = "tpuo"
    PES = "pes"


VARIANT_STRATEGIES: Dict[Variant, FrozenSet[int]] = {
    Variant.SIMPLE: frozenset({2, 3}),
    Variant.PEUO: frozenset({1, 2, 3}),
    Variant.TPUO: frozenset({1, 4, 5}),
    Variant.PES: frozenset({1, 2, 3, 6, 7}),
}


@dataclass(frozen=True)
class MinerConfig:
    variant: Variant = Variant.PES
    strategies: FrozenSet[int] = VARIANT_STRATEGIES[Variant.PES]
    max_pattern_length: int = 0
    threads: int = 1

    def __post_init__(self):
        unknown = set(self.strategies) - set(STRATEGIES)
        if unknown:
            raise InvalidParams(f"Unknown pruning strategies {sorted(unknown)}")
        if self.max_pattern_length < 0:
            raise InvalidParams("max pattern length must be >= 0 (0 = unbounded)")
        if self.threads < 1:
            raise InvalidParams("threads must be >= 1")

    @classmethod
    def for_variant(cls, variant, overrides: Optional[Mapping[int, bool]] = None,
                    max_pattern_length: int = 0, threads: int = 1):
        """Strategy flags come from the variant; overrides switch single strategies on or off"""
        try:
            variant = Variant(variant)
        except ValueError:
            raise InvalidParams(f"Unknown variant '{variant}', expected one of "
                                f"{', '.join(v.value for v in Variant)}") from None
        strategies = set(VARIANT_STRATEGIES[variant])
        for strategy, enabled in (overrides or {}).items():
            if enabled:
                strategies.add(strategy)
            else:
                strategies.discard(strategy)
        return cls(variant, frozenset(strategies), max_pattern_length, threads)

    def uses(self, strategy: int) -> bool:
        return strategy in self.strategies


@dataclass
class MiningStats:
    variant: str = ""
    minsup: int = 0
    minuo: float = 0.0
    candidates: int = 0
    huosps: int = 0
    pruned: Dict[int, int] = field(default_factory=lambda: {s: 0 for s in STRATEGIES})
    wall_time_ms: float = 0.0
    peak_patterns_alive: int = 0
    peak_memory_mb: float = 0.0

    def absorb(self, other: "MiningStats"):
        """Fold the counters of one subtree task into this run"""
        self.candidates += other.candidates
        for strategy, count in other.pruned.items():
            self.pruned[strategy] = self.pruned.get(strategy, 0) + count
        self.peak_patterns_alive = max(self.peak_patterns_alive, other.peak_patterns_alive)
        self.peak_memory_mb = max(self.peak_memory_mb, other.peak_memory_mb)

    def as_row(self) -> Dict[str, object]:
        row = {
            "variant": self.variant,
            "minsup": self.minsup,
            "minuo": self.minuo,
            "candidates": self.candidates,
            "huosps": self.huosps,
            "ms": round(self.wall_time_ms, 3),
        }
        for strategy in STRATEGIES:
            row[f"pruned_s{strategy}"] = self.pruned.get(strategy, 0)
        row["peak_patterns_alive"] = self.peak_patterns_alive
        row["peak_memory_mb"] = round(self.peak_memory_mb, 2)
        return row


@dataclass(frozen=True)
class HuospEntry:
    pattern: Pattern
    support: int
    uo: float


@dataclass
class ResultDiff:
    only_left: List[HuospEntry] = field(default_factory=list)
    only_right: List[HuospEntry] = field(default_factory=list)
    mismatched: List[Tuple[HuospEntry, HuospEntry]] = field(default_factory=list)

    def __bool__(self):
        return bool(self.only_left or self.only_right or self.mismatched)

    def lines(self, left="left", right="right") -> List[str]:
        out = [f"only in {left}: {e.pattern} sup={e.support} uo={e.uo:.6f}" for e in self.only_left]
        out += [f"only in {right}: {e.pattern} sup={e.support} uo={e.uo:.6f}" for e in self.only_right]
        out += [f"{a.pattern}: {left} sup={a.support} uo={a.uo:.9f}, "
                f"{right} sup={b.support} uo={b.uo:.9f}" for a, b in self.mismatched]
        return out


class ResultSet:
    """HUOSPs keyed by pattern; iteration follows the canonical (length, lexicographic) order"""

    def __init__(self, entries: Iterable[HuospEntry] = ()):
        self._entries: Dict[Pattern, HuospEntry] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: HuospEntry):
        if entry.pattern in self._entries:
            raise HuospError(f"Pattern {entry.pattern} emitted twice")
        self._entries[entry.pattern] = entry

    def __len__(self):
        return len(self._entries)

    def __iter__(self) -> Iterator[HuospEntry]:
        return iter(self.entries)

    def __contains__(self, pattern):
        return pattern in self._entries

    def get(self, pattern: Pattern) -> Optional[HuospEntry]:
        return self._entries.get(pattern)

    @property
    def entries(self) -> List[HuospEntry]:
        return sorted(self._entries.values(), key=lambda e: e.pattern.sort_key())

    @property
    def patterns(self) -> FrozenSet[Pattern]:
        return frozenset(self._entries)

    def diff(self, other: "ResultSet", tolerance: float = EPSILON) -> ResultDiff:
        result = ResultDiff()
        for entry in self.entries:
            theirs = other.get(entry.pattern)
            if theirs is None:
                result.only_left.append(entry)
            elif theirs.support != entry.support or abs(theirs.uo - entry.uo) > tolerance:
                result.mismatched.append((entry, theirs))
        result.only_right = [e for e in other.entries if e.pattern not in self._entries]
        return result

    def agrees_with(self, other: "ResultSet") -> bool:
        return not self.diff(other)


def count_item_supports(database: QSequenceDatabase) -> Dict[Item, int]:
    """Number of sequences containing each item, counted once per sequence"""
    supports: Dict[Item, int] = {}
    for sequence in database:
        for item in sequence.items:
            supports[item] = supports.get(item, 0) + 1
    return supports


class SearchContext:
    """Shared state of one search: working database, thresholds, flags, results and counters"""

    def __init__(self, db: WorkingDatabase, thresholds: Thresholds, config: MinerConfig,
                 stats: Optional[MiningStats] = None):
        self.db = db
        self.thresholds = thresholds
        self.config = config
        self.stats = stats or MiningStats()
        self.results: List[HuospEntry] = []
        self.depth_limit = db.max_sequence_items
        self.alive = 0

    def built(self, table: UoTable):
        self.stats.candidates += 1
        self.alive += 1
        if self.alive > self.stats.peak_patterns_alive:
            self.stats.peak_patterns_alive = self.alive

    def released(self, count: int = 1):
        self.alive -= count

    def pruned(self, strategy: int, table: UoTable, item: Optional[Item] = None):
        self.stats.pruned[strategy] += 1
        if logger.isEnabledFor(logging.DEBUG):
            target = table.prefix if item is None else f"{table.prefix} + {item}"
            logger.debug(f"strategy {strategy} pruned {target}")

    def offer(self, table: UoTable):
        if self.thresholds.accepts(table.sup, table.uo):
            self.results.append(HuospEntry(table.prefix, table.sup, table.uo))


def housp_search(table: UoTable, ctx: SearchContext):
    """Grow every extension of table.prefix that can still lead to a HUOSP"""
    minsup = ctx.thresholds.minsup_abs
    floor = ctx.thresholds.minuo - EPSILON
    config = ctx.config
    length = table.prefix.length
    if length >= ctx.depth_limit:
        return
    if config.max_pattern_length and length >= config.max_pattern_length:
        return

    # depth pruning: support bound first, then the occupancy bounds
    if config.uses(6) and table_pes(table) < minsup:
        ctx.pruned(6, table)
        return
    if config.uses(2) and table_peuo(table, minsup) < floor:
        ctx.pruned(2, table)
        return
    if config.uses(4) and table_tpuo(table, minsup) < floor:
        ctx.pruned(4, table)
        return

    candidates = scan_extensions(table, ctx.db, top_k=minsup if config.uses(5) else 0)
    for kind in (I_EXTENSION, S_EXTENSION):
        for rank, aggregate in candidates.ordered(kind):
            item = ctx.db.item(rank)
            # width pruning
            if config.uses(7) and aggregate.rss_count < minsup:
                ctx.pruned(7, table, item)
                continue
            if config.uses(3) and aggregate.rsuo(minsup) < floor:
                ctx.pruned(3, table, item)
                continue
            if config.uses(5) and aggregate.tsuo(minsup) < floor:
                ctx.pruned(5, table, item)
                continue
            child = extend(table, item, kind, ctx.db)
            ctx.built(child)
            if child.sup >= minsup:
                ctx.offer(child)
                housp_search(child, ctx)
            ctx.released()


def _sample_memory_mb() -> float:
    return psutil.Process(os.getpid()).memory_info().rss / (1024 * 1024)


# Per-process working database for parallel subtree tasks
_WORKER_DB: Optional[WorkingDatabase] = None


def _init_worker(database: QSequenceDatabase, retained: Optional[Tuple[Item, ...]]):
    global _WORKER_DB
    _WORKER_DB = WorkingDatabase(database, retained)


def _search_subtree(item: Item, thresholds: Thresholds, config: MinerConfig):
    ctx = SearchContext(_WORKER_DB, thresholds, config)
    for table in build_singletons(ctx.db, [item]):
        ctx.built(table)
        if table.sup >= thresholds.minsup_abs:
            ctx.offer(table)
            housp_search(table, ctx)
        ctx.released()
    ctx.stats.peak_memory_mb = _sample_memory_mb()
    return ctx.results, ctx.stats


class SumuMiner:
    """Runs one configured mining pass over a database"""

    def __init__(self, config: Optional[MinerConfig] = None):
        self.config = config or MinerConfig()

    def mine(self, database: QSequenceDatabase, thresholds: Thresholds) -> Tuple[ResultSet, MiningStats]:
        config = self.config
        stats = MiningStats(variant=config.variant.value, minsup=thresholds.minsup_abs,
                            minuo=thresholds.minuo)
        start = time.perf_counter()

        supports = count_item_supports(database)
        items = sort_items(supports)
        retained = None
        if config.uses(1):
            retained = tuple(i for i in items if supports[i] >= thresholds.minsup_abs)
            stats.pruned[1] = len(items) - len(retained)
            logger.debug(f"strategy 1 removed {stats.pruned[1]} infrequent items")
        singles = items if retained is None else retained

        if config.threads > 1 and len(singles) > 1:
            results = self._mine_parallel(database, retained, singles, thresholds, stats)
        else:
            db = WorkingDatabase(database, retained)
            ctx = SearchContext(db, thresholds, config, stats)
            tables = build_singletons(db, singles)
            logger.info(f"{len(tables)} singleton tables built in "
                        f"{(time.perf_counter() - start) * 1000:.1f} ms")
            for table in tables:
                ctx.built(table)
            for table in tables:
                if table.sup >= thresholds.minsup_abs:
                    ctx.offer(table)
                    housp_search(table, ctx)
                ctx.released()
            results = ctx.results
            stats.peak_memory_mb = _sample_memory_mb()

        result_set = ResultSet(results)
        stats.huosps = len(result_set)
        stats.wall_time_ms = (time.perf_counter() - start) * 1000
        logger.info(f"{config.variant.value}: {stats.huosps} HUOSPs from {stats.candidates} "
                    f"candidates in {stats.wall_time_ms:.1f} ms")
        return result_set, stats

    def _mine_parallel(self, database, retained, singles, thresholds, stats) -> List[HuospEntry]:
        """One task per singleton subtree; merged in singleton order"""
        results: List[HuospEntry] = []
        logger.info(f"searching {len(singles)} subtrees on {self.config.threads} processes")
        with ProcessPoolExecutor(max_workers=self.config.threads, initializer=_init_worker,
                                 initargs=(database, retained)) as pool:
            futures = [pool.submit(_search_subtree, item, thresholds, self.config) for item in singles]
            for future in futures:
                entries, partial = future.result()
                results.extend(entries)
                stats.absorb(partial)
        return results


def mine(database: QSequenceDatabase, thresholds: Thresholds,
         config: Optional[MinerConfig] = None) -> Tuple[ResultSet, MiningStats]:
    return SumuMiner(config).mine(database, thresholds)
