"""
Brute-force HUOSP Oracle
Exhaustive pattern enumeration for small databases. Only support
anti-monotonicity prunes the enumeration; every occupancy value comes from
the definition-level functions in occupancy.py.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from errors import InvalidParams, LimitsExceeded
from occupancy import Thresholds, sequence_peuo_values, uo_total
from sequence_database import (ExternalUtilityTable, Pattern, QSequence, QSequenceDatabase,
                               item_order_key, support)
from sumu_miner import HuospEntry, ResultSet, count_item_supports

logger = logging.getLogger(__name__)

ALPHABET = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class OracleLimits:
    max_sequences: int = 10
    max_distinct_items: int = 6
    max_seq_length: int = 8
    max_pattern_length: int = 6

    def __post_init__(self):
        for name in ("max_sequences", "max_distinct_items", "max_seq_length", "max_pattern_length"):
            if getattr(self, name) < 1:
                raise InvalidParams(f"oracle limit {name} must be positive")

    def check(self, database: QSequenceDatabase, minsup_abs: int = 1):
        """Infrequent items never enter the enumeration, so only frequent ones count"""
        if len(database) > self.max_sequences:
            raise LimitsExceeded(f"{len(database)} sequences exceed the oracle limit of {self.max_sequences}")
        frequent = sum(1 for count in count_item_supports(database).values() if count >= minsup_abs)
        if frequent > self.max_distinct_items:
            raise LimitsExceeded(f"{frequent} frequent items exceed the oracle limit "
                                 f"of {self.max_distinct_items}")
        longest = max((len(s) for s in database), default=0)
        if longest > self.max_seq_length:
            raise LimitsExceeded(f"a sequence of {longest} itemsets exceeds the oracle limit "
                                 f"of {self.max_seq_length}")


@dataclass(frozen=True)
class OracleRecord:
    pattern: Pattern
    support: int
    uo: float
    peuo: Dict[int, float]


def oracle_enumerate(database: QSequenceDatabase, minsup_abs: int,
                     limits: Optional[OracleLimits] = None) -> List[OracleRecord]:
    """Every pattern with support >= minsup_abs, up to the length limit, with its PEUO ingredients"""
    limits = limits or OracleLimits()
    limits.check(database, minsup_abs)
    items = database.items
    records: List[OracleRecord] = []

    def visit(t: Pattern, sup: int):
        records.append(OracleRecord(t, sup, uo_total(t, database), sequence_peuo_values(t, database)))
        if t.length >= limits.max_pattern_length:
            return
        last = item_order_key(t.last_item)
        children = [t.i_extend(i) for i in items if item_order_key(i) > last]
        children += [t.s_extend(i) for i in items]
        for child in children:
            child_sup = support(child, database)
            if child_sup >= minsup_abs:
                visit(child, child_sup)

    for item in items:
        single = Pattern(((item,),))
        sup = support(single, database)
        if sup >= minsup_abs:
            visit(single, sup)
    logger.debug(f"oracle enumerated {len(records)} frequent patterns")
    return records


def records_to_results(records: List[OracleRecord], thresholds: Thresholds) -> ResultSet:
    return ResultSet(HuospEntry(r.pattern, r.support, r.uo) for r in records
                     if thresholds.accepts(r.support, r.uo))


def oracle_mine(database: QSequenceDatabase, thresholds: Thresholds,
                limits: Optional[OracleLimits] = None) -> ResultSet:
    return records_to_results(oracle_enumerate(database, thresholds.minsup_abs, limits), thresholds)


def random_database(seed: int, min_sequences: int = 3, max_sequences: int = 6, n_items: int = 4,
                    max_itemsets: int = 5, max_itemset_size: int = 3, max_quantity: int = 5,
                    max_utility: int = 5) -> QSequenceDatabase:
    """Small seeded database for equivalence and property runs"""
    if not 1 <= n_items <= len(ALPHABET):
        raise InvalidParams(f"n_items must be in 1..{len(ALPHABET)}")
    rng = np.random.default_rng(seed)
    alphabet = list(ALPHABET[:n_items])
    utable = ExternalUtilityTable({item: int(rng.integers(1, max_utility + 1)) for item in alphabet})
    sequences = []
    for sid in range(1, int(rng.integers(min_sequences, max_sequences + 1)) + 1):
        rows = []
        for _ in range(int(rng.integers(1, max_itemsets + 1))):
            size = int(rng.integers(1, min(max_itemset_size, n_items) + 1))
            chosen = rng.choice(alphabet, size=size, replace=False)
            rows.append([(str(item), int(rng.integers(1, max_quantity + 1))) for item in chosen])
        sequences.append(QSequence.build(sid, rows, utable))
    return QSequenceDatabase(tuple(sequences), utable)
