"""
Utility Occupancy Reference
Definition-level utility occupancy, remaining utility occupancy and the six
upper bounds (PEUO, RSUO, TPUO, TSUO, PES, RSS), computed straight from the
database. The chain-based miner is tested against these.
"""

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from errors import (InvalidThresholds, NoOccurrence, NotAGenerator, PositionOutOfRange,
                    ZeroUtilitySequence)
from sequence_database import (Pattern, QSequence, QSequenceDatabase, contains,
                               find_occurrences, item_order_key, pattern_utility)

# Occupancy comparisons absorb float accumulation with this tolerance
EPSILON = 1e-9


@dataclass(frozen=True)
class Thresholds:
    minsup_abs: int
    minuo: float
    minsup_rel: Optional[float] = None

    @classmethod
    def create(cls, database_size: int, minuo: float, minsup_abs: Optional[int] = None,
               minsup_rel: Optional[float] = None):
        """Validate thresholds; a relative minsup becomes ceil(rel x |D|), at least 1"""
        if (minsup_abs is None) == (minsup_rel is None):
            raise InvalidThresholds("Give exactly one of an absolute or a relative minsup")
        if not (isinstance(minuo, (int, float)) and 0 < minuo <= 1):
            raise InvalidThresholds(f"minuo must be in the range (0, 1], got {minuo}")
        if minsup_rel is not None:
            if not 0 < minsup_rel <= 1:
                raise InvalidThresholds(f"relative minsup must be in the range (0, 1], got {minsup_rel}")
            minsup_abs = max(1, math.ceil(Fraction(str(minsup_rel)) * database_size))
        if minsup_abs < 1:
            raise InvalidThresholds(f"minsup must be at least 1, got {minsup_abs}")
        if database_size and minsup_abs > database_size:
            raise InvalidThresholds(
                f"minsup {minsup_abs} exceeds the number of sequences ({database_size})")
        return cls(int(minsup_abs), float(minuo), minsup_rel)

    def accepts(self, sup: int, uo: float) -> bool:
        return sup >= self.minsup_abs and uo >= self.minuo - EPSILON


class TopValues:
    """Bounded min-heap holding the k largest values pushed so far"""

    __slots__ = ("k", "heap")

    def __init__(self, k: int):
        self.k = k
        self.heap: List[float] = []

    def push(self, value: float):
        if len(self.heap) < self.k:
            heapq.heappush(self.heap, value)
        elif self.heap and value > self.heap[0]:
            heapq.heapreplace(self.heap, value)

    def total(self) -> float:
        return sum(self.heap)

    def descending(self) -> List[float]:
        return sorted(self.heap, reverse=True)


def top_sum(values: Iterable[float], k: int) -> float:
    """Sum of the k largest values (all of them when fewer than k exist)"""
    top = TopValues(k)
    for value in values:
        top.push(value)
    return top.total()


def _denominator(s: QSequence):
    if s.su <= 0:
        raise ZeroUtilitySequence(f"Sequence {s.sid} has zero utility")
    return s.su


def uo_in_sequence(t: Pattern, s: QSequence) -> float:
    return pattern_utility(t, s) / _denominator(s)


def uo_at_position(t: Pattern, s: QSequence, p: int) -> float:
    """Best occurrence lying entirely inside the first p itemsets, over u(s)"""
    within = [o.utility for o in find_occurrences(t, s) if o.end <= p]
    if not within:
        raise NoOccurrence(f"{t} has no occurrence within the first {p} itemsets of {s.sid}")
    return max(within) / _denominator(s)


def uo_total(t: Pattern, database: QSequenceDatabase) -> float:
    values = [uo_in_sequence(t, s) for s in database.sequences if contains(t, s)]
    if not values:
        raise NoOccurrence(f"{t} does not occur in the database")
    return sum(values) / len(values)


def ruo_at_position(t: Pattern, s: QSequence, p: int) -> float:
    """Share of u(s) located after t's last item at itemset p"""
    if not 1 <= p <= len(s):
        raise PositionOutOfRange(f"position {p} outside 1..{len(s)} of sequence {s.sid}")
    last = item_order_key(t.last_item)
    within = sum(q.utility for q in s.itemsets[p - 1].items if item_order_key(q.item) > last)
    after = sum(itemset.utility for itemset in s.itemsets[p:])
    return (within + after) / _denominator(s)


def peuo_at(t: Pattern, s: QSequence, p: int) -> float:
    ruo = ruo_at_position(t, s, p)
    if ruo > 0:
        return uo_at_position(t, s, p) + ruo
    return 0.0


def peuo_in_sequence(t: Pattern, s: QSequence) -> float:
    """Max PEUO over the positions where an occurrence of t ends"""
    ends = sorted({o.end for o in find_occurrences(t, s)})
    if not ends:
        raise NoOccurrence(f"{t} does not occur in sequence {s.sid}")
    return max(peuo_at(t, s, p) for p in ends)


def sequence_peuo_values(t: Pattern, database: QSequenceDatabase) -> Dict[int, float]:
    """sid -> PEUO(t, s) for every sequence containing t"""
    return {s.sid: peuo_in_sequence(t, s) for s in database.sequences if contains(t, s)}


def _containing_values(t, database):
    values = sequence_peuo_values(t, database)
    if not values:
        raise NoOccurrence(f"{t} does not occur in the database")
    return values


def _generator_values(t, l, database):
    """PEUO(l, s) restricted to the sequences that also contain t"""
    if t.extension_kind(l) is None:
        raise NotAGenerator(f"{l} does not generate {t} by one extension")
    return [peuo_in_sequence(l, s) for s in database.sequences if contains(t, s)]


def peuo_total(t: Pattern, database: QSequenceDatabase, minsup_abs: int) -> float:
    return sum(_containing_values(t, database).values()) / minsup_abs


def rsuo_total(t: Pattern, l: Pattern, database: QSequenceDatabase, minsup_abs: int) -> float:
    return sum(_generator_values(t, l, database)) / minsup_abs


def tpuo_total(t: Pattern, database: QSequenceDatabase, minsup_abs: int) -> float:
    return top_sum(_containing_values(t, database).values(), minsup_abs) / minsup_abs


def tsuo_total(t: Pattern, l: Pattern, database: QSequenceDatabase, minsup_abs: int) -> float:
    return top_sum(_generator_values(t, l, database), minsup_abs) / minsup_abs


def pes_total(t: Pattern, database: QSequenceDatabase) -> int:
    return sum(1 for value in _containing_values(t, database).values() if value > 0)


def rss_total(t: Pattern, l: Pattern, database: QSequenceDatabase) -> int:
    return sum(1 for value in _generator_values(t, l, database) if value > 0)
