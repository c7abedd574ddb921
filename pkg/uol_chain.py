"""
UOL-Chain and UO-Table
Incremental per-pattern occurrence index, projected-database scanning and
the I-/S-extension constructors that build a child's table from its parent's
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from errors import IllegalExtension
from occupancy import TopValues, top_sum
from sequence_database import Item, Number, Pattern, QSequence, QSequenceDatabase

I_EXTENSION = "I"
S_EXTENSION = "S"


class WorkingSequence:
    """Working copy of one q-sequence: ranked items, remaining-utility ratios, slot index"""

    __slots__ = ("sid", "su", "itemsets", "ruo", "slots")

    def __init__(self, sequence: QSequence, rank: Dict[Item, int], keep=None):
        self.sid = sequence.sid
        self.su = sequence.su
        self.itemsets: List[Tuple[Tuple[int, Number], ...]] = [
            tuple((rank[q.item], q.utility) for q in itemset.items
                  if keep is None or q.item in keep)
            for itemset in sequence.itemsets
        ]
        # suffix sums taken from the end so the final ratio is exactly 0
        self.ruo: List[Tuple[float, ...]] = [()] * len(self.itemsets)
        remaining = 0
        for p in range(len(self.itemsets) - 1, -1, -1):
            row = []
            for _, utility in reversed(self.itemsets[p]):
                row.append(remaining / self.su)
                remaining += utility
            self.ruo[p] = tuple(reversed(row))
        self.slots: Dict[int, List[Tuple[int, int]]] = {}
        for p, itemset in enumerate(self.itemsets):
            for j, (r, _) in enumerate(itemset):
                self.slots.setdefault(r, []).append((p + 1, j))

    def utility_at(self, tid: int, slot: int) -> Number:
        return self.itemsets[tid - 1][slot][1]

    def ruo_at(self, tid: int, slot: int) -> float:
        return self.ruo[tid - 1][slot]


class WorkingDatabase:
    """The database as the miner sees it; an optional retained-item set drops the rest"""

    def __init__(self, database: QSequenceDatabase, retained: Optional[Iterable[Item]] = None):
        self.source = database
        self.items: Tuple[Item, ...] = database.items
        self.rank: Dict[Item, int] = {item: r for r, item in enumerate(self.items)}
        keep = None if retained is None else set(retained)
        self.sequences = [WorkingSequence(s, self.rank, keep)
                          for s in sorted(database.sequences, key=lambda s: s.sid)]
        self.by_sid = {ws.sid: ws for ws in self.sequences}

    def item(self, rank: int) -> Item:
        return self.items[rank]

    @property
    def max_sequence_items(self) -> int:
        return max((sum(len(row) for row in ws.itemsets) for ws in self.sequences), default=0)


@dataclass(frozen=True)
class UolElement:
    sid: int
    tid: int
    slot: int
    utility: Number
    uo: float
    ruo: float


@dataclass(frozen=True)
class SequenceGroup:
    """Elements of one pattern inside one sequence, ordered by tid (the next links)"""
    sid: int
    elements: Tuple[UolElement, ...]

    def best_uo(self) -> float:
        return max(e.uo for e in self.elements)

    def peuo(self) -> float:
        return max((e.uo + e.ruo for e in self.elements if e.ruo > 0), default=0.0)


@dataclass(frozen=True)
class UolChain:
    groups: Tuple[SequenceGroup, ...]

    def __len__(self):
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)

    @property
    def sids(self) -> Tuple[int, ...]:
        return tuple(g.sid for g in self.groups)


@dataclass(frozen=True)
class UoTable:
    prefix: Pattern
    sup: int
    uo: float
    uoc: UolChain
    peuo_values: Tuple[float, ...] = field(repr=False)

    @classmethod
    def from_chain(cls, prefix: Pattern, chain: UolChain):
        sup = len(chain)
        uo = sum(g.best_uo() for g in chain) / sup if sup else 0.0
        return cls(prefix, sup, uo, chain, tuple(g.peuo() for g in chain))


class CandidateAggregate:
    """Width-pruning ingredients for one candidate item, one contribution per sequence"""

    __slots__ = ("rss_count", "rsuo_sum", "top")

    def __init__(self, top_k: int = 0):
        self.rss_count = 0
        self.rsuo_sum = 0.0
        self.top = TopValues(top_k) if top_k else None

    def add(self, peuo_value: float):
        if peuo_value > 0:
            self.rss_count += 1
        self.rsuo_sum += peuo_value
        if self.top is not None:
            self.top.push(peuo_value)

    def rsuo(self, minsup_abs: int) -> float:
        return self.rsuo_sum / minsup_abs

    def tsuo(self, minsup_abs: int) -> float:
        if self.top is None:
            raise ValueError("TSUO values were not collected for this scan")
        return self.top.total() / minsup_abs


@dataclass
class ExtensionCandidates:
    ie_list: Dict[int, CandidateAggregate] = field(default_factory=dict)
    se_list: Dict[int, CandidateAggregate] = field(default_factory=dict)

    def ordered(self, kind: str) -> List[Tuple[int, CandidateAggregate]]:
        source = self.ie_list if kind == I_EXTENSION else self.se_list
        return sorted(source.items())


def build_singletons(db: WorkingDatabase, frequent_items: Sequence[Item]) -> List[UoTable]:
    """One UO-Table per item that still occurs in the working database"""
    wanted = [db.rank[item] for item in frequent_items if item in db.rank]
    groups: Dict[int, List[SequenceGroup]] = {rank: [] for rank in wanted}
    for ws in db.sequences:
        for rank in wanted:
            slots = ws.slots.get(rank)
            if not slots:
                continue
            elements = []
            for tid, j in slots:
                utility = ws.utility_at(tid, j)
                elements.append(UolElement(ws.sid, tid, j, utility, utility / ws.su, ws.ruo_at(tid, j)))
            groups[rank].append(SequenceGroup(ws.sid, tuple(elements)))
    return [UoTable.from_chain(Pattern(((db.item(rank),),)), UolChain(tuple(groups[rank])))
            for rank in wanted if groups[rank]]


def scan_extensions(table: UoTable, db: WorkingDatabase, top_k: int = 0) -> ExtensionCandidates:
    """Collect I- and S-extension items from the projected database of table.prefix"""
    candidates = ExtensionCandidates()
    for group, value in zip(table.uoc.groups, table.peuo_values):
        if value <= 0:
            continue
        ws = db.by_sid[group.sid]
        i_ranks = set()
        first_tid = None
        for e in group.elements:
            if e.ruo <= 0:
                continue
            if first_tid is None:
                first_tid = e.tid
            for rank, _ in ws.itemsets[e.tid - 1][e.slot + 1:]:
                i_ranks.add(rank)
        for rank in i_ranks:
            aggregate = candidates.ie_list.get(rank)
            if aggregate is None:
                aggregate = candidates.ie_list[rank] = CandidateAggregate(top_k)
            aggregate.add(value)
        for rank, slots in ws.slots.items():
            if slots[-1][0] > first_tid:
                aggregate = candidates.se_list.get(rank)
                if aggregate is None:
                    aggregate = candidates.se_list[rank] = CandidateAggregate(top_k)
                aggregate.add(value)
    return candidates


def _i_extend_group(group: SequenceGroup, ws: WorkingSequence, rank: int) -> List[UolElement]:
    at = dict(ws.slots.get(rank, ()))
    elements = []
    for e in group.elements:
        j = at.get(e.tid)
        if j is None or j <= e.slot:
            continue
        utility = e.utility + ws.utility_at(e.tid, j)
        elements.append(UolElement(ws.sid, e.tid, j, utility, utility / ws.su, ws.ruo_at(e.tid, j)))
    return elements


def _s_extend_group(group: SequenceGroup, ws: WorkingSequence, rank: int) -> List[UolElement]:
    parents = group.elements
    elements = []
    best = None
    k = 0
    for tid, j in ws.slots.get(rank, ()):
        while k < len(parents) and parents[k].tid < tid:
            if best is None or parents[k].utility > best:
                best = parents[k].utility
            k += 1
        if best is None:
            continue
        utility = best + ws.utility_at(tid, j)
        elements.append(UolElement(ws.sid, tid, j, utility, utility / ws.su, ws.ruo_at(tid, j)))
    return elements


def extend(table: UoTable, item: Item, kind: str, db: WorkingDatabase) -> UoTable:
    """Build the UO-Table of <t (+) item> (kind 'I') or <t (x) item> (kind 'S')"""
    if kind == I_EXTENSION:
        prefix = table.prefix.i_extend(item)
        grow = _i_extend_group
    elif kind == S_EXTENSION:
        prefix = table.prefix.s_extend(item)
        grow = _s_extend_group
    else:
        raise IllegalExtension(f"Unknown extension kind {kind!r}")
    rank = db.rank.get(item)
    groups = []
    if rank is not None:
        for group in table.uoc.groups:
            elements = grow(group, db.by_sid[group.sid], rank)
            if elements:
                groups.append(SequenceGroup(group.sid, tuple(elements)))
    if not groups:
        raise IllegalExtension(f"{prefix} does not occur in the database")
    return UoTable.from_chain(prefix, UolChain(tuple(groups)))


def table_peuo(table: UoTable, minsup_abs: int) -> float:
    return sum(table.peuo_values) / minsup_abs


def table_tpuo(table: UoTable, minsup_abs: int) -> float:
    return top_sum(table.peuo_values, minsup_abs) / minsup_abs


def table_pes(table: UoTable) -> int:
    return sum(1 for value in table.peuo_values if value > 0)
