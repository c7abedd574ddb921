"""
Quantitative Sequence Database
Domain types for q-sequence databases and the definition-level utility
and support computations
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from errors import IllegalExtension, NoOccurrence, UnknownItem, ValidationError

Number = Union[int, float]
Item = str

RESERVED_CHARACTERS = frozenset("[]")


def validate_item(item: Item) -> Item:
    """Check that an item id is a usable token"""
    if not isinstance(item, str) or not item:
        raise ValidationError(f"Item id must be a non-empty string, got {item!r}")
    if any(ch.isspace() or ch in RESERVED_CHARACTERS for ch in item):
        raise ValidationError(f"Item id {item!r} contains whitespace or brackets")
    return item


def item_order_key(item: Item) -> Tuple[int, int, str]:
    """Global item order: numeric ids numerically, then the rest lexicographically"""
    if item.isascii() and item.isdigit():
        return (0, int(item), item)
    return (1, 0, item)


def sort_items(items: Iterable[Item]) -> Tuple[Item, ...]:
    return tuple(sorted(items, key=item_order_key))


@dataclass(frozen=True)
class ExternalUtilityTable:
    """Per-item external utility p(i)"""
    entries: Mapping[Item, Number]
    strict: bool = True

    def __post_init__(self):
        for item, value in self.entries.items():
            validate_item(item)
            if not value > 0:
                raise ValidationError(f"External utility of '{item}' must be > 0, got {value}")
        object.__setattr__(self, "entries", dict(self.entries))

    def __contains__(self, item):
        return item in self.entries

    def utility_of(self, item: Item) -> Number:
        if item in self.entries:
            return self.entries[item]
        if self.strict:
            raise UnknownItem(item)
        return 1

    @classmethod
    def unit(cls, items: Iterable[Item] = ()):
        """Table where every item is worth 1 (quantities are final utilities)"""
        return cls({item: 1 for item in items}, strict=False)

    def scaled(self, factor: Number):
        return ExternalUtilityTable(
            {item: value * factor for item, value in self.entries.items()}, self.strict
        )


@dataclass(frozen=True)
class QItem:
    item: Item
    quantity: int
    utility: Number

    def __post_init__(self):
        validate_item(self.item)
        if not isinstance(self.quantity, int) or self.quantity < 1:
            raise ValidationError(f"Quantity of '{self.item}' must be a positive integer")


@dataclass(frozen=True)
class QItemset:
    items: Tuple[QItem, ...]

    def __post_init__(self):
        if not self.items:
            raise ValidationError("A q-itemset cannot be empty")
        ordered = tuple(sorted(self.items, key=lambda q: item_order_key(q.item)))
        names = [q.item for q in ordered]
        if len(set(names)) != len(names):
            raise ValidationError(f"Duplicate item in q-itemset {names}")
        object.__setattr__(self, "items", ordered)

    @property
    def utility(self) -> Number:
        return sum(q.utility for q in self.items)

    def utilities(self) -> Dict[Item, Number]:
        return {q.item: q.utility for q in self.items}


@dataclass(frozen=True)
class QSequence:
    """One identified q-sequence with its cached total utility"""
    sid: int
    itemsets: Tuple[QItemset, ...]
    su: Number

    def __post_init__(self):
        if not self.itemsets:
            raise ValidationError(f"Sequence {self.sid} has no itemsets")
        if self.sid < 0:
            raise ValidationError(f"Sequence id must be non-negative, got {self.sid}")

    @classmethod
    def build(cls, sid: int, rows: Sequence[Sequence[Tuple[Item, int]]],
              utable: ExternalUtilityTable):
        """Build from (item, quantity) rows, computing utilities from the table"""
        itemsets = tuple(
            QItemset(tuple(QItem(item, qty, item_utility_of(item, qty, utable))
                           for item, qty in row))
            for row in rows
        )
        return cls(sid, itemsets, sum(itemset.utility for itemset in itemsets))

    def __len__(self):
        return len(self.itemsets)

    @property
    def items(self):
        return {q.item for itemset in self.itemsets for q in itemset.items}

    def item_count(self) -> int:
        return sum(len(itemset.items) for itemset in self.itemsets)


@dataclass(frozen=True)
class QSequenceDatabase:
    sequences: Tuple[QSequence, ...]
    utable: ExternalUtilityTable
    total_utility: Number = field(default=0)

    def __post_init__(self):
        sids = [s.sid for s in self.sequences]
        if len(set(sids)) != len(sids):
            raise ValidationError("Sequence ids must be unique")
        object.__setattr__(self, "sequences", tuple(self.sequences))
        object.__setattr__(self, "total_utility", sum(s.su for s in self.sequences))

    def __len__(self):
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)

    @property
    def items(self) -> Tuple[Item, ...]:
        found = set()
        for s in self.sequences:
            found |= s.items
        return sort_items(found)

    def by_sid(self, sid: int) -> QSequence:
        for s in self.sequences:
            if s.sid == sid:
                return s
        raise KeyError(sid)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Sequence[Tuple[Item, int]]]],
                  utable: ExternalUtilityTable, first_sid: int = 1):
        """Convenience constructor: one entry per sequence, sids numbered from first_sid"""
        sequences = tuple(QSequence.build(first_sid + n, row, utable) for n, row in enumerate(rows))
        return cls(sequences, utable)


@dataclass(frozen=True)
class Pattern:
    """A sequential pattern: ordered itemsets of items, without quantities"""
    itemsets: Tuple[Tuple[Item, ...], ...]

    def __post_init__(self):
        if not self.itemsets:
            raise ValidationError("A pattern needs at least one itemset")
        for itemset in self.itemsets:
            if not itemset:
                raise ValidationError("Pattern itemsets cannot be empty")
            for item in itemset:
                validate_item(item)
            keys = [item_order_key(item) for item in itemset]
            if any(a >= b for a, b in zip(keys, keys[1:])):
                raise ValidationError(f"Pattern itemset {itemset} is not strictly ascending")

    @classmethod
    def of(cls, *itemsets: Iterable[Item]):
        """Pattern.of('ab', 'c') or Pattern.of(['10', '2'], ['7'])"""
        return cls(tuple(sort_items(set(itemset)) for itemset in itemsets))

    @property
    def length(self) -> int:
        return sum(len(itemset) for itemset in self.itemsets)

    @property
    def last_item(self) -> Item:
        return self.itemsets[-1][-1]

    def i_extend(self, item: Item):
        if item_order_key(item) <= item_order_key(self.last_item):
            raise IllegalExtension(f"I-extension item '{item}' must follow '{self.last_item}'")
        return Pattern(self.itemsets[:-1] + (self.itemsets[-1] + (item,),))

    def s_extend(self, item: Item):
        return Pattern(self.itemsets + ((item,),))

    def extension_kind(self, generator) -> Optional[str]:
        """'I' or 'S' if one extension turns generator into this pattern, else None"""
        if self.length != generator.length + 1:
            return None
        if len(self.itemsets) == len(generator.itemsets) + 1:
            if self.itemsets[:-1] == generator.itemsets and len(self.itemsets[-1]) == 1:
                return "S"
            return None
        if (len(self.itemsets) == len(generator.itemsets)
                and self.itemsets[:-1] == generator.itemsets[:-1]
                and self.itemsets[-1][:-1] == generator.itemsets[-1]):
            return "I"
        return None

    def sort_key(self):
        """Length, then the items in reading order, then the itemset sizes"""
        flat = tuple(item_order_key(i) for itemset in self.itemsets for i in itemset)
        return (self.length, flat, tuple(len(itemset) for itemset in self.itemsets))

    def to_spmf(self) -> str:
        return " ".join(" ".join(itemset) + " -1" for itemset in self.itemsets) + " -2"

    def __str__(self):
        return "<" + ",".join("[" + " ".join(itemset) + "]" for itemset in self.itemsets) + ">"


@dataclass(frozen=True)
class Occurrence:
    positions: Tuple[int, ...]
    utility: Number

    @property
    def end(self) -> int:
        return self.positions[-1]


def item_utility_of(item: Item, quantity: int, utable: ExternalUtilityTable) -> Number:
    return quantity * utable.utility_of(item)


def item_utility(qitem: QItem, utable: ExternalUtilityTable) -> Number:
    """u(i, c) = q(i, c) x p(i)"""
    return item_utility_of(qitem.item, qitem.quantity, utable)


def sequence_utility(s: QSequence, utable: ExternalUtilityTable) -> Number:
    return sum(item_utility(q, utable) for itemset in s.itemsets for q in itemset.items)


def database_utility(database: QSequenceDatabase) -> Number:
    return sum(s.su for s in database.sequences)


def find_occurrences(t: Pattern, s: QSequence) -> List[Occurrence]:
    """Every strictly increasing position list matching t in s, with its utility"""
    rows = [itemset.utilities() for itemset in s.itemsets]
    found: List[Occurrence] = []
    positions: List[int] = []

    def walk(j, start, utility):
        if j == len(t.itemsets):
            found.append(Occurrence(tuple(positions), utility))
            return
        wanted = t.itemsets[j]
        # leave room for the remaining pattern itemsets
        for k in range(start, len(rows) - (len(t.itemsets) - j - 1)):
            row = rows[k]
            if all(item in row for item in wanted):
                positions.append(k + 1)
                walk(j + 1, k + 1, utility + sum(row[item] for item in wanted))
                positions.pop()

    walk(0, 0, 0)
    return found


def contains(t: Pattern, s: QSequence) -> bool:
    """Greedy leftmost containment test (cheaper than enumerating occurrences)"""
    j = 0
    for itemset in s.itemsets:
        row = itemset.utilities()
        if all(item in row for item in t.itemsets[j]):
            j += 1
            if j == len(t.itemsets):
                return True
    return False


def pattern_utility(t: Pattern, s: QSequence) -> Number:
    occurrences = find_occurrences(t, s)
    if not occurrences:
        raise NoOccurrence(f"{t} does not occur in sequence {s.sid}")
    return max(o.utility for o in occurrences)


def pattern_total_utility(t: Pattern, database: QSequenceDatabase) -> Number:
    """u(t): sum of the pattern's utility over the sequences containing it"""
    return sum(pattern_utility(t, s) for s in database.sequences if contains(t, s))


def support(t: Pattern, database: QSequenceDatabase) -> int:
    return sum(1 for s in database.sequences if contains(t, s))
