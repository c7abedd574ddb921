"""
Synthetic Q-sequence Database Generator
Seeded generator in the spirit of the Quest synthetic data generator:
Poisson-sized sequences and itemsets, Zipf item popularity, uniform
quantities and external utilities
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from errors import InvalidParams
from qdb_format import write_qdb, write_utility_table
from sequence_database import ExternalUtilityTable, QSequence, QSequenceDatabase

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GenParams:
    n_sequences: int
    n_items: int
    avg_itemsets_per_sequence: float = 5.0
    avg_items_per_itemset: float = 2.5
    quantity_max: int = 5
    utility_max: int = 10
    seed: int = 42
    zipf_exponent: float = 1.0

    def validate(self):
        if self.n_sequences < 1 or self.n_items < 1:
            raise InvalidParams("n_sequences and n_items must be positive")
        if self.avg_itemsets_per_sequence < 1 or self.avg_items_per_itemset < 1:
            raise InvalidParams("averages must be >= 1")
        if self.quantity_max < 1 or self.utility_max < 1:
            raise InvalidParams("quantity_max and utility_max must be >= 1")
        if self.zipf_exponent < 0:
            raise InvalidParams("zipf_exponent must be >= 0")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidParams("seed must fit in 64 bits")
        return self


class ItemSampler:
    """Zipf-weighted item draws without repeats inside one itemset"""

    def __init__(self, rng: np.random.Generator, n_items: int, exponent: float):
        self.rng = rng
        self.n_items = n_items
        weights = 1.0 / np.arange(1, n_items + 1, dtype=float) ** exponent
        self.cdf = np.cumsum(weights / weights.sum())
        self.cdf[-1] = 1.0

    def draw(self, size: int) -> List[int]:
        size = min(size, self.n_items)
        chosen: Dict[int, None] = {}
        while len(chosen) < size:
            picks = np.searchsorted(self.cdf, self.rng.random(2 * size), side="right")
            for pick in picks:
                chosen.setdefault(int(pick) + 1, None)
                if len(chosen) == size:
                    break
        return list(chosen)


def generate_database(params: GenParams) -> QSequenceDatabase:
    params.validate()
    rng = np.random.Generator(np.random.PCG64(params.seed))
    utilities = rng.integers(1, params.utility_max + 1, size=params.n_items)
    utable = ExternalUtilityTable({str(i + 1): int(u) for i, u in enumerate(utilities)})
    sampler = ItemSampler(rng, params.n_items, params.zipf_exponent)

    sequences = []
    for sid in range(1, params.n_sequences + 1):
        n_itemsets = 1 + int(rng.poisson(params.avg_itemsets_per_sequence - 1))
        rows = []
        for _ in range(n_itemsets):
            size = 1 + int(rng.poisson(params.avg_items_per_itemset - 1))
            items = sampler.draw(size)
            quantities = rng.integers(1, params.quantity_max + 1, size=len(items))
            rows.append([(str(item), int(q)) for item, q in zip(items, quantities)])
        sequences.append(QSequence.build(sid, rows, utable))
    return QSequenceDatabase(tuple(sequences), utable)


def realized_averages(database: QSequenceDatabase) -> Tuple[float, float]:
    """(average itemsets per sequence, average items per sequence)"""
    if not len(database):
        return 0.0, 0.0
    itemsets = np.array([len(s) for s in database])
    items = np.array([s.item_count() for s in database])
    return float(itemsets.mean()), float(items.mean())


def generate(params: GenParams, out_prefix: Union[str, Path]) -> Tuple[Path, Path]:
    """Write <prefix>.qdb and <prefix>.ut; returns both paths"""
    database = generate_database(params)
    prefix = Path(out_prefix)
    if prefix.parent and not prefix.parent.exists():
        prefix.parent.mkdir(parents=True, exist_ok=True)
    qdb_path = prefix.with_name(prefix.name + ".qdb")
    ut_path = prefix.with_name(prefix.name + ".ut")
    write_qdb(database, qdb_path)
    write_utility_table(database.utable, ut_path)
    avg_itemsets, avg_items = realized_averages(database)
    logger.info(f"Generated {len(database)} sequences (avg {avg_itemsets:.2f} itemsets, "
                f"{avg_items:.2f} items) into {qdb_path}")
    return qdb_path, ut_path
