"""
Q-sequence File Formats
Reader and writer for quantitative sequence databases (SPMF-style -1/-2
delimiters with item[quantity] tokens), external utility tables, result
files and mining statistics
"""

import logging
import math
import re
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import pandas as pd

from errors import ParseError, UtilityMismatch, ValidationError
from sequence_database import (ExternalUtilityTable, Number, Pattern, QSequence,
                               QSequenceDatabase, sort_items)
from sumu_miner import HuospEntry, MiningStats, ResultSet

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

STRICT = "strict"
PERMISSIVE = "permissive"
MODES = (STRICT, PERMISSIVE)

QITEM = re.compile(r"^([^\s\[\]]+)\[(\d+)\]$")
SUTILITY = re.compile(r"^SUtility:(.*)$")
TOKEN = re.compile(r"\S+")
RESULT_LINE = re.compile(r"^(.*) -2 #SUP: (\d+) #UO: ([0-9.eE+-]+)$")


def _number(text: str) -> Number:
    """Parse an int when possible, otherwise a float (decimal point only)"""
    if re.fullmatch(r"[+-]?\d+", text):
        return int(text)
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(text)
    return value


def _format_number(value: Number) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _data_lines(path: PathLike):
    """(line number, text) for every non-blank, non-comment line"""
    with open(path, "r", encoding="utf-8") as f:
        for number, raw in enumerate(f, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield number, line


def parse_utility_table(path: PathLike, strict: bool = True) -> ExternalUtilityTable:
    """One `ITEM <TAB> VALUE` per line"""
    entries: Dict[str, Number] = {}
    for number, line in _data_lines(path):
        fields = list(TOKEN.finditer(line))
        if len(fields) != 2:
            raise ParseError(number, 1, "expected an item id and an external utility")
        item, text = fields[0].group(), fields[1].group()
        column = fields[1].start() + 1
        try:
            value = _number(text)
        except ValueError:
            raise ParseError(number, column, f"'{text}' is not a number") from None
        if value <= 0:
            raise ParseError(number, column, f"external utility of '{item}' must be positive")
        if item in entries:
            raise ParseError(number, 1, f"item '{item}' listed twice")
        entries[item] = value
    try:
        return ExternalUtilityTable(entries, strict=strict)
    except ValidationError as e:
        raise ParseError(0, 0, str(e)) from None


def parse_qdb_line(number: int, line: str):
    """Split one database line into (item, quantity) rows plus the declared SUtility, if any"""
    rows: List[List[tuple]] = []
    current: List[tuple] = []
    declared: Optional[Number] = None
    closed = False
    for match in TOKEN.finditer(line):
        token, column = match.group(), match.start() + 1
        if closed:
            annotation = SUTILITY.match(token)
            if annotation is None or declared is not None:
                raise ParseError(number, column, f"unexpected '{token}' after -2")
            try:
                declared = _number(annotation.group(1))
            except ValueError:
                raise ParseError(number, column, f"bad SUtility value '{annotation.group(1)}'") from None
            continue
        if token == "-1":
            if not current:
                raise ParseError(number, column, "empty itemset")
            rows.append(current)
            current = []
        elif token == "-2":
            if current:
                raise ParseError(number, column, "itemset not closed with -1 before -2")
            if not rows:
                raise ParseError(number, column, "sequence has no itemsets")
            closed = True
        else:
            qitem = QITEM.match(token)
            if qitem is None:
                raise ParseError(number, column, f"malformed q-item '{token}'")
            item, quantity = qitem.group(1), int(qitem.group(2))
            if quantity < 1:
                raise ParseError(number, column, f"quantity of '{item}' must be positive")
            if any(item == seen for seen, _ in current):
                raise ParseError(number, column, f"item '{item}' repeated in one itemset")
            current.append((item, quantity))
    if not closed:
        raise ParseError(number, len(line) + 1, "missing -2 at end of sequence")
    return rows, declared


def parse_qdb(qdb_path: PathLike, utable_path: Optional[PathLike] = None,
              mode: str = STRICT) -> QSequenceDatabase:
    """Read a q-sequence database; without a utility table quantities are final utilities"""
    if mode not in MODES:
        raise ValidationError(f"Unknown parse mode '{mode}', expected strict or permissive")
    strict = mode == STRICT
    if utable_path is not None:
        utable = parse_utility_table(utable_path, strict=strict)
    else:
        utable = ExternalUtilityTable.unit()

    sequences = []
    for number, line in _data_lines(qdb_path):
        rows, declared = parse_qdb_line(number, line)
        if not strict and utable_path is not None:
            for row in rows:
                for item, _ in row:
                    if item not in utable:
                        logger.warning(f"line {number}: item '{item}' has no external utility, using 1")
        sequence = QSequence.build(len(sequences) + 1, rows, utable)
        if declared is not None and not math.isclose(declared, sequence.su, rel_tol=1e-9, abs_tol=1e-9):
            if strict:
                raise UtilityMismatch(sequence.sid, declared, sequence.su)
            logger.warning(f"line {number}: declared SUtility {declared} differs from "
                           f"computed {sequence.su}, keeping the computed value")
        sequences.append(sequence)
    database = QSequenceDatabase(tuple(sequences), utable)
    logger.info(f"Loaded {len(database)} sequences, {len(database.items)} items from {qdb_path}")
    return database


def format_sequence(sequence: QSequence, with_sutility: bool = True) -> str:
    parts = [" ".join(f"{q.item}[{q.quantity}]" for q in itemset.items) for itemset in sequence.itemsets]
    line = " -1 ".join(parts) + " -1 -2"
    if with_sutility:
        line += f" SUtility:{_format_number(sequence.su)}"
    return line


def write_qdb(database: QSequenceDatabase, path: PathLike, with_sutility: bool = True):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for sequence in sorted(database.sequences, key=lambda s: s.sid):
            f.write(format_sequence(sequence, with_sutility) + "\n")


def write_utility_table(utable: ExternalUtilityTable, path: PathLike):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for item in sort_items(utable.entries):
            f.write(f"{item}\t{_format_number(utable.entries[item])}\n")


def format_result(entry: HuospEntry) -> str:
    return f"{entry.pattern.to_spmf()} #SUP: {entry.support} #UO: {entry.uo:.6f}"


def write_results(results: ResultSet, path: PathLike):
    """Canonical order, occupancy with 6 decimals, one header comment"""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"# HUOSPs: {len(results)}\n")
        for entry in results:
            f.write(format_result(entry) + "\n")


def read_results(path: PathLike) -> ResultSet:
    entries = []
    for number, line in _data_lines(path):
        match = RESULT_LINE.match(line.strip())
        if match is None:
            raise ParseError(number, 1, "not a result line")
        itemsets, current = [], []
        for token in match.group(1).split():
            if token == "-1":
                itemsets.append(tuple(current))
                current = []
            else:
                current.append(token)
        if current:
            itemsets.append(tuple(current))
        try:
            pattern = Pattern.of(*itemsets)
        except ValidationError as e:
            raise ParseError(number, 1, str(e)) from None
        entries.append(HuospEntry(pattern, int(match.group(2)), float(match.group(3))))
    return ResultSet(entries)


def write_stats(stats: Union[MiningStats, Iterable[Union[MiningStats, dict]]], path: PathLike,
                as_csv: bool = True):
    """Statistics rows as CSV (pandas) or as a JSON list"""
    if isinstance(stats, MiningStats):
        stats = [stats]
    rows = [s.as_row() if isinstance(s, MiningStats) else dict(s) for s in stats]
    if as_csv:
        pd.DataFrame(rows).to_csv(path, index=False)
    else:
        pd.DataFrame(rows).to_json(path, orient="records", indent=2)
