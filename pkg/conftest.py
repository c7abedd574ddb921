"""
Shared pytest fixtures: the bundled example database and helpers
"""

import os
from pathlib import Path

import pytest

from sequence_database import ExternalUtilityTable, QSequenceDatabase

DATA_DIR = Path(__file__).parent / "data"

WORKED_UTILITIES = {"a": 3, "b": 2, "c": 2, "d": 1, "e": 3, "f": 5, "g": 1}

WORKED_ROWS = [
    [[("b", 2), ("d", 1)], [("g", 1)], [("f", 1)]],
    [[("d", 1)], [("g", 1)]],
    [[("a", 1), ("b", 1)], [("c", 1)], [("c", 2)], [("d", 1)]],
    [[("a", 2), ("b", 1)], [("c", 1)], [("e", 1)]],
    [[("d", 3)], [("b", 1)], [("a", 1)], [("c", 1)], [("e", 1)]],
]


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: large-database runs, enabled with HUOSP_SLOW_TESTS=1")


def pytest_collection_modifyitems(config, items):
    if os.getenv("HUOSP_SLOW_TESTS") == "1":
        return
    skip = pytest.mark.skip(reason="set HUOSP_SLOW_TESTS=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def utable():
    return ExternalUtilityTable(WORKED_UTILITIES)


@pytest.fixture
def worked_db(utable):
    return QSequenceDatabase.from_rows(WORKED_ROWS, utable)


@pytest.fixture
def data_dir():
    return DATA_DIR
