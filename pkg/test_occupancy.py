#!/usr/bin/env python3
"""
Tests for the reference utility occupancy and upper-bound functions
"""

import pytest

from errors import (InvalidThresholds, NoOccurrence, NotAGenerator, PositionOutOfRange,
                    ZeroUtilitySequence)
from occupancy import (Thresholds, TopValues, pes_total, peuo_in_sequence, peuo_total,
                       ruo_at_position, rss_total, rsuo_total, top_sum, tpuo_total, tsuo_total,
                       uo_at_position, uo_in_sequence, uo_total)
from sequence_database import Pattern, QItem, QItemset, QSequence

A = Pattern.of("a")
AC = Pattern.of("a", "c")


class TestThresholds:
    def test_absolute(self):
        t = Thresholds.create(5, 0.4, minsup_abs=2)
        assert (t.minsup_abs, t.minuo) == (2, 0.4)

    def test_relative_rounds_up(self):
        assert Thresholds.create(5, 0.4, minsup_rel=0.3).minsup_abs == 2
        assert Thresholds.create(5, 0.4, minsup_rel=0.01).minsup_abs == 1

    @pytest.mark.parametrize("rel, size, expected", [(0.07, 100, 7), (0.3, 10, 3), (0.7, 10, 7), (0.6, 5, 3),
                                                     (0.29, 100, 29), (0.14, 50, 7)])
    def test_relative_uses_the_decimal_value(self, rel, size, expected):
        assert Thresholds.create(size, 0.4, minsup_rel=rel).minsup_abs == expected

    def test_exactly_one_minsup(self):
        with pytest.raises(InvalidThresholds):
            Thresholds.create(5, 0.4)
        with pytest.raises(InvalidThresholds):
            Thresholds.create(5, 0.4, minsup_abs=2, minsup_rel=0.4)

    @pytest.mark.parametrize("minuo", [0, -0.1, 1.5, 1.0 + 1e-6])
    def test_minuo_range(self, minuo):
        with pytest.raises(InvalidThresholds, match=r"\(0, 1\]"):
            Thresholds.create(5, minuo, minsup_abs=2)

    def test_minuo_one_is_valid(self):
        assert Thresholds.create(1, 1.0, minsup_abs=1).minuo == 1.0

    def test_minsup_bounded_by_database(self):
        with pytest.raises(InvalidThresholds):
            Thresholds.create(5, 0.4, minsup_abs=6)
        with pytest.raises(InvalidThresholds):
            Thresholds.create(5, 0.4, minsup_abs=0)

    def test_accepts_with_tolerance(self):
        t = Thresholds.create(5, 0.4, minsup_abs=2)
        assert t.accepts(2, 0.4 - 1e-12)
        assert not t.accepts(1, 0.9)
        assert not t.accepts(2, 0.39)


def test_top_sum():
    assert top_sum([3, 1, 2], 2) == 5
    assert top_sum([3, 1], 5) == 4
    assert top_sum([], 2) == 0
    top = TopValues(2)
    for value in [0.2, 0.9, 0.5, 0.1]:
        top.push(value)
    assert top.descending() == [0.9, 0.5]


def test_uo_in_sequence(worked_db):
    assert uo_in_sequence(Pattern.of("ab"), worked_db.by_sid(3)) == pytest.approx(5 / 12)
    assert uo_in_sequence(Pattern.of("ab"), worked_db.by_sid(4)) == pytest.approx(8 / 13)


def test_uo_total(worked_db):
    assert uo_total(Pattern.of("ab"), worked_db) == pytest.approx(0.516026, abs=1e-6)
    assert uo_total(Pattern.of("d", "g"), worked_db) == pytest.approx((2 / 11 + 1) / 2)
    with pytest.raises(NoOccurrence):
        uo_total(Pattern.of("g", "d"), worked_db)


def test_uo_at_position(worked_db):
    s3 = worked_db.by_sid(3)
    assert uo_at_position(AC, s3, 2) == pytest.approx(5 / 12)
    assert uo_at_position(AC, s3, 3) == pytest.approx(7 / 12)
    with pytest.raises(NoOccurrence):
        uo_at_position(AC, s3, 1)


def test_ruo_counts_items_after_the_last_item(worked_db):
    s4 = worked_db.by_sid(4)
    assert ruo_at_position(A, s4, 1) == pytest.approx(7 / 13)
    assert ruo_at_position(Pattern.of("ab"), s4, 1) == pytest.approx(5 / 13)
    assert ruo_at_position(Pattern.of("e"), s4, 3) == 0
    for position in (0, 4):
        with pytest.raises(PositionOutOfRange):
            ruo_at_position(A, s4, position)


def test_zero_utility_sequence():
    empty = QSequence(9, (QItemset((QItem("a", 1, 3),)),), 0)
    with pytest.raises(ZeroUtilitySequence):
        uo_in_sequence(A, empty)


def test_peuo_values(worked_db):
    assert peuo_in_sequence(A, worked_db.by_sid(3)) == pytest.approx(1.0)
    assert peuo_in_sequence(A, worked_db.by_sid(4)) == pytest.approx(1.0)
    assert peuo_in_sequence(A, worked_db.by_sid(5)) == pytest.approx(8 / 13)
    assert peuo_in_sequence(Pattern.of("a", "c", "e"), worked_db.by_sid(4)) == 0


def test_depth_bounds(worked_db):
    assert peuo_total(A, worked_db, 2) == pytest.approx((2 + 8 / 13) / 2)
    assert tpuo_total(A, worked_db, 2) == pytest.approx(1.0)
    assert pes_total(A, worked_db) == 3
    assert pes_total(Pattern.of("a", "c", "e"), worked_db) == 0
    assert tpuo_total(A, worked_db, 2) <= peuo_total(A, worked_db, 2)


def test_width_bounds(worked_db):
    assert rsuo_total(AC, A, worked_db, 2) == pytest.approx((2 + 8 / 13) / 2)
    assert tsuo_total(AC, A, worked_db, 2) == pytest.approx(1.0)
    assert rss_total(AC, A, worked_db) == 3
    assert rss_total(Pattern.of("ab"), A, worked_db) == 2


def test_width_bounds_need_a_generator(worked_db):
    with pytest.raises(NotAGenerator):
        rsuo_total(Pattern.of("a", "c", "e"), A, worked_db, 2)
    with pytest.raises(NotAGenerator):
        rss_total(Pattern.of("b", "c"), A, worked_db)


def test_bounds_cover_extensions(worked_db):
    for child in (AC, Pattern.of("ab"), Pattern.of("a", "e")):
        assert uo_total(child, worked_db) <= peuo_total(A, worked_db, 2) + 1e-9
        assert peuo_total(child, worked_db, 2) <= peuo_total(A, worked_db, 2) + 1e-9
        assert pes_total(child, worked_db) <= pes_total(A, worked_db)
