#!/usr/bin/env python3
"""
Tests for the SUMU miner, its variants and its statistics
"""

import pytest

from errors import HuospError, InvalidParams
from occupancy import Thresholds, uo_total
from sequence_database import ExternalUtilityTable, Pattern, QSequenceDatabase, support
from sumu_miner import (VARIANT_STRATEGIES, HuospEntry, MinerConfig, MiningStats, ResultSet,
                        SearchContext, SumuMiner, Variant, count_item_supports, housp_search, mine)
from uol_chain import WorkingDatabase, build_singletons, extend

# Worked example results: pattern -> (support, occupancy)
GOLDEN = {
    "<[a b]>": (2, (5 / 12 + 8 / 13) / 2),
    "<[a b],[c]>": (2, (9 / 12 + 10 / 13) / 2),
    "<[a],[c]>": (3, (7 / 12 + 8 / 13 + 5 / 13) / 3),
    "<[a],[c],[e]>": (2, (11 / 13 + 8 / 13) / 2),
    "<[a],[e]>": (2, (9 / 13 + 6 / 13) / 2),
    "<[b],[c],[e]>": (2, (7 / 13 + 7 / 13) / 2),
    "<[d],[g]>": (2, (2 / 11 + 1) / 2),
}
ROUNDED_3DP = {
    "<[a b]>": 0.516, "<[a b],[c]>": 0.76, "<[a],[c]>": 0.528, "<[a],[c],[e]>": 0.731,
    "<[a],[e]>": 0.577, "<[b],[c],[e]>": 0.538, "<[d],[g]>": 0.59,
}
VARIANTS = [v.value for v in Variant]


@pytest.fixture
def thresholds(worked_db):
    return Thresholds.create(len(worked_db), 0.4, minsup_abs=2)


def as_dict(results):
    return {str(e.pattern): (e.support, e.uo) for e in results}


def test_item_supports(worked_db):
    assert count_item_supports(worked_db) == {"a": 3, "b": 4, "c": 3, "d": 4, "e": 2, "f": 1, "g": 2}


def test_item_supports_empty(utable):
    assert count_item_supports(QSequenceDatabase((), utable)) == {}


def test_variant_strategy_sets():
    assert VARIANT_STRATEGIES[Variant.SIMPLE] == {2, 3}
    assert VARIANT_STRATEGIES[Variant.PEUO] == {1, 2, 3}
    assert VARIANT_STRATEGIES[Variant.TPUO] == {1, 4, 5}
    assert VARIANT_STRATEGIES[Variant.PES] == {1, 2, 3, 6, 7}


def test_config_overrides():
    config = MinerConfig.for_variant("peuo", {3: False, 7: True})
    assert config.strategies == {1, 2, 7}
    assert config.variant is Variant.PEUO
    with pytest.raises(InvalidParams):
        MinerConfig.for_variant("fastest")
    with pytest.raises(InvalidParams):
        MinerConfig(strategies=frozenset({8}))
    with pytest.raises(InvalidParams):
        MinerConfig(max_pattern_length=-1)


@pytest.mark.parametrize("variant", VARIANTS)
def test_worked_example(worked_db, thresholds, variant):
    results, stats = mine(worked_db, thresholds, MinerConfig.for_variant(variant))
    found = as_dict(results)
    assert set(found) == set(GOLDEN)
    for pattern, (sup, uo) in GOLDEN.items():
        assert found[pattern][0] == sup
        assert found[pattern][1] == pytest.approx(uo, abs=1e-9)
        assert found[pattern][1] == pytest.approx(ROUNDED_3DP[pattern], abs=5e-3)
    assert stats.huosps == 7
    assert stats.huosps <= stats.candidates
    assert stats.wall_time_ms < 1000


def test_canonical_result_order(worked_db, thresholds):
    results, _ = mine(worked_db, thresholds)
    assert [str(e.pattern) for e in results] == [
        "<[a b]>", "<[a],[c]>", "<[a],[e]>", "<[d],[g]>",
        "<[a b],[c]>", "<[a],[c],[e]>", "<[b],[c],[e]>",
    ]


def test_emitted_values_match_reference(worked_db, thresholds):
    results, _ = mine(worked_db, thresholds, MinerConfig.for_variant("tpuo"))
    for entry in results:
        assert entry.support == support(entry.pattern, worked_db)
        assert entry.uo == pytest.approx(uo_total(entry.pattern, worked_db), abs=1e-9)


def test_variants_agree(worked_db, thresholds):
    baseline, _ = mine(worked_db, thresholds, MinerConfig.for_variant("simple"))
    for variant in VARIANTS[1:]:
        results, _ = mine(worked_db, thresholds, MinerConfig.for_variant(variant))
        assert baseline.agrees_with(results)
        assert results.entries == baseline.entries


def test_no_pruning_gives_same_result(worked_db, thresholds):
    unpruned, _ = mine(worked_db, thresholds, MinerConfig(Variant.SIMPLE, frozenset()))
    pruned, _ = mine(worked_db, thresholds, MinerConfig.for_variant("pes"))
    assert unpruned.agrees_with(pruned)


def test_candidate_ordering(worked_db, thresholds):
    counts = {v: mine(worked_db, thresholds, MinerConfig.for_variant(v))[1].candidates for v in VARIANTS}
    assert counts["pes"] <= counts["peuo"] <= counts["simple"]
    assert counts["tpuo"] <= counts["peuo"]


def test_pruning_counters(worked_db, thresholds):
    _, stats = mine(worked_db, thresholds, MinerConfig.for_variant("pes"))
    assert stats.pruned[1] == 1
    assert stats.pruned[6] >= 1
    _, simple = mine(worked_db, thresholds, MinerConfig.for_variant("simple"))
    assert simple.pruned[1] == 0
    assert simple.pruned[6] == 0


def test_pes_prunes_before_building_children(worked_db, thresholds):
    db = WorkingDatabase(worked_db)
    a = build_singletons(db, ["a"])[0]
    ace = extend(extend(a, "c", "S", db), "e", "S", db)
    ctx = SearchContext(db, thresholds, MinerConfig.for_variant("pes"))
    housp_search(ace, ctx)
    assert ctx.stats.candidates == 0
    assert ctx.stats.pruned[6] == 1
    assert ctx.results == []


def test_max_pattern_length(worked_db, thresholds):
    results, _ = mine(worked_db, thresholds, MinerConfig.for_variant("pes", max_pattern_length=2))
    assert set(as_dict(results)) == {"<[a b]>", "<[a],[c]>", "<[a],[e]>", "<[d],[g]>"}


def test_threshold_monotonicity(worked_db):
    previous = None
    for minuo in (0.1, 0.3, 0.4, 0.6, 0.8):
        results, _ = mine(worked_db, Thresholds.create(5, minuo, minsup_abs=2))
        if previous is not None:
            assert results.patterns <= previous
        previous = results.patterns
    previous = None
    for minsup in (1, 2, 3, 4):
        results, _ = mine(worked_db, Thresholds.create(5, 0.3, minsup_abs=minsup))
        if previous is not None:
            assert results.patterns <= previous
        previous = results.patterns


def test_minuo_one_on_single_sequence():
    db = QSequenceDatabase.from_rows([[[("a", 1)], [("b", 1)]]], ExternalUtilityTable.unit())
    results, _ = mine(db, Thresholds.create(1, 1.0, minsup_abs=1))
    assert as_dict(results) == {"<[a],[b]>": (1, 1.0)}


def test_empty_database(utable):
    results, stats = mine(QSequenceDatabase((), utable), Thresholds.create(0, 0.5, minsup_abs=1))
    assert len(results) == 0
    assert stats.candidates == 0


def test_parallel_matches_sequential(worked_db, thresholds):
    sequential, _ = mine(worked_db, thresholds, MinerConfig.for_variant("pes"))
    parallel, stats = SumuMiner(MinerConfig.for_variant("pes", threads=2)).mine(worked_db, thresholds)
    assert parallel.entries == sequential.entries
    assert stats.huosps == 7


def test_stats_row_columns(worked_db, thresholds):
    _, stats = mine(worked_db, thresholds)
    row = stats.as_row()
    assert list(row)[:6] == ["variant", "minsup", "minuo", "candidates", "huosps", "ms"]
    assert [k for k in row if k.startswith("pruned_s")] == [f"pruned_s{i}" for i in range(1, 8)]
    assert row["variant"] == "pes"
    assert row["peak_memory_mb"] > 0
    assert row["peak_patterns_alive"] >= 1


def test_stats_absorb():
    total = MiningStats(candidates=3, peak_patterns_alive=2)
    part = MiningStats(candidates=4, peak_patterns_alive=5)
    part.pruned[6] = 2
    total.absorb(part)
    assert (total.candidates, total.peak_patterns_alive, total.pruned[6]) == (7, 5, 2)


def test_result_set_diff():
    ab, ac, dg = Pattern.of("ab"), Pattern.of("a", "c"), Pattern.of("d", "g")
    left = ResultSet([HuospEntry(ab, 2, 0.5), HuospEntry(ac, 3, 0.52)])
    right = ResultSet([HuospEntry(ab, 2, 0.5 + 1e-12), HuospEntry(dg, 2, 0.59), HuospEntry(ac, 2, 0.52)])
    diff = left.diff(right)
    assert diff
    assert [e.pattern for e in diff.only_right] == [dg]
    assert [a.pattern for a, _ in diff.mismatched] == [ac]
    assert diff.only_left == []
    assert not left.diff(ResultSet(left.entries))
    with pytest.raises(HuospError):
        left.add(HuospEntry(ab, 2, 0.5))


def test_leading_zero_ids_mine_as_separate_items():
    rows = [[[("01", 1), ("1", 1)], [("2", 1)]]] * 2
    db = QSequenceDatabase.from_rows(rows, ExternalUtilityTable.unit())
    results, _ = mine(db, Thresholds.create(2, 0.5, minsup_abs=2))
    assert set(as_dict(results)) == {"<[01 1]>", "<[01],[2]>", "<[1],[2]>", "<[01 1],[2]>"}
    assert results.get(Pattern.of(["01", "1"], ["2"])).uo == pytest.approx(1.0)
