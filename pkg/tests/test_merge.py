import pytest

from ontoclass.errors import UnknownLabel
from ontoclass.forest import RankedPrediction
from ontoclass.merge import (
    apply_merge_mode,
    histogram_to_csv,
    merge,
    rank_histogram,
)


def ranked(labels, term="t"):
    n = len(labels)
    scores = [round((n - i) / sum(range(1, n + 1)), 12) for i in range(n)]
    return RankedPrediction(term=term, ranked_labels=list(labels), scores=scores)


class TestMerge:
    def test_move_to_front(self):
        merged = merge(ranked(["Funds", "Bonds", "Swap"]), "Bonds")
        assert merged.ranked_labels == ["Bonds", "Funds", "Swap"]
        assert merged.pre_merge_rank == 2

    def test_already_first_unchanged(self):
        merged = merge(ranked(["Bonds", "Funds"]), "Bonds")
        assert merged.ranked_labels == ["Bonds", "Funds"]
        assert merged.pre_merge_rank == 1

    def test_unknown_label(self):
        with pytest.raises(UnknownLabel):
            merge(ranked(["Bonds", "Funds"]), "X")

    def test_idempotent(self):
        first = merge(ranked(["Funds", "Bonds", "Swap"]), "Swap")
        again = merge(ranked(first.ranked_labels), "Swap")
        assert again.ranked_labels == first.ranked_labels
        assert again.pre_merge_rank == 1

    def test_preserves_label_multiset(self):
        labels = ["Funds", "Bonds", "Swap", "Option"]
        for target in labels:
            merged = merge(ranked(labels), target)
            assert sorted(merged.ranked_labels) == sorted(labels)

    def test_relative_order_of_rest_preserved(self):
        merged = merge(ranked(["a", "b", "c", "d"]), "c")
        assert merged.ranked_labels == ["c", "a", "b", "d"]

    def test_defaulted_flag_carried(self):
        merged = merge(ranked(["a", "b"]), "b", ontology_defaulted=True)
        assert merged.ontology_defaulted is True


class TestMergeMode:
    def test_always_promotes_defaulted(self):
        merged = apply_merge_mode(ranked(["a", "b"]), "b", True, "always")
        assert merged.ranked_labels == ["b", "a"]

    def test_skip_defaulted_leaves_order(self):
        merged = apply_merge_mode(ranked(["a", "b"]), "b", True, "skip-defaulted")
        assert merged.ranked_labels == ["a", "b"]
        assert merged.pre_merge_rank == 2
        assert merged.ontology_defaulted is True

    def test_skip_defaulted_still_merges_real_predictions(self):
        merged = apply_merge_mode(ranked(["a", "b"]), "b", False, "skip-defaulted")
        assert merged.ranked_labels == ["b", "a"]

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            apply_merge_mode(ranked(["a", "b"]), "b", False, "sometimes")


class TestRankHistogram:
    def test_all_rank_one(self):
        pairs = [(ranked(["a", "b"]), "a") for _ in range(3)]
        assert rank_histogram(pairs) == {1: 3}

    def test_mixed_ranks(self):
        pairs = [
            (ranked(["a", "b"]), "a"),
            (ranked(["a", "b"]), "a"),
            (ranked(["a", "b"]), "b"),
        ]
        assert rank_histogram(pairs) == {1: 2, 2: 1}

    def test_empty(self):
        assert rank_histogram([]) == {}

    def test_counts_sum_to_pairs(self):
        labels = ["a", "b", "c"]
        pairs = [(ranked(labels), labels[i % 3]) for i in range(10)]
        histogram = rank_histogram(pairs)
        assert sum(histogram.values()) == 10

    def test_unknown_label_propagates(self):
        with pytest.raises(UnknownLabel):
            rank_histogram([(ranked(["a"]), "zz")])


class TestHistogramCsv:
    def test_format(self):
        assert histogram_to_csv({2: 1, 1: 3}) == "rank,count\n1,3\n2,1\n"

    def test_empty(self):
        assert histogram_to_csv({}) == "rank,count\n"
