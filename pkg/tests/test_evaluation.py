import numpy as np
import pytest

from ontoclass.errors import (
    GoldMissingFromRanking,
    LengthMismatch,
    MalformedRow,
    UnknownGoldLabel,
)
from ontoclass.evaluation import (
    Dataset,
    accuracy,
    average_label_rank,
    evaluate_pipeline,
    load_dataset,
    report_from_labels,
    report_from_rankings,
    split,
)
from ontoclass.forest import ForestConfig
from ontoclass.graph import LabelSet, graph_from_edges
from ontoclass.text import SynonymLexicon


class TestLoadDataset:
    def test_fixture_has_614_rows(self, fixtures_dir, task_labels):
        ds = load_dataset(fixtures_dir / "train_614.csv", task_labels)
        assert len(ds) == 614

    def test_unknown_gold_label(self, tmp_path, task_labels):
        path = tmp_path / "data.csv"
        path.write_text("term,label\nfoo,Foo\n", encoding="utf-8")
        with pytest.raises(UnknownGoldLabel) as err:
            load_dataset(path, task_labels)
        assert err.value.line_number == 2

    def test_header_only_is_empty(self, tmp_path, task_labels):
        path = tmp_path / "data.csv"
        path.write_text("term,label\n", encoding="utf-8")
        assert len(load_dataset(path, task_labels)) == 0

    def test_bad_header(self, tmp_path, task_labels):
        path = tmp_path / "data.csv"
        path.write_text("a,b\nfoo,Bonds\n", encoding="utf-8")
        with pytest.raises(MalformedRow):
            load_dataset(path, task_labels)

    def test_missing_header(self, tmp_path, task_labels):
        path = tmp_path / "data.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(MalformedRow):
            load_dataset(path, task_labels)

    def test_wrong_field_count(self, tmp_path, task_labels):
        path = tmp_path / "data.csv"
        path.write_text("term,label\nfoo,Bonds,extra\n", encoding="utf-8")
        with pytest.raises(MalformedRow) as err:
            load_dataset(path, task_labels)
        assert err.value.line_number == 2

    def test_quoted_comma_in_term(self, tmp_path, task_labels):
        path = tmp_path / "data.csv"
        path.write_text('term,label\n"swap, exotic",Swap\n', encoding="utf-8")
        ds = load_dataset(path, task_labels)
        assert ds.records == [("swap, exotic", "Swap")]

    def test_file_order_preserved(self, tmp_path, task_labels):
        path = tmp_path / "data.csv"
        path.write_text("term,label\nb,Swap\na,Bonds\n", encoding="utf-8")
        assert load_dataset(path, task_labels).terms == ["b", "a"]


def toy_dataset(n):
    return Dataset([(f"term {i}", "Swap" if i % 2 else "Bonds") for i in range(n)])


class TestSplit:
    def test_614_at_90_percent(self):
        train, test = split(toy_dataset(614), 0.9, seed=0)
        assert (len(train), len(test)) == (552, 62)

    def test_two_records_half(self):
        train, test = split(toy_dataset(2), 0.5, seed=0)
        assert (len(train), len(test)) == (1, 1)

    def test_same_seed_identical(self):
        ds = toy_dataset(50)
        first = split(ds, 0.8, seed=9)
        second = split(ds, 0.8, seed=9)
        assert first[0].records == second[0].records
        assert first[1].records == second[1].records

    def test_partition_over_many_seeds(self):
        ds = toy_dataset(37)
        for seed in range(100):
            train, test = split(ds, 0.7, seed=seed)
            combined = sorted(train.records + test.records)
            assert combined == sorted(ds.records)
            assert len(train) == 25  # floor(0.7 * 37)

    def test_stratified_keeps_proportions(self):
        ds = Dataset(
            [(f"a{i}", "Bonds") for i in range(40)]
            + [(f"b{i}", "Swap") for i in range(10)]
        )
        train, test = split(ds, 0.8, seed=3, stratify=True)
        train_bonds = sum(1 for _, g in train.records if g == "Bonds")
        train_swaps = sum(1 for _, g in train.records if g == "Swap")
        assert train_bonds == 32  # floor(0.8 * 40)
        assert train_swaps == 8  # floor(0.8 * 10)
        assert sorted(train.records + test.records) == sorted(ds.records)

    def test_stratified_deterministic(self):
        ds = Dataset(
            [(f"a{i}", "Bonds") for i in range(15)]
            + [(f"b{i}", "Swap") for i in range(15)]
        )
        first = split(ds, 0.6, seed=11, stratify=True)
        second = split(ds, 0.6, seed=11, stratify=True)
        assert first[0].records == second[0].records
        assert first[1].records == second[1].records

    def test_bad_fraction(self):
        with pytest.raises(ValueError):
            split(toy_dataset(4), 1.0, seed=0)
        with pytest.raises(ValueError):
            split(toy_dataset(4), 0.0, seed=0)

    def test_empty_dataset(self):
        with pytest.raises(ValueError):
            split(Dataset([]), 0.5, seed=0)


class TestAccuracy:
    def test_535_of_614(self):
        predictions = [["G", "X"]] * 535 + [["X", "G"]] * 79
        golds = ["G"] * 614
        result = accuracy(predictions, golds)
        assert abs(result - 535 / 614) < 1e-15
        assert round(result, 2) == 0.87

    def test_all_correct(self):
        assert accuracy([["a"], ["a"]], ["a", "a"]) == 1.0

    def test_none_correct(self):
        assert accuracy([["b"], ["b"]], ["a", "a"]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            accuracy([["a"]], ["a", "b"])
        with pytest.raises(LengthMismatch):
            accuracy([], [])


class TestAverageLabelRank:
    def test_mixed_ranks(self):
        predictions = [
            ["g", "x"],  # rank 1
            ["x", "g"],  # rank 2
            ["g", "x"],  # rank 1
            ["x", "g"],  # rank 2
        ]
        assert average_label_rank(predictions, ["g"] * 4) == 1.5

    def test_perfect(self):
        assert average_label_rank([["g", "x"]] * 3, ["g"] * 3) == 1.0

    def test_worst_case_ten_labels(self):
        ranking = [f"l{i}" for i in range(9)] + ["g"]
        assert average_label_rank([ranking] * 5, ["g"] * 5) == 10.0

    def test_gold_missing(self):
        with pytest.raises(GoldMissingFromRanking):
            average_label_rank([["a", "b"]], ["z"])

    def test_bounds_on_random_sets(self):
        rng = np.random.default_rng(55)
        labels = [f"l{i}" for i in range(7)]
        for _ in range(300):
            n = int(rng.integers(1, 30))
            predictions = []
            golds = []
            for _ in range(n):
                order = rng.permutation(7)
                predictions.append([labels[i] for i in order])
                golds.append(labels[int(rng.integers(0, 7))])
            rank = average_label_rank(predictions, golds)
            acc = accuracy(predictions, golds)
            assert 1.0 <= rank <= len(labels)
            assert 0.0 <= acc <= 1.0
            assert (rank == 1.0) == (acc == 1.0)

    def test_rank_one_iff_accuracy_one(self):
        predictions = [["g", "x"], ["g", "x"]]
        golds = ["g", "g"]
        assert accuracy(predictions, golds) == 1.0
        assert average_label_rank(predictions, golds) == 1.0


class TestReports:
    def test_report_from_rankings(self):
        predictions = [["a", "b"], ["b", "a"], ["a", "b"]]
        golds = ["a", "a", "b"]
        report = report_from_rankings(predictions, golds)
        assert report.n == 3
        assert report.accuracy == pytest.approx(1 / 3)
        assert report.average_label_rank == pytest.approx((1 + 2 + 2) / 3)
        assert report.per_label_accuracy == {"a": 0.5, "b": 0.0}
        assert report.rank_histogram == {1: 1, 2: 2}

    def test_report_from_labels(self):
        report = report_from_labels(["a", "b", "b"], ["a", "a", "b"])
        assert report.accuracy == pytest.approx(2 / 3)
        assert report.average_label_rank is None
        assert report.rank_histogram is None

    def test_report_serialization(self):
        report = report_from_rankings([["a", "b"]], ["a"])
        doc = report.to_dict()
        assert doc["rank_histogram"] == {"1": 1}
        assert doc["average_label_rank"] == 1.0


def pipeline_fixture(tmp_path):
    """Tiny end-to-end fixture: clean clusters plus OOV terms the forest
    cannot place but the ontology can."""
    graph = graph_from_edges(
        [
            ("bond", "bonds"),
            ("debenture", "bond"),
            ("swap", "contract"),
            ("fund", "funds"),
        ]
    )
    labels = LabelSet(["Bonds", "Swap", "Funds"], "Swap")
    lexicon = SynonymLexicon()

    vec_path = tmp_path / "vectors.txt"
    vec_path.write_text(
        "3 2\nbond 4 0\nswap 0 4\nfund -4 -4\n",
        encoding="utf-8",
    )
    from ontoclass.embeddings import load_embeddings

    table = load_embeddings(vec_path)

    train_records = []
    for i in range(6):
        train_records.append((f"bond {'x' * (i + 1)}", "Bonds"))
        train_records.append((f"swap {'y' * (i + 1)}", "Swap"))
        train_records.append((f"fund {'z' * (i + 1)}", "Funds"))
    train_ds = Dataset(train_records)
    return graph, labels, lexicon, table, train_ds


class TestEvaluatePipeline:
    def test_ontology_always_right_forces_rank_one(self, tmp_path):
        graph, labels, lexicon, table, train_ds = pipeline_fixture(tmp_path)
        test_ds = Dataset([("bond", "Bonds"), ("swap", "Swap"), ("fund", "Funds")])
        outcome = evaluate_pipeline(
            train_ds, test_ds, graph, labels, lexicon, table,
            ForestConfig(n_trees=5, seed=1),
        )
        assert outcome.ontology.accuracy == 1.0
        assert outcome.merged.average_label_rank == 1.0

    def test_ontology_wrong_forest_right_yields_rank_two(self, tmp_path):
        # "debenture bond ... swap": reverse word order maps via "swap" to
        # Swap (wrong), while its vector sits in the Bonds cluster, so the
        # forest ranks Bonds first; the merged list must hold gold at 2.
        graph, labels, lexicon, table, train_ds = pipeline_fixture(tmp_path)
        test_ds = Dataset([("bond bond swap", "Bonds")])
        outcome = evaluate_pipeline(
            train_ds, test_ds, graph, labels, lexicon, table,
            ForestConfig(n_trees=5, seed=1),
        )
        assert outcome.ontology.accuracy == 0.0
        assert outcome.forest.accuracy == 1.0
        merged = outcome.predictions[0]
        assert merged.ranked_labels[0] == "Swap"
        assert merged.ranked_labels[1] == "Bonds"
        assert outcome.merged.average_label_rank == 2.0

    def test_merged_beats_forest_when_ontology_stronger(self, tmp_path):
        # "swap debenture": the only in-vocabulary token drags the vector
        # into the Swap cluster, fooling the forest, while the ontology
        # reads the last word and generalizes debenture -> bond -> bonds.
        # Ontology accuracy > forest accuracy, hence merged rank <= forest.
        graph, labels, lexicon, table, train_ds = pipeline_fixture(tmp_path)
        test_rows = [
            ("swap debenture", "Bonds"),
            ("fund debenture", "Bonds"),
            ("swap debenture", "Bonds"),
            ("bond", "Bonds"),
            ("swap", "Swap"),
            ("fund", "Funds"),
        ]
        outcome = evaluate_pipeline(
            train_ds, Dataset(test_rows), graph, labels, lexicon, table,
            ForestConfig(n_trees=5, seed=1),
        )
        assert outcome.ontology.accuracy == 1.0
        assert outcome.forest.accuracy == 0.5
        assert outcome.ontology.accuracy > outcome.forest.accuracy
        assert outcome.merged.average_label_rank <= outcome.forest.average_label_rank
        assert outcome.merged.average_label_rank == 1.0

    def test_histogram_counts_sum_to_test_size(self, tmp_path):
        graph, labels, lexicon, table, train_ds = pipeline_fixture(tmp_path)
        test_ds = Dataset([("bond", "Bonds"), ("swap", "Swap"), ("zzz", "Funds")])
        outcome = evaluate_pipeline(
            train_ds, test_ds, graph, labels, lexicon, table,
            ForestConfig(n_trees=5, seed=1),
        )
        assert sum(outcome.ontology_rank_histogram.values()) == len(test_ds)

    def test_merged_rank_coarse_bound(self, tmp_path):
        # merged avg rank <= 1 + (ontology-wrong count) * |labels| / n:
        # correct instances land at rank 1, wrong ones at worst at |labels|
        graph, labels, lexicon, table, train_ds = pipeline_fixture(tmp_path)
        rows = [
            ("swap debenture", "Bonds"),
            ("bond", "Bonds"),
            ("swap", "Swap"),
            ("fund", "Funds"),
            ("zzz unknown", "Funds"),
            ("fund debenture", "Bonds"),
        ]
        outcome = evaluate_pipeline(
            train_ds, Dataset(rows), graph, labels, lexicon, table,
            ForestConfig(n_trees=5, seed=1),
        )
        n = len(rows)
        wrong = round(n * (1.0 - outcome.ontology.accuracy))
        bound = 1.0 + wrong * len(labels.labels) / n
        assert outcome.merged.average_label_rank <= bound

    def test_skip_defaulted_mode_changes_merged_list(self, tmp_path):
        # "zzz unknown" defaults to the Swap label; skip-defaulted leaves the
        # forest's order alone for it, always-mode promotes the default.
        graph, labels, lexicon, table, train_ds = pipeline_fixture(tmp_path)
        test_ds = Dataset([("zzz unknown", "Funds")])
        always = evaluate_pipeline(
            train_ds, test_ds, graph, labels, lexicon, table,
            ForestConfig(n_trees=5, seed=1), merge_mode="always",
        )
        skipped = evaluate_pipeline(
            train_ds, test_ds, graph, labels, lexicon, table,
            ForestConfig(n_trees=5, seed=1), merge_mode="skip-defaulted",
        )
        promoted = always.predictions[0]
        untouched = skipped.predictions[0]
        assert promoted.ontology_defaulted and untouched.ontology_defaulted
        assert promoted.ranked_labels[0] == "Swap"
        # skip mode keeps the forest's order, so the ontology label sits
        # exactly where pre_merge_rank says it was
        assert untouched.ranked_labels.index("Swap") + 1 == untouched.pre_merge_rank
        assert untouched.pre_merge_rank == promoted.pre_merge_rank
        rest = [l for l in promoted.ranked_labels if l != "Swap"]
        assert rest == [l for l in untouched.ranked_labels if l != "Swap"]
