"""Dataset loading, deterministic splitting, and ranking metrics.

Two metrics matter here: accuracy (fraction of instances whose rank-1 label
is the gold label) and average label rank (mean 1-based position of the
gold label in the ranked list; 1.0 is perfect). Metric reductions are plain
sums, so evaluation order never changes a result.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .embeddings import EmbeddingTable, vectorize
from .errors import (
    GoldMissingFromRanking,
    LengthMismatch,
    MalformedRow,
    UnknownGoldLabel,
)
from .forest import ForestConfig, rank_labels
from .forest import train as train_forest
from .graph import HypernymGraph, LabelSet
from .mapping import (
    SYNONYM_STAGE_SECOND_PASS,
    WORD_ORDER_REVERSE,
    map_and_classify,
)
from .merge import MERGE_ALWAYS, MergedPrediction, apply_merge_mode, pre_merge_rank
from .text import SynonymLexicon

DATASET_HEADER = ("term", "label")


@dataclass
class Dataset:
    """Ordered (term, gold label) records."""

    records: list[tuple[str, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def terms(self) -> list[str]:
        return [term for term, _ in self.records]

    @property
    def golds(self) -> list[str]:
        return [gold for _, gold in self.records]


def load_dataset(path: str | Path, labels: LabelSet) -> Dataset:
    """Read a `term,label` CSV, validating every gold label."""
    records: list[tuple[str, str]] = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedRow(1, "missing header") from None
        if tuple(header) != DATASET_HEADER:
            raise MalformedRow(1, f"expected header term,label, got {header}")
        known = set(labels.labels)
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise MalformedRow(reader.line_num, f"expected 2 fields, got {len(row)}")
            term, gold = row
            if gold not in known:
                raise UnknownGoldLabel(reader.line_num, gold)
            records.append((term, gold))
    return Dataset(records)


def split(
    ds: Dataset,
    train_fraction: float,
    seed: int,
    stratify: bool = False,
) -> tuple[Dataset, Dataset]:
    """Seeded shuffle split: floor(fraction*n) records to train, rest to test.

    With stratify=True the floor rule applies per gold label instead, which
    keeps label proportions but may shift the overall sizes slightly.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be strictly between 0 and 1")
    if not ds.records:
        raise ValueError("cannot split an empty dataset")
    rng = np.random.default_rng(seed)
    if not stratify:
        perm = rng.permutation(len(ds.records))
        cut = math.floor(train_fraction * len(ds.records))
        train = [ds.records[i] for i in perm[:cut]]
        test = [ds.records[i] for i in perm[cut:]]
        return Dataset(train), Dataset(test)

    by_label: dict[str, list[int]] = {}
    for i, (_, gold) in enumerate(ds.records):
        by_label.setdefault(gold, []).append(i)
    train, test = [], []
    for gold in sorted(by_label):
        indices = by_label[gold]
        perm = rng.permutation(len(indices))
        cut = math.floor(train_fraction * len(indices))
        train.extend(ds.records[indices[i]] for i in perm[:cut])
        test.extend(ds.records[indices[i]] for i in perm[cut:])
    return Dataset(train), Dataset(test)


def accuracy(predictions: Sequence[Sequence[str]], golds: Sequence[str]) -> float:
    """Fraction of instances whose rank-1 label equals the gold label."""
    if len(predictions) != len(golds) or not golds:
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(golds)} golds (both must be nonzero)"
        )
    hits = sum(1 for ranked, gold in zip(predictions, golds) if ranked[0] == gold)
    return hits / len(golds)


def gold_ranks(
    predictions: Sequence[Sequence[str]], golds: Sequence[str]
) -> list[int]:
    """1-based rank of each gold label within its ranked list."""
    if len(predictions) != len(golds) or not golds:
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(golds)} golds (both must be nonzero)"
        )
    ranks = []
    for ranked, gold in zip(predictions, golds):
        try:
            ranks.append(list(ranked).index(gold) + 1)
        except ValueError:
            raise GoldMissingFromRanking(
                f"gold label {gold!r} missing from ranked list"
            ) from None
    return ranks


def average_label_rank(
    predictions: Sequence[Sequence[str]], golds: Sequence[str]
) -> float:
    """Mean 1-based rank of the gold label; lower is better, 1.0 is perfect."""
    ranks = gold_ranks(predictions, golds)
    return sum(ranks) / len(ranks)


@dataclass
class EvalReport:
    """Metrics for one prediction source.

    average_label_rank and rank_histogram are None for sources that emit a
    single label rather than a full ranking (the ontology classifier).
    rank_histogram counts the gold label's rank per instance.
    """

    n: int
    accuracy: float
    average_label_rank: Optional[float]
    per_label_accuracy: dict[str, float]
    rank_histogram: Optional[dict[int, int]]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "accuracy": self.accuracy,
            "average_label_rank": self.average_label_rank,
            "per_label_accuracy": dict(self.per_label_accuracy),
            "rank_histogram": (
                None
                if self.rank_histogram is None
                else {str(k): v for k, v in sorted(self.rank_histogram.items())}
            ),
        }


def _per_label_accuracy(
    top_labels: Sequence[str], golds: Sequence[str]
) -> dict[str, float]:
    totals: Counter[str] = Counter()
    hits: Counter[str] = Counter()
    for top, gold in zip(top_labels, golds):
        totals[gold] += 1
        if top == gold:
            hits[gold] += 1
    return {gold: hits[gold] / totals[gold] for gold in sorted(totals)}


def report_from_rankings(
    predictions: Sequence[Sequence[str]], golds: Sequence[str]
) -> EvalReport:
    """Full report for a source that ranks every label."""
    ranks = gold_ranks(predictions, golds)
    top = [ranked[0] for ranked in predictions]
    return EvalReport(
        n=len(golds),
        accuracy=accuracy(predictions, golds),
        average_label_rank=sum(ranks) / len(ranks),
        per_label_accuracy=_per_label_accuracy(top, golds),
        rank_histogram=dict(Counter(ranks)),
    )


def report_from_labels(pred_labels: Sequence[str], golds: Sequence[str]) -> EvalReport:
    """Accuracy-only report for a single-label source."""
    if len(pred_labels) != len(golds) or not golds:
        raise LengthMismatch(
            f"{len(pred_labels)} predictions vs {len(golds)} golds (both must be nonzero)"
        )
    hits = sum(1 for top, gold in zip(pred_labels, golds) if top == gold)
    return EvalReport(
        n=len(golds),
        accuracy=hits / len(golds),
        average_label_rank=None,
        per_label_accuracy=_per_label_accuracy(pred_labels, golds),
        rank_histogram=None,
    )


@dataclass
class PipelineOutcome:
    """Everything one evaluation run produces."""

    forest: EvalReport
    ontology: EvalReport
    merged: EvalReport
    ontology_rank_histogram: dict[int, int]
    predictions: list[MergedPrediction]


def evaluate_pipeline(
    train: Dataset,
    test: Dataset,
    graph: HypernymGraph,
    labels: LabelSet,
    lexicon: SynonymLexicon,
    table: EmbeddingTable,
    forest_config: ForestConfig,
    merge_mode: str = MERGE_ALWAYS,
    synonym_stage: str = SYNONYM_STAGE_SECOND_PASS,
    word_order: str = WORD_ORDER_REVERSE,
) -> PipelineOutcome:
    """Train the forest, classify the test set three ways, report all three.

    Produces reports for the forest ranking alone, the ontology classifier
    alone (accuracy only), and the merged output, plus the histogram of
    where ontology labels ranked in the forest's lists before merging.
    """
    X_train = np.vstack([vectorize(term, table).values for term in train.terms])
    model = train_forest(X_train, train.golds, forest_config)

    forest_rankings: list[list[str]] = []
    ontology_labels: list[str] = []
    merged_predictions: list[MergedPrediction] = []
    pre_ranks: Counter[int] = Counter()
    for term in test.terms:
        rf = rank_labels(model, vectorize(term, table).values, term=term)
        trace = map_and_classify(
            term,
            graph,
            labels,
            lexicon,
            synonym_stage=synonym_stage,
            word_order=word_order,
        )
        pre_ranks[pre_merge_rank(rf, trace.final_label)] += 1
        merged_predictions.append(
            apply_merge_mode(rf, trace.final_label, trace.defaulted, merge_mode)
        )
        forest_rankings.append(list(rf.ranked_labels))
        ontology_labels.append(trace.final_label)

    golds = test.golds
    return PipelineOutcome(
        forest=report_from_rankings(forest_rankings, golds),
        ontology=report_from_labels(ontology_labels, golds),
        merged=report_from_rankings(
            [m.ranked_labels for m in merged_predictions], golds
        ),
        ontology_rank_histogram=dict(pre_ranks),
        predictions=merged_predictions,
    )
