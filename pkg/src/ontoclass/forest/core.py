"""Deterministic random forest over concept vectors, built from scratch.

CART trees with Gini impurity, bootstrap resampling, and per-node feature
subsampling (floor(sqrt(dim)) candidates). Every tree draws from its own
RNG stream derived from (seed, tree index), so training is reproducible
and trees could be grown concurrently without changing the result; models
are immutable after training and safe to share across threads.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..errors import (
    CorruptModel,
    DegenerateData,
    DimensionMismatch,
    LengthMismatch,
    NonFiniteValue,
    SchemaVersionMismatch,
)
from ._kernel import best_split_sorted

SCHEMA_VERSION = 1
MODEL_KIND = "random-forest"


@dataclass(frozen=True)
class ForestConfig:
    """Hyperparameters; the per-node feature budget is always floor(sqrt(dim))."""

    n_trees: int = 100
    max_depth: Optional[int] = None
    min_samples_split: int = 2
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive when set")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass
class Tree:
    """Flat-array decision tree.

    feature[i] == -1 marks a leaf; internal nodes route x[feature] <= threshold
    to left, else right. counts[i] holds the leaf's class-count vector (None
    for internal nodes). Nodes are appended as they are grown, so every node
    is reachable from index 0.
    """

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    counts: list[Optional[list[int]]] = field(default_factory=list)

    def leaf_counts(self, x: np.ndarray) -> list[int]:
        i = 0
        while self.feature[i] != -1:
            i = self.left[i] if x[self.feature[i]] <= self.threshold[i] else self.right[i]
        counts = self.counts[i]
        assert counts is not None
        return counts


@dataclass
class ForestModel:
    config: ForestConfig
    classes: list[str]
    dim: int
    trees: list[Tree]


@dataclass
class RankedPrediction:
    """All labels ordered from most to least probable.

    ranked_labels is an exact permutation of the model's classes; scores are
    the matching probabilities, non-increasing and summing to 1.
    """

    term: str
    ranked_labels: list[str]
    scores: list[float]

    def to_dict(self) -> dict:
        return {
            "term": self.term,
            "ranked_labels": list(self.ranked_labels),
            "scores": list(self.scores),
        }


def _grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    config: ForestConfig,
    rng: np.random.Generator,
    max_features: int,
) -> Tree:
    n, dim = X.shape
    tree = Tree()

    if config.bootstrap:
        root_idx = rng.integers(0, n, size=n)
    else:
        root_idx = np.arange(n)

    # (sample indices, depth, parent node, attach-as-left); parent -1 = root
    stack: list[tuple[np.ndarray, int, int, bool]] = [(root_idx, 0, -1, False)]
    while stack:
        idx, depth, parent, is_left = stack.pop()
        node_counts = np.bincount(y[idx], minlength=n_classes)

        split = None
        stopped = (
            idx.size < config.min_samples_split
            or np.count_nonzero(node_counts) <= 1
            or (config.max_depth is not None and depth >= config.max_depth)
        )
        if not stopped:
            split = _best_split(X, y, idx, n_classes, rng, max_features)

        node = len(tree.feature)
        if parent >= 0:
            if is_left:
                tree.left[parent] = node
            else:
                tree.right[parent] = node

        if split is None:
            tree.feature.append(-1)
            tree.threshold.append(0.0)
            tree.left.append(-1)
            tree.right.append(-1)
            tree.counts.append([int(c) for c in node_counts])
            continue

        feature, threshold = split
        tree.feature.append(feature)
        tree.threshold.append(threshold)
        tree.left.append(-1)
        tree.right.append(-1)
        tree.counts.append(None)
        mask = X[idx, feature] <= threshold
        # right pushed first so the left child is grown (and numbered) next
        stack.append((idx[~mask], depth + 1, node, False))
        stack.append((idx[mask], depth + 1, node, True))
    return tree


def _best_split(
    X: np.ndarray,
    y: np.ndarray,
    idx: np.ndarray,
    n_classes: int,
    rng: np.random.Generator,
    max_features: int,
) -> Optional[tuple[int, float]]:
    """Best (feature, threshold) over a random feature sample, or None.

    Features are visited in a seeded random order; constant features do not
    consume the budget, so a split is found whenever any feature varies
    within the node. Ties keep the earlier feature in visit order.
    """
    budget = max_features
    best_score = 0.0
    best: Optional[tuple[int, float]] = None
    y_node = y[idx]
    for feature in rng.permutation(X.shape[1]):
        values = X[idx, feature]
        order = np.argsort(values, kind="stable")
        sorted_values = values[order]
        if sorted_values[0] == sorted_values[-1]:
            continue
        found, score, threshold = best_split_sorted(
            np.ascontiguousarray(sorted_values),
            np.ascontiguousarray(y_node[order]),
            n_classes,
        )
        if found and (best is None or score > best_score):
            best_score = score
            best = (int(feature), float(threshold))
        budget -= 1
        if budget == 0:
            break
    return best


def train(
    features: np.ndarray, labels: Sequence[str], config: ForestConfig
) -> ForestModel:
    """Grow the configured number of CART trees on bootstrap resamples.

    Candidate thresholds are midpoints between consecutive distinct sorted
    feature values; the split minimizing weighted Gini impurity wins. Given
    (features, labels, config) the result is bit-for-bit reproducible.
    """
    X = np.ascontiguousarray(features, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D feature matrix, got ndim={X.ndim}")
    n, dim = X.shape
    if len(labels) != n:
        raise LengthMismatch(f"{n} feature rows but {len(labels)} labels")
    if n < 2:
        raise DegenerateData(f"need at least 2 training rows, got {n}")
    if not np.all(np.isfinite(X)):
        raise NonFiniteValue("feature matrix contains non-finite values")

    classes = sorted(set(labels))
    if len(classes) < 2:
        raise DegenerateData("need at least 2 distinct labels")
    class_index = {c: i for i, c in enumerate(classes)}
    y = np.array([class_index[l] for l in labels], dtype=np.int64)

    max_features = max(1, math.isqrt(dim))
    trees = []
    for t in range(config.n_trees):
        rng = np.random.default_rng([config.seed, t])
        trees.append(_grow_tree(X, y, len(classes), config, rng, max_features))
    return ForestModel(config=config, classes=classes, dim=dim, trees=trees)


def _check_vector(model_dim: int, feature) -> np.ndarray:
    x = np.asarray(feature, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model_dim:
        raise DimensionMismatch(
            f"expected a vector of length {model_dim}, got shape {x.shape}"
        )
    return x


def predict_proba(model: ForestModel, feature) -> np.ndarray:
    """Probability vector over model.classes: mean of per-leaf frequencies."""
    x = _check_vector(model.dim, feature)
    acc = np.zeros(len(model.classes), dtype=np.float64)
    for tree in model.trees:
        counts = np.asarray(tree.leaf_counts(x), dtype=np.float64)
        acc += counts / counts.sum()
    return acc / len(model.trees)


def rank_labels(model: ForestModel, feature, term: str = "") -> RankedPrediction:
    """Classes sorted by descending probability, ties lexicographic."""
    probs = predict_proba(model, feature)
    order = sorted(range(len(model.classes)), key=lambda i: (-probs[i], model.classes[i]))
    return RankedPrediction(
        term=term,
        ranked_labels=[model.classes[i] for i in order],
        scores=[float(probs[i]) for i in order],
    )


def model_to_dict(model: ForestModel) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": MODEL_KIND,
        "config": {
            "n_trees": model.config.n_trees,
            "max_depth": model.config.max_depth,
            "min_samples_split": model.config.min_samples_split,
            "bootstrap": model.config.bootstrap,
            "seed": model.config.seed,
        },
        "classes": list(model.classes),
        "dim": model.dim,
        "trees": [
            {
                "feature": tree.feature,
                "threshold": tree.threshold,
                "left": tree.left,
                "right": tree.right,
                "counts": tree.counts,
            }
            for tree in model.trees
        ],
    }


def model_from_dict(doc: dict) -> ForestModel:
    if not isinstance(doc, dict):
        raise CorruptModel("model document is not an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"schema version {version!r}, this reader supports {SCHEMA_VERSION}"
        )
    if doc.get("kind") != MODEL_KIND:
        raise CorruptModel(f"unexpected model kind {doc.get('kind')!r}")
    try:
        config = ForestConfig(
            n_trees=doc["config"]["n_trees"],
            max_depth=doc["config"]["max_depth"],
            min_samples_split=doc["config"]["min_samples_split"],
            bootstrap=doc["config"]["bootstrap"],
            seed=doc["config"]["seed"],
        )
        classes = list(doc["classes"])
        dim = int(doc["dim"])
        trees = []
        for t in doc["trees"]:
            tree = Tree(
                feature=[int(v) for v in t["feature"]],
                threshold=[float(v) for v in t["threshold"]],
                left=[int(v) for v in t["left"]],
                right=[int(v) for v in t["right"]],
                counts=[
                    None if c is None else [int(v) for v in c] for c in t["counts"]
                ],
            )
            if not tree.feature:
                raise CorruptModel("empty tree")
            for counts in tree.counts:
                if counts is not None and len(counts) != len(classes):
                    raise CorruptModel(
                        f"leaf count vector of length {len(counts)}, "
                        f"expected {len(classes)}"
                    )
            trees.append(tree)
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"model document is malformed: {exc}") from exc
    if len(trees) != config.n_trees:
        raise CorruptModel(f"expected {config.n_trees} trees, found {len(trees)}")
    return ForestModel(config=config, classes=classes, dim=dim, trees=trees)


def load_feature_csv(path: str | Path) -> tuple[np.ndarray, list[str]]:
    """Feature matrix and labels from a CSV for offline testing.

    Expected header: `label,f0,f1,...`; column 0 holds the class label and
    the remaining columns are float features.
    """
    import csv

    from ..errors import MalformedRow

    labels: list[str] = []
    rows: list[list[float]] = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedRow(1, "missing header") from None
        if not header or header[0] != "label" or len(header) < 2:
            raise MalformedRow(1, f"expected header label,f0,..., got {header}")
        width = len(header)
        for row in reader:
            if not row:
                continue
            if len(row) != width:
                raise MalformedRow(
                    reader.line_num, f"expected {width} fields, got {len(row)}"
                )
            labels.append(row[0])
            try:
                rows.append([float(v) for v in row[1:]])
            except ValueError as exc:
                raise MalformedRow(reader.line_num, f"unparseable value: {exc}") from exc
    matrix = (
        np.array(rows, dtype=np.float64)
        if rows
        else np.zeros((0, width - 1), dtype=np.float64)
    )
    return matrix, labels


def write_json_atomic(path: str | Path, doc: dict) -> None:
    """Serialize deterministically and atomically (temp file + rename)."""
    path = Path(path)
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json_model(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptModel(f"cannot parse {path}: {exc}") from exc


def save_model(model: ForestModel, path: str | Path) -> None:
    write_json_atomic(path, model_to_dict(model))


def load_model(path: str | Path) -> ForestModel:
    return model_from_dict(read_json_model(path))
