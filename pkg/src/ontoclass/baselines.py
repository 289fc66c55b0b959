"""Two reference rankers for comparison: nearest-centroid and softmax regression.

Both are approximate reconstructions built for side-by-side evaluation, not
faithful reproductions of any external system, and reports mark them as
such. They reuse the forest's RankedPrediction shape, so their scores are
mapped onto a probability simplex (softmax over similarities for the
centroid ranker), which keeps orderings intact.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    CorruptModel,
    DegenerateData,
    DimensionMismatch,
    LengthMismatch,
    NonFiniteValue,
    SchemaVersionMismatch,
)
from .forest import RankedPrediction
from .forest.core import SCHEMA_VERSION, read_json_model, write_json_atomic

METRIC_COSINE = "cosine"
METRIC_EUCLIDEAN = "euclidean"

CENTROID_KIND = "centroid-baseline"
LOGISTIC_KIND = "logistic-baseline"


@dataclass
class CentroidModel:
    dim: int
    classes: list[str]
    centroids: np.ndarray  # one row per class


@dataclass
class LogisticModel:
    dim: int
    classes: list[str]
    weights: np.ndarray  # |classes| x (dim+1), bias last


def _validate_features(features, labels) -> tuple[np.ndarray, list[str]]:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D feature matrix, got ndim={X.ndim}")
    if X.shape[0] == 0:
        raise DegenerateData("no training rows")
    if len(labels) != X.shape[0]:
        raise LengthMismatch(f"{X.shape[0]} rows but {len(labels)} labels")
    if not np.all(np.isfinite(X)):
        raise NonFiniteValue("feature matrix contains non-finite values")
    return X, list(labels)


def centroid_train(features, labels: Sequence[str]) -> CentroidModel:
    """Per-label arithmetic mean vectors."""
    X, labels = _validate_features(features, labels)
    classes = sorted(set(labels))
    centroids = np.vstack(
        [X[[i for i, l in enumerate(labels) if l == c]].mean(axis=0) for c in classes]
    )
    return CentroidModel(dim=X.shape[1], classes=classes, centroids=centroids)


def _softmax(values: np.ndarray) -> np.ndarray:
    shifted = values - values.max()
    exp = np.exp(shifted)
    return exp / exp.sum()


def _ranked(term: str, classes: list[str], keys: np.ndarray, scores: np.ndarray) -> RankedPrediction:
    order = sorted(range(len(classes)), key=lambda i: (-keys[i], classes[i]))
    return RankedPrediction(
        term=term,
        ranked_labels=[classes[i] for i in order],
        scores=[float(scores[i]) for i in order],
    )


def centroid_rank(
    model: CentroidModel, feature, metric: str = METRIC_COSINE, term: str = ""
) -> RankedPrediction:
    """Labels by descending cosine similarity (or ascending euclidean distance).

    A zero query or zero centroid has cosine similarity 0 by definition.
    Scores are a softmax over the similarity keys, so they form a simplex
    without disturbing the order; ties break lexicographically.
    """
    x = np.asarray(feature, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.dim:
        raise DimensionMismatch(
            f"expected a vector of length {model.dim}, got shape {x.shape}"
        )
    if metric == METRIC_COSINE:
        x_norm = np.linalg.norm(x)
        keys = np.zeros(len(model.classes))
        if x_norm > 0.0:
            for i, centroid in enumerate(model.centroids):
                c_norm = np.linalg.norm(centroid)
                if c_norm > 0.0:
                    keys[i] = float(centroid @ x) / (c_norm * x_norm)
    elif metric == METRIC_EUCLIDEAN:
        keys = -np.linalg.norm(model.centroids - x[np.newaxis, :], axis=1)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    return _ranked(term, model.classes, keys, _softmax(keys))


def softmax_loss_and_grad(
    weights: np.ndarray, X_bias: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray]:
    """Mean cross-entropy plus (l2/2)*||W||^2 over non-bias weights, with gradient.

    `X_bias` already carries the appended 1s column; `y` holds class indices.
    """
    n = X_bias.shape[0]
    logits = X_bias @ weights.T
    logits -= logits.max(axis=1, keepdims=True)
    exp = np.exp(logits)
    row_sums = exp.sum(axis=1, keepdims=True)
    probs = exp / row_sums
    # log-sum-exp form: safe even when a true-class probability underflows
    loss = float(np.mean(np.log(row_sums[:, 0]) - logits[np.arange(n), y]))
    loss += 0.5 * l2 * float(np.sum(weights[:, :-1] ** 2))

    onehot = np.zeros_like(probs)
    onehot[np.arange(n), y] = 1.0
    grad = (probs - onehot).T @ X_bias / n
    grad[:, :-1] += l2 * weights[:, :-1]
    return float(loss), grad


def logistic_train(
    features,
    labels: Sequence[str],
    epochs: int = 500,
    learning_rate: float = 0.5,
    l2: float = 1e-3,
    seed: int = 0,
) -> LogisticModel:
    """Multinomial softmax regression by full-batch gradient descent.

    Weights start at zero, which makes the run deterministic; the seed is
    accepted for interface symmetry but has no effect on the result.
    """
    del seed
    X, labels = _validate_features(features, labels)
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise DegenerateData("need at least 2 distinct labels")
    index = {c: i for i, c in enumerate(classes)}
    y = np.array([index[l] for l in labels], dtype=np.int64)
    X_bias = np.hstack([X, np.ones((X.shape[0], 1))])
    weights = np.zeros((len(classes), X.shape[1] + 1), dtype=np.float64)
    for _ in range(epochs):
        _, grad = softmax_loss_and_grad(weights, X_bias, y, l2)
        weights -= learning_rate * grad
    return LogisticModel(dim=X.shape[1], classes=classes, weights=weights)


def logistic_rank(model: LogisticModel, feature, term: str = "") -> RankedPrediction:
    """Labels by descending softmax probability, ties lexicographic."""
    x = np.asarray(feature, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.dim:
        raise DimensionMismatch(
            f"expected a vector of length {model.dim}, got shape {x.shape}"
        )
    logits = model.weights[:, :-1] @ x + model.weights[:, -1]
    probs = _softmax(logits)
    return _ranked(term, model.classes, probs, probs)


def save_centroid(model: CentroidModel, path: str | Path) -> None:
    write_json_atomic(
        path,
        {
            "schema_version": SCHEMA_VERSION,
            "kind": CENTROID_KIND,
            "dim": model.dim,
            "classes": list(model.classes),
            "centroids": model.centroids.tolist(),
        },
    )


def load_centroid(path: str | Path) -> CentroidModel:
    doc = read_json_model(path)
    _check_header(doc, CENTROID_KIND)
    try:
        return CentroidModel(
            dim=int(doc["dim"]),
            classes=list(doc["classes"]),
            centroids=np.array(doc["centroids"], dtype=np.float64),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"centroid model malformed: {exc}") from exc


def save_logistic(model: LogisticModel, path: str | Path) -> None:
    write_json_atomic(
        path,
        {
            "schema_version": SCHEMA_VERSION,
            "kind": LOGISTIC_KIND,
            "dim": model.dim,
            "classes": list(model.classes),
            "weights": model.weights.tolist(),
        },
    )


def load_logistic(path: str | Path) -> LogisticModel:
    doc = read_json_model(path)
    _check_header(doc, LOGISTIC_KIND)
    try:
        return LogisticModel(
            dim=int(doc["dim"]),
            classes=list(doc["classes"]),
            weights=np.array(doc["weights"], dtype=np.float64),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"logistic model malformed: {exc}") from exc


def _check_header(doc: dict, kind: str) -> None:
    if not isinstance(doc, dict):
        raise CorruptModel("model document is not an object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"schema version {doc.get('schema_version')!r}, "
            f"this reader supports {SCHEMA_VERSION}"
        )
    if doc.get("kind") != kind:
        raise CorruptModel(f"expected kind {kind!r}, got {doc.get('kind')!r}")
