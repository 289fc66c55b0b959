"""Pure-numpy best-split scan, the fallback for the compiled kernel.

Both kernels must return bit-identical results. The score is built from
exact integer class counts with one float division per side and one
addition, so the compiled and the vectorized path round identically.
"""

from __future__ import annotations

import numpy as np


def best_split_sorted(
    values: np.ndarray, classes: np.ndarray, n_classes: int
) -> tuple[bool, float, float]:
    """Best Gini split of one feature, given samples sorted by value.

    `values` must be ascending float64, `classes` the int64 class index of
    each sample in the same order. Candidate thresholds are midpoints
    between consecutive distinct values. Returns (found, score, threshold)
    where score = sum(left_counts^2)/n_left + sum(right_counts^2)/n_right;
    maximizing it minimizes the weighted Gini impurity. Ties go to the
    lowest threshold. found is False when all values are equal.
    """
    n = values.shape[0]
    if n < 2:
        return False, 0.0, 0.0
    boundaries = np.nonzero(values[:-1] != values[1:])[0]
    if boundaries.size == 0:
        return False, 0.0, 0.0

    onehot = np.zeros((n, n_classes), dtype=np.int64)
    onehot[np.arange(n), classes] = 1
    prefix = np.cumsum(onehot, axis=0)
    total = prefix[-1]

    left = prefix[boundaries]
    right = total[np.newaxis, :] - left
    n_left = (boundaries + 1).astype(np.float64)
    n_right = np.float64(n) - n_left
    score = np.sum(left * left, axis=1) / n_left + np.sum(right * right, axis=1) / n_right

    best = int(np.argmax(score))
    threshold = (values[boundaries[best]] + values[boundaries[best] + 1]) / 2.0
    return True, float(score[best]), float(threshold)
