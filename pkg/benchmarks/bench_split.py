"""Benchmark the compiled split kernel against the numpy fallback.

Times the raw kernel on single-feature scans and full forest training with
each backend forced in turn. Results are means over repeats; both backends
produce bit-identical models, so only speed differs.

Usage:
    python3 benchmarks/bench_split.py [--rows 20000] [--trees 20] [--dim 16]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ontoclass.forest import _split_py
from ontoclass.forest import core as forest_core
from ontoclass.forest import ForestConfig, train

try:
    from ontoclass.forest import _split_cy
except ImportError:
    _split_cy = None


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernel(rows: int, repeats: int) -> list[tuple[str, float]]:
    rng = np.random.default_rng(0)
    values = np.sort(rng.normal(size=rows))
    classes = rng.integers(0, 5, size=rows).astype(np.int64)

    results = [
        (
            "kernel/python",
            time_call(lambda: _split_py.best_split_sorted(values, classes, 5), repeats),
        )
    ]
    if _split_cy is not None:
        results.append(
            (
                "kernel/cython",
                time_call(
                    lambda: _split_cy.best_split_sorted(values, classes, 5), repeats
                ),
            )
        )
    return results


def bench_training(rows: int, dim: int, trees: int, repeats: int):
    rng = np.random.default_rng(1)
    X = rng.normal(size=(rows, dim))
    y = [str(v) for v in rng.integers(0, 5, size=rows)]
    config = ForestConfig(n_trees=trees, seed=3)

    backends = [("train/python", _split_py.best_split_sorted)]
    if _split_cy is not None:
        backends.append(("train/cython", _split_cy.best_split_sorted))

    original = forest_core.best_split_sorted
    results = []
    try:
        for name, kernel in backends:
            forest_core.best_split_sorted = kernel
            results.append((name, time_call(lambda: train(X, y, config), repeats)))
    finally:
        forest_core.best_split_sorted = original
    return results


def report(rows):
    width = max(len(name) for name, _ in rows) + 2
    base = None
    for name, seconds in rows:
        if base is None:
            base = seconds
            print(f"{name:<{width}}{seconds * 1e3:9.3f} ms")
        else:
            print(f"{name:<{width}}{seconds * 1e3:9.3f} ms   ({base / seconds:5.2f}x)")
    print()


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=20000)
    parser.add_argument("--dim", type=int, default=16)
    parser.add_argument("--trees", type=int, default=10)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _split_cy is None:
        print("compiled kernel not available; showing the fallback only\n")

    print(f"single-feature scan, {args.rows} sorted rows, 5 classes:")
    report(bench_kernel(args.rows, args.repeats))

    train_rows = min(args.rows, 2000)
    print(
        f"forest training, {train_rows} rows x dim {args.dim}, "
        f"{args.trees} trees, 5 classes:"
    )
    report(bench_training(train_rows, args.dim, args.trees, max(2, args.repeats // 2)))


if __name__ == "__main__":
    main()
