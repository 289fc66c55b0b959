"""Regenerate the derived fixtures: toy embedding vectors and the training CSV.

Deterministic: rerunning reproduces the checked-in files byte for byte.
Vectors are clustered per label so the forest and the baselines have real
signal to learn; modifier words sit near the origin so mean pooling keeps
a term close to its anchor word's cluster.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

DIM = 8

# anchor word -> label; the anchor is the last word of every generated term
ANCHORS = {
    "forward": "Forward",
    "fund": "Funds",
    "funds": "Funds",
    "future": "Future",
    "futures": "Future",
    "bill": "MMIs",
    "paper": "MMIs",
    "deposit": "MMIs",
    "option": "Option",
    "options": "Option",
    "stock": "Stocks",
    "stocks": "Stocks",
    "share": "Stocks",
    "shares": "Stocks",
    "swap": "Swap",
    "swaps": "Swap",
    "index": "Equity Index",
    "credit": "Credit Index",
    "bond": "Bonds",
    "bonds": "Bonds",
    "note": "Bonds",
}

MODIFIERS = [
    "interest", "rate", "currency", "commodity", "government", "corporate",
    "municipal", "agency", "global", "european", "emerging", "market",
    "money", "treasury", "capped", "floored", "linked", "total", "return",
    "preferred", "common", "sovereign", "exchange", "traded",
]

LABELS = [
    "Forward", "Funds", "Future", "MMIs", "Option", "Stocks", "Swap",
    "Equity Index", "Credit Index", "Bonds",
]

# label -> number of training rows
COUNTS = {
    "Forward": 9,
    "Funds": 22,
    "Future": 19,
    "MMIs": 17,
    "Option": 24,
    "Stocks": 17,
    "Swap": 36,
    "Equity Index": 286,
    "Credit Index": 129,
    "Bonds": 55,
}


def make_vectors(rng: np.random.Generator) -> dict[str, np.ndarray]:
    centers = {label: rng.normal(0.0, 1.5, DIM) for label in LABELS}
    vectors: dict[str, np.ndarray] = {}
    for word, label in ANCHORS.items():
        vectors[word] = centers[label] + rng.normal(0.0, 0.15, DIM)
    for word in MODIFIERS:
        vectors[word] = rng.normal(0.0, 0.2, DIM)
    return vectors


def write_vectors(vectors: dict[str, np.ndarray]) -> None:
    path = FIXTURES / "toy_vectors.txt"
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(vectors)} {DIM}\n")
        for word, values in vectors.items():
            row = " ".join(f"{v:.6f}" for v in values)
            handle.write(f"{word} {row}\n")
    print(f"wrote {path} ({len(vectors)} words, dim {DIM})")


def make_terms(rng: np.random.Generator) -> list[tuple[str, str]]:
    anchors_by_label: dict[str, list[str]] = {}
    for word, label in ANCHORS.items():
        anchors_by_label.setdefault(label, []).append(word)

    rows: list[tuple[str, str]] = []
    for label in LABELS:
        anchors = anchors_by_label[label]
        combos = []
        for anchor in anchors:
            combos.append((anchor,))
            for m1 in MODIFIERS:
                combos.append((m1, anchor))
                for m2 in MODIFIERS:
                    if m2 != m1:
                        combos.append((m1, m2, anchor))
        picks = rng.permutation(len(combos))[: COUNTS[label]]
        for i in sorted(picks):
            term = " ".join(w.capitalize() for w in combos[i])
            rows.append((term, label))
    order = rng.permutation(len(rows))
    return [rows[i] for i in order]


def write_dataset(rows: list[tuple[str, str]]) -> None:
    path = FIXTURES / "train_614.csv"
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["term", "label"])
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main() -> None:
    rng = np.random.default_rng(20210314)
    write_vectors(make_vectors(rng))
    write_dataset(make_terms(rng))


if __name__ == "__main__":
    main()
