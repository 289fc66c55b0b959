"""Move-to-front merging of ontology labels into ranked label lists.

The ontology classifier produces one label; the forest produces a full
ranking. The merged output promotes the ontology label to rank 1 and keeps
the relative order of everything else, recording where that label sat
beforehand so the promotion's effect can be measured.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import UnknownLabel
from .forest import RankedPrediction

MERGE_ALWAYS = "always"
MERGE_SKIP_DEFAULTED = "skip-defaulted"


@dataclass
class MergedPrediction:
    """Final ranked list with the ontology label first.

    pre_merge_rank is the 1-based rank the ontology label held in the
    forest's list before promotion. Outputs of :func:`merge` always have
    ranked_labels[0] == ontology_label; the skip-defaulted ablation mode
    can leave a defaulted label in place.
    """

    term: str
    ranked_labels: list[str]
    ontology_label: str
    ontology_defaulted: bool
    pre_merge_rank: int

    def to_dict(self) -> dict:
        return {
            "term": self.term,
            "ranked_labels": list(self.ranked_labels),
            "ontology_label": self.ontology_label,
            "ontology_defaulted": self.ontology_defaulted,
            "pre_merge_rank": self.pre_merge_rank,
        }


def pre_merge_rank(rf: RankedPrediction, ontology_label: str) -> int:
    """1-based rank of the ontology label in the forest's list."""
    try:
        return rf.ranked_labels.index(ontology_label) + 1
    except ValueError:
        raise UnknownLabel(
            f"label {ontology_label!r} is not in the ranked label set"
        ) from None


def merge(
    rf: RankedPrediction, ontology_label: str, ontology_defaulted: bool = False
) -> MergedPrediction:
    """Move the ontology label to the front, preserving the rest of the order."""
    rank = pre_merge_rank(rf, ontology_label)
    ranked = [ontology_label] + [l for l in rf.ranked_labels if l != ontology_label]
    return MergedPrediction(
        term=rf.term,
        ranked_labels=ranked,
        ontology_label=ontology_label,
        ontology_defaulted=ontology_defaulted,
        pre_merge_rank=rank,
    )


def apply_merge_mode(
    rf: RankedPrediction,
    ontology_label: str,
    ontology_defaulted: bool,
    mode: str = MERGE_ALWAYS,
) -> MergedPrediction:
    """Merge according to mode: always promote, or leave defaulted labels put."""
    if mode not in (MERGE_ALWAYS, MERGE_SKIP_DEFAULTED):
        raise ValueError(f"unknown merge mode {mode!r}")
    if mode == MERGE_SKIP_DEFAULTED and ontology_defaulted:
        return MergedPrediction(
            term=rf.term,
            ranked_labels=list(rf.ranked_labels),
            ontology_label=ontology_label,
            ontology_defaulted=True,
            pre_merge_rank=pre_merge_rank(rf, ontology_label),
        )
    return merge(rf, ontology_label, ontology_defaulted)


def rank_histogram(
    pairs: Iterable[tuple[RankedPrediction, str]]
) -> dict[int, int]:
    """Histogram of where ontology labels rank in forest lists (1-based)."""
    counter: Counter[int] = Counter()
    for rf, label in pairs:
        counter[pre_merge_rank(rf, label)] += 1
    return dict(counter)


def histogram_to_csv(histogram: dict[int, int]) -> str:
    """CSV text `rank,count` with rows in ascending rank order."""
    lines = ["rank,count"]
    for rank in sorted(histogram):
        lines.append(f"{rank},{histogram[rank]}")
    return "\n".join(lines) + "\n"
