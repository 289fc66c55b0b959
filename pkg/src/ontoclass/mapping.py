"""Maps free-text terms onto the hypernym graph and classifies them.

The cascade tries, in order: the whole term, then individual words (last
word first, since the head noun of a phrase usually sits at the end), then
word synonyms. Every candidate is tried in surface, singular, and plural
form. The first candidate that generalizes to a valid label decides the
classification; if nothing does, the default label applies. Classification
is a pure function of (graph, labels, lexicon, term): there is no trained
state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import (
    DEFAULT_MAX_DEPTH,
    GeneralizationResult,
    HypernymGraph,
    LabelSet,
    NodeId,
    generalize,
)
from .text import SynonymLexicon, normalize, synonyms_of, tokenize, word_forms

SYNONYM_STAGE_SECOND_PASS = "second_pass"
SYNONYM_STAGE_PER_WORD = "per_word"
WORD_ORDER_REVERSE = "reverse"
WORD_ORDER_FORWARD = "forward"


@dataclass(frozen=True)
class Attempt:
    """One candidate lookup: what was tried, where it came from, what happened.

    `word_index` is the 0-based position in the forward token list of the
    word this candidate derives from (None for whole-term attempts).
    `matched_node` is set when the candidate names a graph node, and
    `generalization` records the search from that node.
    """

    candidate: str
    source: str  # direct | word | synonym
    word_index: Optional[int]
    form: str  # surface | singular | plural
    matched_node: Optional[NodeId]
    generalization: Optional[GeneralizationResult]

    @property
    def succeeded(self) -> bool:
        return self.generalization is not None and self.generalization.found


@dataclass
class MappingTrace:
    """Full provenance of how a term reached (or failed to reach) a label."""

    term: str
    attempts: list[Attempt] = field(default_factory=list)
    final_label: str = ""
    defaulted: bool = False

    def to_dict(self, graph: Optional[HypernymGraph] = None) -> dict:
        attempts = []
        for a in self.attempts:
            doc = {
                "candidate": a.candidate,
                "source": a.source,
                "word_index": a.word_index,
                "form": a.form,
                "matched_node": a.matched_node,
                "matched_name": (
                    graph.name_of(a.matched_node)
                    if graph is not None and a.matched_node is not None
                    else None
                ),
                "generalization": (
                    a.generalization.to_dict(graph) if a.generalization else None
                ),
            }
            attempts.append(doc)
        return {
            "term": self.term,
            "final_label": self.final_label,
            "defaulted": self.defaulted,
            "attempts": attempts,
        }


def _candidate_forms(candidate: str) -> list[tuple[str, str]]:
    """(string, form-name) pairs to try, in surface/singular/plural order.

    Duplicates collapse to the earliest form, so "bonds" tries the surface
    and its singular but not the identical plural again.
    """
    forms = word_forms(candidate)
    out = [(forms.surface, "surface")]
    if forms.singular != forms.surface:
        out.append((forms.singular, "singular"))
    if forms.plural not in (forms.surface, forms.singular):
        out.append((forms.plural, "plural"))
    return out


def map_and_classify(
    term: str,
    graph: HypernymGraph,
    labels: LabelSet,
    lex: SynonymLexicon,
    synonym_stage: str = SYNONYM_STAGE_SECOND_PASS,
    word_order: str = WORD_ORDER_REVERSE,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> MappingTrace:
    """Classify one term, returning the full trace.

    `synonym_stage` controls when synonyms are consulted: "second_pass"
    exhausts all words before any synonym, "per_word" tries each word's
    synonyms immediately after the word itself. `word_order` "reverse"
    visits the last word first; "forward" is the ablation order.

    A candidate that names a node but fails to generalize does not stop
    the cascade. Total: every term gets a label, falling back to the
    label set's default.
    """
    if synonym_stage not in (SYNONYM_STAGE_SECOND_PASS, SYNONYM_STAGE_PER_WORD):
        raise ValueError(f"unknown synonym stage {synonym_stage!r}")
    if word_order not in (WORD_ORDER_REVERSE, WORD_ORDER_FORWARD):
        raise ValueError(f"unknown word order {word_order!r}")

    trace = MappingTrace(term=term)

    def attempt(candidate: str, source: str, word_index: Optional[int], form: str):
        node = graph.lookup(candidate)
        gen = None
        if node is not None:
            gen = generalize(graph, node, labels, max_depth)
        record = Attempt(candidate, source, word_index, form, node, gen)
        trace.attempts.append(record)
        return record

    def run_forms(candidate: str, source: str, word_index: Optional[int]):
        for cand, form in _candidate_forms(candidate):
            record = attempt(cand, source, word_index, form)
            if record.succeeded:
                return record
        return None

    def finish(record: Attempt) -> MappingTrace:
        trace.final_label = record.generalization.label  # type: ignore[union-attr]
        trace.defaulted = False
        return trace

    normalized = normalize(term)
    hit = run_forms(normalized, "direct", None)
    if hit:
        return finish(hit)

    words = tokenize(normalized)
    indexed = list(enumerate(words))
    if word_order == WORD_ORDER_REVERSE:
        indexed.reverse()

    def run_synonyms(index: int, word: str):
        for syn in synonyms_of(lex, word):
            record = run_forms(syn, "synonym", index)
            if record:
                return record
        return None

    for index, word in indexed:
        hit = run_forms(word, "word", index)
        if hit:
            return finish(hit)
        if synonym_stage == SYNONYM_STAGE_PER_WORD:
            hit = run_synonyms(index, word)
            if hit:
                return finish(hit)

    if synonym_stage == SYNONYM_STAGE_SECOND_PASS:
        for index, word in indexed:
            hit = run_synonyms(index, word)
            if hit:
                return finish(hit)

    trace.final_label = labels.default_label
    trace.defaulted = True
    return trace
