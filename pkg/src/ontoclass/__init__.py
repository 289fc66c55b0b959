"""Hypernym-label classification of domain terms.

Terms are mapped onto a directed ontology graph and generalized through
ancestors to the nearest valid label; a deterministic random forest over
pooled word embeddings supplies full ranked label lists, and the two are
merged by promoting the ontology label to rank 1.
"""

from .embeddings import ConceptVector, EmbeddingTable, load_embeddings, vectorize
from .graph import (
    GeneralizationResult,
    HypernymGraph,
    LabelSet,
    generalize,
    graph_from_edges,
    load_edges,
    parents_of,
)
from .mapping import Attempt, MappingTrace, map_and_classify
from .merge import MergedPrediction, merge, rank_histogram
from .text import (
    SynonymLexicon,
    WordForms,
    load_synonyms,
    normalize,
    pluralize,
    singularize,
    synonyms_of,
    tokenize,
    word_forms,
)

__version__ = "0.1.0"

__all__ = [
    "Attempt",
    "ConceptVector",
    "EmbeddingTable",
    "GeneralizationResult",
    "HypernymGraph",
    "LabelSet",
    "MappingTrace",
    "MergedPrediction",
    "SynonymLexicon",
    "WordForms",
    "__version__",
    "generalize",
    "graph_from_edges",
    "load_edges",
    "load_embeddings",
    "load_synonyms",
    "map_and_classify",
    "merge",
    "normalize",
    "parents_of",
    "pluralize",
    "rank_histogram",
    "singularize",
    "synonyms_of",
    "tokenize",
    "vectorize",
    "word_forms",
]
