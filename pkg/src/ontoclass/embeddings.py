"""Word-embedding table in word2vec text format, with mean pooling.

Only the text format is supported. A binary word2vec file can be converted
with gensim:

    from gensim.models import KeyedVectors
    KeyedVectors.load_word2vec_format("vecs.bin", binary=True).save_word2vec_format("vecs.txt")
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, MalformedHeader, MalformedLine, NonFiniteValue
from .text import normalize, tokenize


class EmbeddingTable:
    """Normalized word -> float64 vector, all of one fixed dimensionality."""

    def __init__(self, dim: int, vectors: dict[str, np.ndarray]):
        self.dim = dim
        self.vectors = vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, word: str) -> bool:
        return word in self.vectors


@dataclass(frozen=True)
class ConceptVector:
    """Pooled vector for a term plus the fraction of tokens found in-vocabulary."""

    values: np.ndarray
    coverage: float


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Load a word2vec text file: header `<count> <dim>`, then `word v1 .. v_dim`.

    Words pass through normalize. A count that disagrees with the actual
    number of rows is tolerated with a warning, as is a duplicate word
    (last row wins). A row with the wrong number of values or a non-finite
    value is fatal.
    """
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as handle:
        header = handle.readline()
        parts = header.split()
        if len(parts) != 2:
            raise MalformedHeader(f"expected '<count> <dim>', got {header.strip()!r}")
        try:
            count, dim = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise MalformedHeader(str(exc)) from exc
        if count < 0 or dim < 1:
            raise MalformedHeader(f"invalid header values {count} {dim}")

        rows = 0
        for line_number, line in enumerate(handle, start=2):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != dim + 1:
                raise DimensionMismatch(
                    f"line {line_number}: expected {dim} values, got {len(fields) - 1}"
                )
            word = normalize(fields[0])
            try:
                values = np.array([float(v) for v in fields[1:]], dtype=np.float64)
            except ValueError as exc:
                raise MalformedLine(line_number, f"unparseable value: {exc}") from exc
            if not np.all(np.isfinite(values)):
                raise NonFiniteValue(f"line {line_number}: non-finite component")
            if word in vectors:
                warnings.warn(
                    f"duplicate embedding row for {word!r} at line {line_number}; "
                    "keeping the later one",
                    stacklevel=2,
                )
            vectors[word] = values
            rows += 1
    if rows != count:
        warnings.warn(
            f"embedding header announced {count} rows but file held {rows}",
            stacklevel=2,
        )
    return EmbeddingTable(dim=dim, vectors=vectors)


def vectorize(term: str, table: EmbeddingTable) -> ConceptVector:
    """Mean of the vectors of in-vocabulary tokens of the normalized term.

    Out-of-vocabulary tokens are skipped; a term with no in-vocabulary
    token maps to the zero vector with coverage 0.
    """
    tokens = tokenize(normalize(term))
    found = [table.vectors[t] for t in tokens if t in table.vectors]
    if not found:
        return ConceptVector(np.zeros(table.dim, dtype=np.float64), 0.0)
    coverage = len(found) / len(tokens)
    if len(found) == 1:
        return ConceptVector(found[0].copy(), coverage)
    mean = np.vstack(found).mean(axis=0)
    return ConceptVector(mean, coverage)
