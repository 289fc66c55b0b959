"""String normalization, tokenization, inflection, and the synonym lexicon.

All name matching elsewhere in the package goes through :func:`normalize`,
so graph node names, labels, lexicon entries, and query terms share one
canonical form.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from pathlib import Path

from .errors import MalformedLine

_PUNCT = set(string.punctuation) - {"-"}
_VOWELS = "aeiou"
_SIBILANT_ENDINGS = ("s", "x", "z", "ch", "sh")


def normalize(raw: str) -> str:
    """Canonical form of a name: lowercase, single-spaced, punctuation-free.

    ASCII punctuation is dropped except hyphens flanked by alphanumerics
    ("euro-bond" keeps its hyphen, a trailing comma disappears). Total and
    idempotent.
    """
    lowered = raw.lower()
    kept = []
    for i, ch in enumerate(lowered):
        if ch == "-":
            internal = (
                0 < i < len(lowered) - 1
                and lowered[i - 1].isalnum()
                and lowered[i + 1].isalnum()
            )
            if internal:
                kept.append(ch)
        elif ch not in _PUNCT:
            kept.append(ch)
    return " ".join("".join(kept).split())


def tokenize(term: str) -> list[str]:
    """Split an already-normalized term on single spaces; '' yields []."""
    if not term:
        return []
    return term.split(" ")


def pluralize(word: str) -> str:
    """Rule-table plural: consonant+y -> ies; sibilant endings -> es; else -> s."""
    if not word:
        return word
    if word.endswith("y") and len(word) >= 2 and word[-2] not in _VOWELS:
        return word[:-1] + "ies"
    if word.endswith(_SIBILANT_ENDINGS):
        return word + "es"
    return word + "s"


def singularize(word: str) -> str:
    """Rule-table singular, the inverse of :func:`pluralize` on regular nouns.

    "ies" -> "y"; "es" is stripped after a sibilant stem; a trailing "s"
    (but not "ss") is stripped; anything else is returned unchanged.
    """
    if word.endswith("ies"):
        return word[:-3] + "y"
    if word.endswith("es") and word[:-2].endswith(_SIBILANT_ENDINGS):
        return word[:-2]
    if word.endswith("s") and not word.endswith("ss") and len(word) >= 2:
        return word[:-1]
    return word


@dataclass(frozen=True)
class WordForms:
    """Surface form of a word together with its singular and plural.

    The surface always equals the singular or the plural: a word whose
    singular differs from it is treated as already plural.
    """

    surface: str
    singular: str
    plural: str


def word_forms(word: str) -> WordForms:
    """Inflection forms for a single normalized word."""
    singular = singularize(word)
    plural = word if singular != word else pluralize(word)
    return WordForms(surface=word, singular=singular, plural=plural)


class SynonymLexicon:
    """Word -> ordered synonym list, all normalized, no self-entries."""

    def __init__(self, entries: dict[str, list[str]] | None = None):
        self.entries: dict[str, list[str]] = entries if entries is not None else {}

    def __len__(self) -> int:
        return len(self.entries)


def load_synonyms(path: str | Path) -> SynonymLexicon:
    """Parse a synonym lexicon from a UTF-8 TSV of `word<TAB>syn1,syn2,...`.

    Words and synonyms are normalized; self-synonyms and duplicates are
    dropped; repeated lines for a word append. Multi-word entries are
    rejected: the lexicon holds single words only.
    """
    lex = SynonymLexicon()
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise MalformedLine(
                    line_number,
                    f"expected exactly one tab separator, got {len(fields) - 1}",
                )
            word = normalize(fields[0])
            if not word:
                raise MalformedLine(line_number, "empty word field")
            if " " in word:
                raise MalformedLine(line_number, f"multi-word entry {word!r}")
            existing = lex.entries.setdefault(word, [])
            for chunk in fields[1].split(","):
                syn = normalize(chunk)
                if not syn or syn == word or syn in existing:
                    continue
                if " " in syn:
                    raise MalformedLine(line_number, f"multi-word synonym {syn!r}")
                existing.append(syn)
    return lex


def synonyms_of(lex: SynonymLexicon, word: str) -> list[str]:
    """File-order synonyms of a word, or []. Lookup is normalization-insensitive."""
    return list(lex.entries.get(normalize(word), []))
