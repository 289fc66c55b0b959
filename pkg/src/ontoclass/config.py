"""Run configuration: defaults, config-file parsing, and flag merging.

Precedence is fixed: built-in defaults < config file < command-line flags.
A config file is plain `key = value` lines with `#` comments; keys match
the flag names with underscores.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from .errors import OntoclassError

# Built-in target labels for the financial-term task this tool ships
# fixtures for; override with --labels/--default-label for other domains.
DEFAULT_LABELS = (
    "Forward",
    "Funds",
    "Future",
    "MMIs",
    "Option",
    "Stocks",
    "Swap",
    "Equity Index",
    "Credit Index",
    "Bonds",
)
DEFAULT_DEFAULT_LABEL = "Credit Index"


class BadConfig(OntoclassError):
    """Config file or flag combination is unusable."""


@dataclass
class RunConfig:
    ontology: Optional[str] = None
    patches: list[tuple[str, str]] = field(default_factory=list)
    synonyms: Optional[str] = None
    embeddings: Optional[str] = None
    dataset: Optional[str] = None
    model: Optional[str] = None
    labels: list[str] = field(default_factory=lambda: list(DEFAULT_LABELS))
    default_label: str = DEFAULT_DEFAULT_LABEL
    split: float = 0.9
    seed: int = 0
    merge: str = "always"
    synonym_stage: str = "second-pass"
    word_order: str = "reverse"
    stratify: bool = False
    metric: str = "cosine"
    trees: int = 100
    max_depth: Optional[int] = None
    min_samples_split: int = 2
    bootstrap: bool = True

    def validate(self) -> None:
        if self.default_label not in self.labels:
            raise BadConfig(
                f"default label {self.default_label!r} is not in the label list"
            )
        if not 0.0 < self.split < 1.0:
            raise BadConfig("split fraction must be strictly between 0 and 1")


def parse_patch(text: str) -> tuple[str, str]:
    """Parse one `child=>parent` patch."""
    if "=>" not in text:
        raise BadConfig(f"patch {text!r} is not of the form child=>parent")
    child, parent = text.split("=>", 1)
    child, parent = child.strip(), parent.strip()
    if not child or not parent:
        raise BadConfig(f"patch {text!r} has an empty side")
    return child, parent


def parse_patches(values: list[str]) -> list[tuple[str, str]]:
    """Patches from repeated flags; each value may hold several, `;`-separated."""
    out = []
    for value in values:
        for chunk in value.split(";"):
            chunk = chunk.strip()
            if chunk:
                out.append(parse_patch(chunk))
    return out


def load_config_file(path: str | Path) -> dict[str, str]:
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise BadConfig(f"{path}:{line_number}: expected key = value")
            key, value = stripped.split("=", 1)
            entries[key.strip()] = value.strip()
    return entries


_BOOL_KEYS = {"stratify", "bootstrap"}
_INT_KEYS = {"seed", "trees", "max_depth", "min_samples_split"}
_FLOAT_KEYS = {"split"}
_PATH_KEYS = {"ontology", "synonyms", "embeddings", "dataset", "model"}
_STR_KEYS = {"default_label", "merge", "synonym_stage", "word_order", "metric"}


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise BadConfig(f"config key {key}: cannot parse boolean from {value!r}")


def apply_config_entries(config: RunConfig, entries: dict[str, str]) -> None:
    known = {f.name for f in fields(RunConfig)}
    for key, value in entries.items():
        if key not in known:
            raise BadConfig(f"unknown config key {key!r}")
        if key in _BOOL_KEYS:
            setattr(config, key, _parse_bool(key, value))
        elif key in _INT_KEYS:
            try:
                setattr(config, key, int(value))
            except ValueError:
                raise BadConfig(f"config key {key}: not an integer: {value!r}") from None
        elif key in _FLOAT_KEYS:
            try:
                setattr(config, key, float(value))
            except ValueError:
                raise BadConfig(f"config key {key}: not a number: {value!r}") from None
        elif key == "labels":
            setattr(config, key, [l.strip() for l in value.split(",") if l.strip()])
        elif key == "patches":
            setattr(config, key, parse_patches([value]))
        elif key in _PATH_KEYS or key in _STR_KEYS:
            setattr(config, key, value)
