"""Exception types shared across the package.

Everything raised on purpose derives from :class:`OntoclassError`, so the CLI
can distinguish input problems (exit code 1) from genuine bugs (exit code 2).
"""


class OntoclassError(Exception):
    """Base class for all errors this package raises deliberately."""


class MalformedLine(OntoclassError):
    """A text-format input line does not match the documented format."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DuplicateNormalizedName(OntoclassError):
    """Two distinct raw names collapse to the same normalized key."""

    def __init__(self, first: str, second: str):
        super().__init__(
            f"names {first!r} and {second!r} normalize to the same key"
        )
        self.first = first
        self.second = second


class UnknownNode(OntoclassError):
    """A node id that does not exist in the graph."""

    def __init__(self, node: int):
        super().__init__(f"unknown node id {node}")
        self.node = node


class InvalidLabelSet(OntoclassError):
    """Label list fails its structural requirements."""


class MalformedHeader(OntoclassError):
    """Embedding file header is not `<count> <dim>`."""


class DimensionMismatch(OntoclassError):
    """Vector length disagrees with the expected dimensionality."""


class NonFiniteValue(OntoclassError):
    """A numeric input contains NaN or infinity."""


class DegenerateData(OntoclassError):
    """Training data cannot support a model (too few rows or classes)."""


class SchemaVersionMismatch(OntoclassError):
    """Persisted model carries a schema version this code does not read."""


class CorruptModel(OntoclassError):
    """Persisted model file is truncated or structurally invalid."""


class UnknownLabel(OntoclassError):
    """A label outside the configured label set."""


class UnknownGoldLabel(OntoclassError):
    """Dataset row carries a gold label outside the label set."""

    def __init__(self, line_number: int, label: str):
        super().__init__(f"line {line_number}: unknown gold label {label!r}")
        self.line_number = line_number
        self.label = label


class MalformedRow(OntoclassError):
    """Dataset CSV row has the wrong shape."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class LengthMismatch(OntoclassError):
    """Parallel prediction/gold sequences differ in length."""


class GoldMissingFromRanking(OntoclassError):
    """A gold label is absent from its ranked label list."""
