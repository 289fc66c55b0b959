"""Directed hypernym multigraph: edge-file loading, patches, generalization.

Nodes are dense integer ids. Edges point child -> parent. The graph is
immutable once built, so concurrent read access is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import (
    DuplicateNormalizedName,
    InvalidLabelSet,
    MalformedLine,
    UnknownNode,
)
from .text import normalize

DEFAULT_MAX_DEPTH = 100

NodeId = int


class HypernymGraph:
    """Name-indexed directed graph with child->parent adjacency.

    `names` maps normalized name -> id, `display` keeps the raw spelling the
    node was first seen with, and parent sets are stored sorted by ascending
    id. Duplicate edges collapse; cycles are tolerated (callers that walk
    ancestors must guard with a visited set, as :func:`generalize` does).
    """

    def __init__(
        self,
        names: dict[str, NodeId],
        display: list[str],
        parents: list[tuple[NodeId, ...]],
    ):
        self.names = names
        self.display = display
        self._parents = parents

    @property
    def node_count(self) -> int:
        return len(self.display)

    @property
    def edge_count(self) -> int:
        return sum(len(p) for p in self._parents)

    def lookup(self, normalized_name: str) -> Optional[NodeId]:
        """Node id for a normalized name, or None."""
        return self.names.get(normalized_name)

    def name_of(self, node: NodeId) -> str:
        self._check(node)
        return self.display[node]

    def normalized_name_of(self, node: NodeId) -> str:
        self._check(node)
        return normalize(self.display[node])

    def parents_of(self, node: NodeId) -> tuple[NodeId, ...]:
        """Parent ids in ascending order; empty for roots."""
        self._check(node)
        return self._parents[node]

    def _check(self, node: NodeId) -> None:
        if not isinstance(node, int) or node < 0 or node >= len(self.display):
            raise UnknownNode(node)


class _GraphBuilder:
    """Accumulates nodes and edges, then freezes into a HypernymGraph."""

    def __init__(self) -> None:
        self.names: dict[str, NodeId] = {}
        self.display: list[str] = []
        self.parent_sets: list[set[NodeId]] = []

    def add_node(self, raw: str, line_number: Optional[int] = None) -> NodeId:
        key = normalize(raw)
        if not key:
            raise MalformedLine(line_number or 0, f"name {raw!r} normalizes to nothing")
        existing = self.names.get(key)
        if existing is not None:
            if self.display[existing] != raw:
                raise DuplicateNormalizedName(self.display[existing], raw)
            return existing
        node = len(self.display)
        self.names[key] = node
        self.display.append(raw)
        self.parent_sets.append(set())
        return node

    def add_edge(self, child_raw: str, parent_raw: str, line_number: Optional[int] = None) -> None:
        child = self.add_node(child_raw, line_number)
        parent = self.add_node(parent_raw, line_number)
        self.parent_sets[child].add(parent)

    def build(self) -> HypernymGraph:
        parents = [tuple(sorted(s)) for s in self.parent_sets]
        return HypernymGraph(self.names, self.display, parents)


def graph_from_edges(
    edges: Iterable[tuple[str, str]],
    patches: Sequence[tuple[str, str]] = (),
) -> HypernymGraph:
    """Build a graph from in-memory (child, parent) raw-name pairs."""
    builder = _GraphBuilder()
    for child, parent in edges:
        builder.add_edge(child, parent)
    for child, parent in patches:
        builder.add_edge(child, parent)
    return builder.build()


def load_edges(
    edge_file: str | Path,
    patches: Sequence[tuple[str, str]] = (),
) -> HypernymGraph:
    """Load a graph from a UTF-8 TSV of `child<TAB>parent` lines.

    Blank lines and lines starting with `#` are ignored. Each patch
    (child, parent) adds any missing nodes and the edge child -> parent;
    applying a patch twice is the same as applying it once.
    """
    builder = _GraphBuilder()
    with open(edge_file, encoding="utf-8") as handle:
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
            builder.add_edge(fields[0], fields[1], line_number)
    for child, parent in patches:
        builder.add_edge(child, parent)
    return builder.build()


class LabelSet:
    """Ordered valid target labels plus the designated default label."""

    def __init__(self, labels: Sequence[str], default_label: str):
        self.labels = list(labels)
        self.default_label = default_label
        self.normalized_index: dict[str, str] = {}
        for label in self.labels:
            key = normalize(label)
            if key in self.normalized_index:
                raise InvalidLabelSet(
                    f"labels {self.normalized_index[key]!r} and {label!r} "
                    "normalize identically"
                )
            self.normalized_index[key] = label
        if default_label not in self.labels:
            raise InvalidLabelSet(
                f"default label {default_label!r} is not in the label list"
            )

    def lookup(self, normalized_name: str) -> Optional[str]:
        """Canonical label whose normalized form matches, or None."""
        return self.normalized_index.get(normalized_name)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)


@dataclass(frozen=True)
class GeneralizationResult:
    """Outcome of ancestor-frontier search: a label at a depth, or nothing.

    Depth 0 means the start node's own name is a valid label.
    """

    label: Optional[str]
    depth: Optional[int]
    via_node: Optional[NodeId]

    @property
    def found(self) -> bool:
        return self.label is not None

    @classmethod
    def exhausted(cls) -> "GeneralizationResult":
        return cls(label=None, depth=None, via_node=None)

    def to_dict(self, graph: Optional[HypernymGraph] = None) -> dict:
        doc: dict = {"found": self.found}
        if self.found:
            doc["label"] = self.label
            doc["depth"] = self.depth
            doc["via_node"] = self.via_node
            if graph is not None and self.via_node is not None:
                doc["via_name"] = graph.name_of(self.via_node)
        return doc


def parents_of(graph: HypernymGraph, node: NodeId) -> tuple[NodeId, ...]:
    """Adjacency set of a node, ascending by id."""
    return graph.parents_of(node)


def generalize(
    graph: HypernymGraph,
    start: NodeId,
    labels: LabelSet,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> GeneralizationResult:
    """Breadth-first ancestor search for the nearest valid label.

    The start node itself counts as depth 0. Each iteration replaces the
    frontier with its unvisited parents and checks the new frontier against
    the label set; the first depth with any match wins. When several labels
    match at the same depth the lexicographically smallest normalized label
    is returned, which makes results deterministic. A visited set guarantees
    termination on cyclic inputs; an empty frontier or exceeding `max_depth`
    yields the exhausted result.
    """
    graph._check(start)
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")

    label = labels.lookup(graph.normalized_name_of(start))
    if label is not None:
        return GeneralizationResult(label=label, depth=0, via_node=start)

    visited = {start}
    frontier = [start]
    for depth in range(1, max_depth + 1):
        next_frontier: set[NodeId] = set()
        for node in frontier:
            for parent in graph.parents_of(node):
                if parent not in visited:
                    next_frontier.add(parent)
        if not next_frontier:
            return GeneralizationResult.exhausted()
        matches = []
        for node in next_frontier:
            key = graph.normalized_name_of(node)
            found = labels.lookup(key)
            if found is not None:
                matches.append((key, found, node))
        if matches:
            key, found, node = min(matches)
            return GeneralizationResult(label=found, depth=depth, via_node=node)
        visited |= next_frontier
        frontier = sorted(next_frontier)
    return GeneralizationResult.exhausted()


def find_cycle(graph: HypernymGraph) -> Optional[list[str]]:
    """One cycle's node names if the parent relation is cyclic, else None."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * graph.node_count
    for root in range(graph.node_count):
        if color[root] != WHITE:
            continue
        path = [root]
        stack = [(root, iter(graph.parents_of(root)))]
        color[root] = GRAY
        while stack:
            node, parents = stack[-1]
            advanced = False
            for parent in parents:
                if color[parent] == GRAY:
                    cycle = path[path.index(parent):] + [parent]
                    return [graph.name_of(n) for n in cycle]
                if color[parent] == WHITE:
                    color[parent] = GRAY
                    path.append(parent)
                    stack.append((parent, iter(graph.parents_of(parent))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return None
