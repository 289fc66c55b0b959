from pathlib import Path

import pytest

from ontoclass.graph import LabelSet, graph_from_edges

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

TASK_LABELS = [
    "Forward", "Funds", "Future", "MMIs", "Option", "Stocks", "Swap",
    "Equity Index", "Credit Index", "Bonds",
]

EQUITY_INDEX_PATCH = ("Index", "Equity Index")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def task_labels() -> LabelSet:
    return LabelSet(TASK_LABELS, "Credit Index")


@pytest.fixture(scope="session")
def mini_graph():
    from ontoclass.graph import load_edges

    return load_edges(FIXTURES / "mini_ontology.tsv", [EQUITY_INDEX_PATCH])


@pytest.fixture(scope="session")
def mini_lexicon():
    from ontoclass.text import load_synonyms

    return load_synonyms(FIXTURES / "synonyms.tsv")


def chain_graph(*names: str):
    """a -> b -> c ... helper for linear-hierarchy tests."""
    return graph_from_edges(list(zip(names[:-1], names[1:])))
