import random

import pytest

from src.graph.cycles import SimpleCycle
from src.graph.digraph import DirectedGraph
from src.rdf.terms import RDFS_SUBCLASSOF, ntriples_line

# tests/conftest.py

# The 8-node example hierarchy, nodes labelled 1..8 (node 0 stays isolated).
EXAMPLE_EDGES = [
    (1, 2), (2, 3), (3, 5), (5, 7), (7, 8), (8, 1), (3, 8), (3, 7),
    (7, 6), (6, 3), (5, 3), (8, 7), (6, 5), (4, 5), (5, 4),
]

EXAMPLE_CYCLES = [
    (1, 2, 3, 5, 7, 8),
    (1, 2, 3, 8),
    (1, 2, 3, 7, 8),
    (3, 5, 7, 6),
    (3, 5),
    (3, 8, 7, 6),
    (3, 8, 7, 6, 5),
    (3, 7, 6),
    (3, 7, 6, 5),
    (4, 5),
    (8, 7),
    (5, 7, 6),
]

EXAMPLE_OPTIMUM = 5

EX = "http://example.org/"


def example_graph():
    return DirectedGraph.from_edges(9, EXAMPLE_EDGES)


def example_cycles():
    return {SimpleCycle.from_nodes(c) for c in EXAMPLE_CYCLES}


def iri(label):
    return f"{EX}C{label}"


def ntriples_of(edges, predicate=RDFS_SUBCLASSOF):
    """N-Triples text for labelled edges, one subclass statement per edge"""
    return "".join(ntriples_line(iri(u), predicate, iri(v)) for u, v in edges)


def random_graph(seed, max_nodes=10, low=0.1, high=0.3):
    """Small random digraph without self-loops"""
    rng = random.Random(seed)
    n = rng.randint(2, max_nodes)
    p = rng.uniform(low, high)
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return DirectedGraph.from_edges(n, edges)


@pytest.fixture
def example():
    return example_graph()


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.nt"
    path.write_text(ntriples_of(EXAMPLE_EDGES))
    return path
