import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional

import networkx as nx

logger = logging.getLogger(__name__)


class Edge(NamedTuple):
    source: int
    target: int


class RemovalReason(str, Enum):
    REFLEXIVE = "reflexive"
    EQUIVALENCE = "equivalence"
    SAMEAS = "sameas"
    MAXSAT = "maxsat"
    OVERSIZED_CYCLE_FALLBACK = "oversized_cycle_fallback"


ITERATION_REASONS = (RemovalReason.MAXSAT, RemovalReason.OVERSIZED_CYCLE_FALLBACK)


@dataclass(frozen=True)
class RemovedEdge:
    edge: Edge
    reason: RemovalReason
    iteration: Optional[int] = None

    def __post_init__(self):
        # iteration is recorded only for removals made by the resolver loop
        if (self.reason in ITERATION_REASONS) != (self.iteration is not None):
            raise ValueError(f"RemovedEdge: reason {self.reason.value} does not match iteration {self.iteration}")


class DirectedGraph:
    """
    Subsumption graph over dense integer node ids.

    Backed by a networkx DiGraph. from_edges inserts edges in ascending
    (source, target) order, so the raw networkx adjacency of a graph built
    that way is ordered by node id; add_edge appends, and later edges follow
    insertion order there. successors() and edges() are always sorted. The
    first-seen position of every edge is kept separately so the cleaned
    hierarchy can be written back in input order.
    """

    def __init__(self, node_count: int = 0):
        self.nx = nx.DiGraph()
        self.nx.add_nodes_from(range(node_count))
        self._sequence: Dict[Edge, int] = {}
        self._next_sequence = 0

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[Iterable[int]]) -> "DirectedGraph":
        graph = cls(node_count)
        ordered = {}
        for source, target in edges:
            ordered.setdefault(Edge(source, target), None)
        for edge in ordered:
            graph._sequence[edge] = graph._next_sequence
            graph._next_sequence += 1
        for edge in sorted(ordered):
            graph._check_node(edge.source)
            graph._check_node(edge.target)
            graph.nx.add_edge(edge.source, edge.target)
        return graph

    def _check_node(self, node: int) -> None:
        if not 0 <= node < self.node_count:
            raise ValueError(f"node {node} is outside 0..{self.node_count - 1}")

    @property
    def node_count(self) -> int:
        return self.nx.number_of_nodes()

    @property
    def edge_count(self) -> int:
        return self.nx.number_of_edges()

    def add_edge(self, source: int, target: int) -> bool:
        """Add source -> target; returns False when the edge was already present"""
        self._check_node(source)
        self._check_node(target)
        if self.nx.has_edge(source, target):
            return False
        self.nx.add_edge(source, target)
        self._sequence[Edge(source, target)] = self._next_sequence
        self._next_sequence += 1
        return True

    def remove_edge(self, source: int, target: int) -> None:
        self.nx.remove_edge(source, target)
        self._sequence.pop(Edge(source, target), None)

    def has_edge(self, source: int, target: int) -> bool:
        return self.nx.has_edge(source, target)

    def successors(self, node: int) -> List[int]:
        return sorted(self.nx.successors(node))

    def out_degree(self, node: int) -> int:
        return self.nx.out_degree(node)

    def in_degree(self, node: int) -> int:
        return self.nx.in_degree(node)

    def edges(self) -> List[Edge]:
        return sorted(Edge(u, v) for u, v in self.nx.edges())

    def edges_in_insertion_order(self) -> Iterator[Edge]:
        return iter(sorted(self._sequence, key=self._sequence.__getitem__))

    def copy(self) -> "DirectedGraph":
        clone = DirectedGraph.__new__(DirectedGraph)
        clone.nx = self.nx.copy()
        clone._sequence = dict(self._sequence)
        clone._next_sequence = self._next_sequence
        return clone

    def without_nodes(self, excluded: Iterable[int]) -> "DirectedGraph":
        """Copy that keeps every node id but drops all edges touching an excluded node"""
        excluded = set(excluded)
        clone = self.copy()
        for node in excluded:
            clone.nx.remove_edges_from(list(clone.nx.in_edges(node)) + list(clone.nx.out_edges(node)))
        clone._sequence = {e: s for e, s in clone._sequence.items() if e.source not in excluded and e.target not in excluded}
        return clone

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.node_count == other.node_count and self.edges() == other.edges()

    def __repr__(self):
        return f"DirectedGraph(nodes={self.node_count}, edges={self.edge_count})"
