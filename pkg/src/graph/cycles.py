import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Set, Tuple

import networkx as nx

from src.errors import MalformedCycleError, SelfLoopError
from src.graph.digraph import DirectedGraph, Edge

logger = logging.getLogger(__name__)

DEFAULT_CYCLE_CAP = 1_000_000


@dataclass(frozen=True)
class SimpleCycle:
    """
    Closed directed path with no repeated node, stored in canonical rotation
    (smallest node id first). Two cycles are equal iff their canonical forms
    are equal. A single node stands for a reflexive self-loop.
    """
    nodes: Tuple[int, ...]

    @classmethod
    def from_nodes(cls, nodes: Sequence[int]) -> "SimpleCycle":
        nodes = tuple(nodes)
        if not nodes:
            raise MalformedCycleError("a cycle needs at least one node")
        if len(set(nodes)) != len(nodes):
            raise MalformedCycleError(f"cycle {nodes} repeats a node")
        pivot = nodes.index(min(nodes))
        return cls(nodes[pivot:] + nodes[:pivot])

    @classmethod
    def from_edges(cls, edges: Sequence[Tuple[int, int]]) -> "SimpleCycle":
        return cls.from_nodes([u for u, _ in edges])

    @property
    def edges(self) -> List[Edge]:
        closing = self.nodes[1:] + self.nodes[:1]
        return [Edge(u, v) for u, v in zip(self.nodes, closing)]

    def __len__(self):
        return len(self.nodes)

    def __str__(self):
        return " -> ".join(str(n) for n in self.nodes + self.nodes[:1])


@dataclass
class EnumerationResult:
    cycles: List[SimpleCycle] = field(default_factory=list)
    truncated: bool = False
    explored_count: int = 0


def induced_subgraph(g: DirectedGraph, nodes: Iterable[int]) -> DirectedGraph:
    """Subgraph with the edges of g whose endpoints both lie in nodes; node ids are preserved"""
    keep: Set[int] = set(nodes)
    edges = [(u, v) for u, v in g.nx.subgraph(keep).edges()]
    return DirectedGraph.from_edges(g.node_count, edges)


def enumerate_simple_cycles(g: DirectedGraph, cap: int = DEFAULT_CYCLE_CAP) -> EnumerationResult:
    """
    All elementary circuits of g, at most cap of them.

    Uses the Johnson-style search of networkx; the generator is consumed
    lazily so a cap stops the enumeration instead of materializing every
    cycle. Returned cycles are canonical and sorted by their node sequence.
    """
    if cap < 1:
        raise ValueError(f"cycle cap must be positive, got {cap}")
    loops = list(nx.selfloop_edges(g.nx))
    if loops:
        raise SelfLoopError(f"enumerate_simple_cycles: {len(loops)} self-loops left after pre-processing")

    seen = set()
    result = EnumerationResult()
    for raw in nx.simple_cycles(g.nx):
        result.explored_count += 1
        cycle = SimpleCycle.from_nodes(raw)
        if cycle in seen:
            continue
        if len(seen) == cap:
            result.truncated = True
            break
        seen.add(cycle)
    result.cycles = sorted(seen, key=lambda c: c.nodes)
    if result.truncated:
        logger.warning(f"enumerate_simple_cycles: Stopped at cap {cap} on a graph with {g.edge_count} edges")
    logger.debug(f"enumerate_simple_cycles: {len(result.cycles)} cycles, truncated={result.truncated}")
    return result
