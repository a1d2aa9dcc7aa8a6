import logging
from collections import deque
from dataclasses import dataclass, field
from typing import List, Set

import networkx as nx

from src.graph.digraph import DirectedGraph, Edge, RemovalReason, RemovedEdge
from src.rdf.equivalence import EquivalenceInput

logger = logging.getLogger(__name__)


def remove_reflexive(g: DirectedGraph) -> List[RemovedEdge]:
    """Drop every self-loop v -> v; they are tautologies"""
    loops = sorted(Edge(u, v) for u, v in nx.selfloop_edges(g.nx))
    for edge in loops:
        g.remove_edge(*edge)
    logger.info(f"remove_reflexive: Removed {len(loops)} reflexive relations")
    return [RemovedEdge(edge, RemovalReason.REFLEXIVE) for edge in loops]


def prune_acyclic_fringe(g: DirectedGraph) -> Set[int]:
    """
    Nodes that cannot lie on any cycle: iteratively strip nodes whose in-degree
    or out-degree drops to zero. The graph is not touched; callers use the
    returned set as a mask.
    """
    indeg = {n: g.in_degree(n) for n in g.nx.nodes}
    outdeg = {n: g.out_degree(n) for n in g.nx.nodes}
    pruned: Set[int] = set()
    queue = deque(n for n in sorted(g.nx.nodes) if indeg[n] == 0 or outdeg[n] == 0)
    while queue:
        node = queue.popleft()
        if node in pruned:
            continue
        pruned.add(node)
        for succ in g.nx.successors(node):
            if succ in pruned:
                continue
            indeg[succ] -= 1
            if indeg[succ] == 0:
                queue.append(succ)
        for pred in g.nx.predecessors(node):
            if pred in pruned:
                continue
            outdeg[pred] -= 1
            if outdeg[pred] == 0:
                queue.append(pred)
    logger.debug(f"prune_acyclic_fringe: {len(pruned)} of {g.node_count} nodes pruned")
    return pruned


def prune_equivalent(g: DirectedGraph, eq: EquivalenceInput) -> List[RemovedEdge]:
    """
    Remove subsumptions between classes declared equivalent, either by an
    explicit equivalentClass assertion or by the sameAs identity closure.
    Explicit assertions win when both apply.
    """
    removed = []
    for edge in g.edges():
        if eq.explicitly_equivalent(edge.source, edge.target):
            removed.append(RemovedEdge(edge, RemovalReason.EQUIVALENCE))
        elif eq.same_identity(edge.source, edge.target):
            removed.append(RemovedEdge(edge, RemovalReason.SAMEAS))
    for entry in removed:
        g.remove_edge(*entry.edge)
    by_equivalence = sum(1 for r in removed if r.reason is RemovalReason.EQUIVALENCE)
    logger.info(
        f"prune_equivalent: Removed {len(removed)} unnecessary relations "
        f"({by_equivalence} equivalentClass, {len(removed) - by_equivalence} sameAs)"
    )
    return removed


@dataclass
class CycleProfile:
    reflexive: int = 0
    reciprocal_pairs: int = 0
    cyclic_components: int = 0
    largest_component: int = 0
    nodes_on_cycles: int = 0
    component_sizes: List[int] = field(default_factory=list)


def cycle_profile(g: DirectedGraph) -> CycleProfile:
    """Cycle taxonomy: self-loops, size-two cycles and the strongly connected parts holding longer ones"""
    profile = CycleProfile()
    profile.reflexive = nx.number_of_selfloops(g.nx)
    profile.reciprocal_pairs = sum(1 for u, v in g.nx.edges() if u < v and g.nx.has_edge(v, u))
    sizes = sorted((len(c) for c in nx.strongly_connected_components(g.nx) if len(c) > 1), reverse=True)
    profile.component_sizes = sizes
    profile.cyclic_components = len(sizes)
    profile.largest_component = sizes[0] if sizes else 0
    on_cycles = sum(sizes)
    # a self-loop on an otherwise acyclic node still puts that node on a cycle
    singleton_loops = {u for u, _ in nx.selfloop_edges(g.nx)}
    for component in nx.strongly_connected_components(g.nx):
        if len(component) > 1:
            singleton_loops -= component
    profile.nodes_on_cycles = on_cycles + len(singleton_loops)
    return profile
