"""Slow but obviously correct reference answers for small graphs."""
import itertools
import logging
from typing import Iterable, List, Set, Tuple

import networkx as nx

from src.errors import InstanceTooLargeError
from src.graph.cycles import SimpleCycle
from src.graph.digraph import DirectedGraph, Edge

logger = logging.getLogger(__name__)

MAX_SUBSET_EDGES = 20
MAX_ORDERING_NODES = 10


def brute_force_cycles(g: DirectedGraph) -> Set[SimpleCycle]:
    """Every simple cycle, by extending simple paths that start at their smallest node"""
    found: Set[SimpleCycle] = set()

    def extend(start: int, path: List[int], on_path: Set[int]) -> None:
        for succ in g.successors(path[-1]):
            if succ == start:
                found.add(SimpleCycle.from_nodes(path))
            elif succ > start and succ not in on_path:
                path.append(succ)
                on_path.add(succ)
                extend(start, path, on_path)
                on_path.discard(succ)
                path.pop()

    for start in range(g.node_count):
        extend(start, [start], {start})
    return found


def _acyclic_without(g: DirectedGraph, removed: Iterable[Edge]) -> bool:
    view = nx.restricted_view(g.nx, [], list(removed))
    return nx.is_directed_acyclic_graph(view)


def _subset_search(g: DirectedGraph) -> Tuple[int, List[Edge]]:
    # only edges inside a strongly connected component can lie on a cycle
    component = {}
    for i, members in enumerate(nx.strongly_connected_components(g.nx)):
        component.update((n, i) for n in members)
    edges = [e for e in g.edges() if component[e.source] == component[e.target]]
    for size in range(len(edges) + 1):
        for subset in itertools.combinations(edges, size):
            if _acyclic_without(g, subset):
                return size, list(subset)
    raise AssertionError("removing every edge always leaves a DAG")


def _ordering_search(g: DirectedGraph) -> Tuple[int, List[Edge]]:
    # best[S]: fewest backward edges when the nodes of S come first in some order
    nodes = [n for n in range(g.node_count) if g.in_degree(n) or g.out_degree(n)]
    position = {n: i for i, n in enumerate(nodes)}
    full = (1 << len(nodes)) - 1
    best = [None] * (full + 1)
    choice = [None] * (full + 1)
    best[0] = 0
    for placed in range(full + 1):
        if best[placed] is None:
            continue
        for node in nodes:
            bit = 1 << position[node]
            if placed & bit:
                continue
            backward = sum(1 for succ in g.successors(node) if placed & (1 << position[succ]))
            cost = best[placed] + backward
            if best[placed | bit] is None or cost < best[placed | bit]:
                best[placed | bit] = cost
                choice[placed | bit] = node
    order: List[int] = []
    placed = full
    while placed:
        node = choice[placed]
        order.append(node)
        placed &= ~(1 << position[node])
    order.reverse()
    rank = {n: i for i, n in enumerate(order)}
    removed = [e for e in g.edges() if rank[e.target] < rank[e.source]]
    return best[full], removed


def brute_force_min_removal(g: DirectedGraph) -> Tuple[int, List[Edge]]:
    """
    Exact minimum feedback edge set: increasing-size subset search for up to
    20 edges, otherwise an exhaustive search over node orderings for up to
    10 nodes. Self-loops are always part of the answer.
    """
    loops = [Edge(u, v) for u, v in nx.selfloop_edges(g.nx)]
    if loops:
        rest = g.copy()
        for edge in loops:
            rest.remove_edge(*edge)
        size, removed = brute_force_min_removal(rest)
        return size + len(loops), sorted(loops + removed)
    if g.edge_count <= MAX_SUBSET_EDGES:
        return _subset_search(g)
    active = sum(1 for n in range(g.node_count) if g.in_degree(n) or g.out_degree(n))
    if active <= MAX_ORDERING_NODES:
        return _ordering_search(g)
    raise InstanceTooLargeError(
        f"brute_force_min_removal: {g.edge_count} edges over {active} nodes is beyond exhaustive search"
    )


def greedy_cycle_packing(cycles: Iterable[SimpleCycle]) -> List[SimpleCycle]:
    """Edge-disjoint cycles picked shortest first; their count bounds any hitting set from below"""
    used: Set[Edge] = set()
    packing = []
    for cycle in sorted(cycles, key=lambda c: (len(c), c.nodes)):
        if used.isdisjoint(cycle.edges):
            used.update(cycle.edges)
            packing.append(cycle)
    return packing
