import logging
import random
from collections import deque
from typing import Iterable, NamedTuple, Optional, Set

import networkx as nx

from src.errors import CyclicGraphError
from src.graph.cycles import SimpleCycle
from src.graph.digraph import DirectedGraph

logger = logging.getLogger(__name__)


class AcyclicityCheck(NamedTuple):
    acyclic: bool
    witness: Optional[SimpleCycle] = None

    def __bool__(self):
        return self.acyclic


def _dfs_cycle(view: nx.DiGraph, sources) -> Optional[SimpleCycle]:
    try:
        return SimpleCycle.from_edges(nx.find_cycle(view, source=sources))
    except nx.NetworkXNoCycle:
        return None


def _shortest_cycle_through(view: nx.DiGraph, node: int, component: Set[int]) -> Optional[SimpleCycle]:
    # breadth-first inside the strongly connected component of node, stopping at the first edge back to it
    parent = {node: None}
    queue = deque([node])
    while queue:
        u = queue.popleft()
        for v in sorted(view.successors(u)):
            if v == node:
                path = []
                while u is not None:
                    path.append(u)
                    u = parent[u]
                return SimpleCycle.from_nodes(path[::-1])
            if v in component and v not in parent:
                parent[v] = u
                queue.append(v)
    return None


def find_cycle(g: DirectedGraph, sources: Optional[Iterable[int]] = None, rng: Optional[random.Random] = None,
               pruned: Optional[Set[int]] = None) -> Optional[SimpleCycle]:
    """
    Search for one cycle, starting from sources when given.

    A source lying on a cycle yields the shortest cycle through it (first
    such source wins). Otherwise a depth-first search from all sources looks
    for any reachable back edge. When nothing is reachable from the sources,
    untried nodes are searched in a seeded random order until a cycle turns up
    or every node is exhausted. Everything reachable from a failed search is
    cycle-free and never tried again.
    """
    rng = rng or random.Random(0)
    pruned = pruned or set()
    view = nx.subgraph_view(g.nx, filter_node=lambda n: n not in pruned) if pruned else g.nx

    cleared: Set[int] = set()
    if sources:
        start = [s for s in sources if s not in pruned and s in g.nx]
        if start:
            component_of = {}
            for members in nx.strongly_connected_components(view):
                if len(members) > 1:
                    component_of.update((n, members) for n in members)
            on_cycle = next((s for s in start if s in component_of), None)
            if on_cycle is not None:
                return _shortest_cycle_through(view, on_cycle, component_of[on_cycle])
            cycle = _dfs_cycle(view, start)
            if cycle is not None:
                return cycle
            for s in start:
                cleared.add(s)
                cleared.update(nx.descendants(view, s))

    candidates = [n for n in sorted(view.nodes) if n not in cleared and view.in_degree(n) and view.out_degree(n)]
    rng.shuffle(candidates)
    for node in candidates:
        if node in cleared:
            continue
        cycle = _dfs_cycle(view, node)
        if cycle is not None:
            return cycle
        cleared.add(node)
        cleared.update(nx.descendants(view, node))
    return None


def is_acyclic(g: DirectedGraph) -> AcyclicityCheck:
    if nx.is_directed_acyclic_graph(g.nx):
        return AcyclicityCheck(True)
    witness = SimpleCycle.from_edges(nx.find_cycle(g.nx))
    return AcyclicityCheck(False, witness)


def superclasses(g: DirectedGraph, start: int) -> Set[int]:
    """Every class reachable from start along subclass edges, start excluded"""
    check = is_acyclic(g)
    if not check.acyclic:
        logger.error(f"superclasses: Graph has cycle {check.witness}")
        raise CyclicGraphError(f"transitive closure unreliable: graph has cycle {check.witness}", check.witness)
    return set(nx.descendants(g.nx, start))
