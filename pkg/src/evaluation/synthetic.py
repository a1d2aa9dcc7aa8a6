import logging
import random
from dataclasses import asdict, dataclass, field
from typing import List, Tuple

from src.errors import InfeasibleSpecError
from src.graph.cycles import SimpleCycle
from src.graph.digraph import DirectedGraph

logger = logging.getLogger(__name__)

SYNTHETIC_NAMESPACE = "http://example.org/synthetic/"


@dataclass
class SyntheticSpec:
    """Random cyclic taxonomy: a DAG backbone plus planted, possibly nested, directed cycles"""
    nodes: int = 500
    edge_probability: float = 0.002
    planted_cycles: int = 60
    cycle_length: Tuple[int, int] = (2, 8)
    nesting: float = 0.6
    seed: int = 0

    def validate(self) -> None:
        low, high = self.cycle_length
        if self.nodes < 0 or self.planted_cycles < 0:
            raise InfeasibleSpecError("node and cycle counts must not be negative")
        if not 0.0 <= self.edge_probability <= 1.0 or not 0.0 <= self.nesting <= 1.0:
            raise InfeasibleSpecError("edge_probability and nesting must lie in [0, 1]")
        if self.planted_cycles and (low < 2 or high < low):
            raise InfeasibleSpecError(f"invalid cycle length range {self.cycle_length}")
        if self.planted_cycles and high > self.nodes:
            raise InfeasibleSpecError(f"cycles of length {high} do not fit in {self.nodes} nodes")

    def as_dict(self):
        return asdict(self)


@dataclass
class SyntheticGraph:
    graph: DirectedGraph
    planted: List[SimpleCycle] = field(default_factory=list)
    spec: SyntheticSpec = field(default_factory=SyntheticSpec)

    def iri(self, node: int) -> str:
        return f"{SYNTHETIC_NAMESPACE}C{node}"


def generate(spec: SyntheticSpec) -> SyntheticGraph:
    """
    DAG edges only run from lower to higher rank of a random node ranking;
    each planted cycle then closes over its nodes in a random order. With
    probability `nesting` a planted cycle reuses nodes of an earlier one.
    """
    spec.validate()
    rng = random.Random(spec.seed)
    ranking = list(range(spec.nodes))
    rng.shuffle(ranking)

    edges = []
    for i, u in enumerate(ranking):
        for v in ranking[i + 1:]:
            if rng.random() < spec.edge_probability:
                edges.append((u, v))

    planted: List[SimpleCycle] = []
    low, high = spec.cycle_length
    for _ in range(spec.planted_cycles):
        length = rng.randint(low, high)
        members: List[int] = []
        if planted and rng.random() < spec.nesting:
            host = rng.choice(planted)
            shared = rng.randint(1, min(len(host), length - 1))
            members = rng.sample(list(host.nodes), shared)
        taken = set(members)
        rest = [n for n in range(spec.nodes) if n not in taken]
        members += rng.sample(rest, length - len(members))
        rng.shuffle(members)
        cycle = SimpleCycle.from_nodes(members)
        planted.append(cycle)
        edges.extend(cycle.edges)

    graph = DirectedGraph.from_edges(spec.nodes, edges)
    logger.info(f"generate: {graph!r} with {len(planted)} planted cycles (seed {spec.seed})")
    return SyntheticGraph(graph, planted, spec)
