import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from src.errors import MalformedCycleError
from src.graph.cycles import SimpleCycle
from src.graph.digraph import Edge

logger = logging.getLogger(__name__)

UNIT_WEIGHT = 1

Clause = Tuple[int, ...]


@dataclass(frozen=True)
class EdgeVar:
    id: int
    edge: Optional[Edge]


@dataclass
class MaxSatInstance:
    """
    Weighted partial MAXSAT over edge variables: p_e true keeps edge e.
    Hard clauses are all-negative (break a cycle), soft clauses are unit
    positive literals (keep an edge).
    """
    vars: List[EdgeVar] = field(default_factory=list)
    hard_clauses: List[Clause] = field(default_factory=list)
    soft_clauses: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def var_count(self) -> int:
        return len(self.vars)

    @property
    def top(self) -> int:
        return sum(w for _, w in self.soft_clauses) + 1

    def var_of(self, edge: Edge) -> int:
        return self._index()[Edge(*edge)]

    def _index(self) -> Dict[Edge, int]:
        return {v.edge: v.id for v in self.vars if v.edge is not None}

    def weights(self) -> Dict[int, int]:
        return {abs(lit): w for lit, w in self.soft_clauses}


@dataclass(frozen=True)
class Assignment:
    values: Tuple[bool, ...]

    def __getitem__(self, var: int) -> bool:
        return self.values[var - 1]

    @property
    def cost(self) -> int:
        return sum(1 for v in self.values if not v)

    def satisfies(self, inst: MaxSatInstance) -> bool:
        return all(any(self[abs(lit)] == (lit > 0) for lit in clause) for clause in inst.hard_clauses)


def encode(cycles: Iterable[Union[SimpleCycle, Sequence[int]]]) -> MaxSatInstance:
    """
    One hard clause per distinct cycle, the disjunction of its negated edge
    variables, and one unit soft clause of weight 1 per edge variable.
    Variables are numbered from 1 in order of first appearance.
    """
    inst = MaxSatInstance()
    index: Dict[Edge, int] = {}
    seen = set()
    for raw in cycles:
        cycle = raw if isinstance(raw, SimpleCycle) else SimpleCycle.from_nodes(raw)
        if len(set(cycle.nodes)) != len(cycle.nodes):
            raise MalformedCycleError(f"encode: cycle {cycle.nodes} repeats a node")
        if len(cycle) < 2:
            raise MalformedCycleError(f"encode: reflexive cycle {cycle.nodes} must be removed before encoding")
        if cycle in seen:
            continue
        seen.add(cycle)
        clause = []
        for edge in cycle.edges:
            var = index.get(edge)
            if var is None:
                var = len(index) + 1
                index[edge] = var
                inst.vars.append(EdgeVar(var, edge))
                inst.soft_clauses.append((var, UNIT_WEIGHT))
            clause.append(-var)
        inst.hard_clauses.append(tuple(clause))
    if not inst.hard_clauses:
        raise ValueError("encode: no cycles to encode")
    logger.debug(f"encode: {inst.var_count} variables, {len(inst.hard_clauses)} hard clauses")
    return inst


def decode(inst: MaxSatInstance, assignment: Assignment) -> List[Edge]:
    """Edges whose variables are false, i.e. the edges to remove"""
    return [v.edge for v in inst.vars if not assignment[v.id]]
