import logging
import sys
from collections import Counter, defaultdict
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set

from networkx.utils import UnionFind

from src.errors import UnsatisfiableInstanceError
from src.maxsat.encoding import Assignment, MaxSatInstance

logger = logging.getLogger(__name__)


def _drop_subsumed(clauses: List[FrozenSet[int]]) -> List[FrozenSet[int]]:
    """Remove every clause that is a strict superset of another one"""
    by_var: Dict[int, List[int]] = defaultdict(list)
    for i, clause in enumerate(clauses):
        for var in clause:
            by_var[var].append(i)
    dropped: Set[int] = set()
    for i in sorted(range(len(clauses)), key=lambda k: len(clauses[k])):
        if i in dropped:
            continue
        clause = clauses[i]
        rarest = min(clause, key=lambda v: (len(by_var[v]), v))
        for j in by_var[rarest]:
            if j != i and j not in dropped and len(clauses[j]) > len(clause) and clause <= clauses[j]:
                dropped.add(j)
    return [c for i, c in enumerate(clauses) if i not in dropped]


def _drop_dominated_vars(clauses: List[FrozenSet[int]], weights: Dict[int, int]) -> List[FrozenSet[int]]:
    """
    A variable whose clauses are all covered by another variable that is no
    more expensive never needs to be picked. Equal candidates keep the lowest
    id.
    """
    occurrences: Dict[int, Set[int]] = defaultdict(set)
    for i, clause in enumerate(clauses):
        for var in clause:
            occurrences[var].add(i)
    dominated = set()
    for a in sorted(occurrences):
        first = min(occurrences[a])
        for b in clauses[first]:
            if b == a or not occurrences[a] <= occurrences[b] or weights[b] > weights[a]:
                continue
            if occurrences[a] < occurrences[b] or weights[b] < weights[a] or b < a:
                dominated.add(a)
                break
    if not dominated:
        return clauses
    return [frozenset(c - dominated) for c in clauses]


class HittingSetSolver:
    """
    Exact minimum-weight hitting set by branch and bound.

    Every hard clause of the cycle encoding says "remove at least one of these
    edges", so an optimal assignment is a minimum hitting set of the clause
    family. The search uses unit propagation, a greedy disjoint-clause packing
    as lower bound and branches on the variable in most open clauses, trying
    "remove" before "keep". Ties always go to the lowest variable id.
    """

    def __init__(self, clauses: Iterable[Iterable[int]], weights: Dict[int, int]):
        self.weights = weights
        self.clauses = sorted({frozenset(c) for c in clauses}, key=lambda c: (len(c), sorted(c)))
        self.best: FrozenSet[int] = frozenset()
        self.best_cost = 0
        self.nodes = 0

    def _cost(self, chosen: Iterable[int]) -> int:
        return sum(self.weights[v] for v in chosen)

    def _greedy(self, clauses: Sequence[FrozenSet[int]]) -> FrozenSet[int]:
        open_clauses = list(clauses)
        chosen: Set[int] = set()
        while open_clauses:
            counts = Counter(v for c in open_clauses for v in c)
            var = min(counts, key=lambda v: (-counts[v] / self.weights[v], v))
            chosen.add(var)
            open_clauses = [c for c in open_clauses if var not in c]
        for var in sorted(chosen, key=lambda v: (-self.weights[v], -v)):
            rest = chosen - {var}
            if all(c & rest for c in clauses):
                chosen = rest
        return frozenset(chosen)

    def _lower_bound(self, clauses: Sequence[FrozenSet[int]]) -> int:
        used: Set[int] = set()
        bound = 0
        for clause in sorted(clauses, key=lambda c: (len(c), min(c))):
            if used.isdisjoint(clause):
                used |= clause
                bound += min(self.weights[v] for v in clause)
        return bound

    def _search(self, chosen: FrozenSet[int], cost: int, clauses: List[FrozenSet[int]]) -> None:
        self.nodes += 1
        units = {next(iter(c)) for c in clauses if len(c) == 1}
        if units:
            chosen = chosen | units
            cost += self._cost(units)
            clauses = [c for c in clauses if c.isdisjoint(units)]
        if cost >= self.best_cost:
            return
        if not clauses:
            self.best, self.best_cost = chosen, cost
            return
        if cost + self._lower_bound(clauses) >= self.best_cost:
            return
        counts = Counter(v for c in clauses for v in c)
        var = min(counts, key=lambda v: (-counts[v], v))
        self._search(chosen | {var}, cost + self.weights[var], [c for c in clauses if var not in c])
        reduced = [c - {var} if var in c else c for c in clauses]
        if all(reduced):
            self._search(chosen, cost, reduced)

    def solve(self) -> FrozenSet[int]:
        if any(not c for c in self.clauses):
            raise UnsatisfiableInstanceError("an empty hard clause cannot be satisfied")
        reduced = {c for c in _drop_dominated_vars(self.clauses, self.weights)}
        clauses = _drop_subsumed(sorted(reduced, key=lambda c: (len(c), sorted(c))))
        self.best = self._greedy(clauses)
        self.best_cost = self._cost(self.best)
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * len(self.weights) + 1000))
        try:
            self._search(frozenset(), 0, clauses)
        finally:
            sys.setrecursionlimit(limit)
        return self.best


def _components(clauses: Sequence[Sequence[int]]) -> List[List[Sequence[int]]]:
    partition = UnionFind()
    for clause in clauses:
        partition.union(*clause)
    groups: Dict[int, List[Sequence[int]]] = defaultdict(list)
    for clause in clauses:
        groups[partition[clause[0]]].append(clause)
    return sorted(groups.values(), key=lambda g: min(min(c) for c in g))


def solve(inst: MaxSatInstance) -> Assignment:
    """
    Optimal assignment of a cycle-breaking instance: all hard clauses hold
    and the number of false (removed) variables is minimal. Independent
    groups of clauses are solved separately.
    """
    if any(not clause for clause in inst.hard_clauses):
        raise UnsatisfiableInstanceError("solve: an empty hard clause cannot be satisfied")
    weights = inst.weights()
    for var in range(1, inst.var_count + 1):
        weights.setdefault(var, 1)
    removed: Set[int] = set()
    explored = 0
    for group in _components([[abs(lit) for lit in clause] for clause in inst.hard_clauses]):
        solver = HittingSetSolver(group, weights)
        removed |= solver.solve()
        explored += solver.nodes
    assignment = Assignment(tuple(var not in removed for var in range(1, inst.var_count + 1)))
    if not assignment.satisfies(inst):
        raise UnsatisfiableInstanceError("solve: solver returned an assignment violating a hard clause")
    logger.debug(f"solve: cost {assignment.cost} after {explored} search nodes")
    return assignment


def solve_rc2(inst: MaxSatInstance) -> Assignment:
    """Same contract as solve, delegated to the RC2 MaxSAT solver of python-sat"""
    from pysat.examples.rc2 import RC2
    from pysat.formula import WCNF

    formula = WCNF()
    for clause in inst.hard_clauses:
        formula.append(list(clause))
    for lit, weight in inst.soft_clauses:
        formula.append([lit], weight=weight)
    with RC2(formula) as rc2:
        model = rc2.compute()
    if model is None:
        raise UnsatisfiableInstanceError("solve_rc2: hard clauses are unsatisfiable")
    truth = {abs(lit): lit > 0 for lit in model}
    assignment = Assignment(tuple(truth.get(var, True) for var in range(1, inst.var_count + 1)))
    logger.debug(f"solve_rc2: cost {assignment.cost}")
    return assignment
