import logging
import os
import random
import threading
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, FrozenSet, Iterable, List, Optional, Set

import networkx as nx

from src.errors import ConfigError, NoCycleError
from src.graph.cycles import DEFAULT_CYCLE_CAP, enumerate_simple_cycles, induced_subgraph
from src.graph.digraph import DirectedGraph, RemovalReason, RemovedEdge
from src.graph.preprocess import prune_acyclic_fringe
from src.graph.search import find_cycle, is_acyclic
from src.maxsat.encoding import decode, encode
from src.maxsat.solver import solve, solve_rc2
from src.maxsat.wcnf import export_wcnf
from src.rdf.terms import RDFS_SUBCLASSOF

logger = logging.getLogger(__name__)

SOLVERS = {"bnb": solve, "rc2": solve_rc2}


@dataclass
class ResolverConfig:
    bound: int = 60
    min_cycles: int = 3
    cycle_cap: int = DEFAULT_CYCLE_CAP
    timeout_seconds: float = 7200.0
    seed: int = 0
    predicate: str = RDFS_SUBCLASSOF
    solver: str = "bnb"
    record_timing: bool = False
    wcnf_dir: Optional[str] = None

    def __post_init__(self):
        if self.bound < 2:
            raise ConfigError(f"bound must be at least 2, got {self.bound}")
        if self.min_cycles < 1:
            raise ConfigError(f"min_cycles must be at least 1, got {self.min_cycles}")
        if self.cycle_cap < self.min_cycles:
            raise ConfigError(f"cycle_cap ({self.cycle_cap}) must not be below min_cycles ({self.min_cycles})")
        if self.timeout_seconds < 0:
            raise ConfigError(f"timeout_seconds must not be negative, got {self.timeout_seconds}")
        if self.solver not in SOLVERS:
            raise ConfigError(f"unknown solver {self.solver!r}, expected one of {sorted(SOLVERS)}")

    def as_dict(self):
        return asdict(self)


class ResolutionStatus(str, Enum):
    ACYCLIC = "acyclic"
    TIMEOUT = "timeout"


@dataclass
class IterationStat:
    iteration: int
    neighborhood_size: int = 0
    cycles: int = 0
    truncated: bool = False
    edges_removed: int = 0
    solver_cost: Optional[int] = None
    wall_ms: float = 0.0
    fallback: bool = False
    removals: List[RemovedEdge] = field(default_factory=list, repr=False)
    neighborhood: FrozenSet[int] = field(default_factory=frozenset, repr=False)

    def as_dict(self):
        return {
            "iteration": self.iteration,
            "neighborhood_size": self.neighborhood_size,
            "cycles": self.cycles,
            "truncated": self.truncated,
            "edges_removed": self.edges_removed,
            "solver_cost": self.solver_cost,
            "wall_ms": self.wall_ms,
            "fallback": self.fallback,
        }


@dataclass
class ResolutionReport:
    config: ResolverConfig
    removals: List[RemovedEdge] = field(default_factory=list)
    iterations: List[IterationStat] = field(default_factory=list)
    status: ResolutionStatus = ResolutionStatus.ACYCLIC

    @property
    def seed(self) -> int:
        return self.config.seed


def _close_over_components(g: DirectedGraph, pruned: Set[int], neighborhood: Set[int], bound: int) -> Set[int]:
    """Grow a dry neighborhood by whole cyclic components of g that it touches while staying within bound"""
    active = nx.subgraph_view(g.nx, filter_node=lambda n: n not in pruned)
    components = [c for c in nx.strongly_connected_components(active) if len(c) > 1 and c & neighborhood]
    closed = set(neighborhood)
    for component in sorted(components, key=min):
        if len(closed | component) <= bound:
            closed |= component
    return closed


def collect_neighborhood(g: DirectedGraph, cfg: ResolverConfig, rng: random.Random,
                         sources: Optional[Iterable[int]] = None) -> Set[int]:
    """
    Gather a node set N of roughly cfg.bound nodes by repeatedly finding a
    cycle on a scratch copy of g, adding its nodes to N and deleting one
    random edge of it from the scratch copy. g itself is never modified.
    """
    pruned = prune_acyclic_fringe(g)
    scratch = g.without_nodes(pruned)
    neighborhood: Set[int] = set()
    found = 0
    search_sources = list(sources or [])
    while True:
        cycle = find_cycle(scratch, sources=search_sources, rng=rng)
        if cycle is None:
            if found and len(neighborhood) < cfg.bound:
                neighborhood = _close_over_components(g, pruned, neighborhood, cfg.bound)
            break
        found += 1
        neighborhood.update(cycle.nodes)
        scratch.remove_edge(*rng.choice(cycle.edges))
        if len(neighborhood) >= cfg.bound and found >= cfg.min_cycles:
            break
        search_sources = sorted(neighborhood)
    if not found:
        logger.error("collect_neighborhood: Failed: graph has no cycle")
        raise NoCycleError("collect_neighborhood called on an acyclic graph")
    logger.debug(f"collect_neighborhood: {len(neighborhood)} nodes from {found} cycles")
    return neighborhood


def _dump_wcnf(cfg: ResolverConfig, iteration: int, inst) -> None:
    os.makedirs(cfg.wcnf_dir, exist_ok=True)
    path = os.path.join(cfg.wcnf_dir, f"iteration_{iteration:05d}.wcnf")
    with open(path, "w", encoding="utf-8") as sink:
        export_wcnf(inst, sink, edge_comments=True)


def resolve_step(g: DirectedGraph, cfg: ResolverConfig, rng: random.Random, iteration: int,
                 sources: Optional[Iterable[int]] = None,
                 clock: Callable[[], float] = time.perf_counter) -> IterationStat:
    """One anytime iteration: neighborhood, simple cycles, MAXSAT, removal from g"""
    started = clock()
    neighborhood = collect_neighborhood(g, cfg, rng, sources)
    result = enumerate_simple_cycles(induced_subgraph(g, neighborhood), cfg.cycle_cap)
    stat = IterationStat(
        iteration=iteration,
        neighborhood_size=len(neighborhood),
        cycles=len(result.cycles),
        truncated=result.truncated,
        neighborhood=frozenset(neighborhood),
    )

    if len(result.cycles) == 1 and len(result.cycles[0]) > cfg.bound:
        edge = rng.choice(result.cycles[0].edges)
        stat.fallback = True
        stat.removals.append(RemovedEdge(edge, RemovalReason.OVERSIZED_CYCLE_FALLBACK, iteration))
        logger.info(f"resolve_step: Single cycle of {len(result.cycles[0])} nodes exceeds bound, removing {edge}")
    else:
        inst = encode(result.cycles)
        if cfg.wcnf_dir:
            _dump_wcnf(cfg, iteration, inst)
        assignment = SOLVERS[cfg.solver](inst)
        stat.solver_cost = assignment.cost
        stat.removals.extend(RemovedEdge(edge, RemovalReason.MAXSAT, iteration) for edge in decode(inst, assignment))

    for removal in stat.removals:
        g.remove_edge(*removal.edge)
    stat.edges_removed = len(stat.removals)
    if cfg.record_timing:
        stat.wall_ms = round((clock() - started) * 1000.0, 3)
    return stat


def resolve(g: DirectedGraph, cfg: ResolverConfig, stop: Optional[threading.Event] = None,
            clock: Callable[[], float] = time.perf_counter) -> ResolutionReport:
    """
    Repeat resolve_step until g is acyclic or time runs out. The stop event
    and the deadline are checked between iterations only, so every recorded
    removal has been applied to g when this returns.
    """
    logger.info(f"resolve: Starting on {g!r} with bound {cfg.bound}, seed {cfg.seed}")
    report = ResolutionReport(config=cfg)
    rng = random.Random(cfg.seed)
    deadline = time.monotonic() + cfg.timeout_seconds
    sources: Optional[List[int]] = None
    iteration = 0
    while True:
        if is_acyclic(g).acyclic:
            report.status = ResolutionStatus.ACYCLIC
            break
        if time.monotonic() >= deadline or (stop is not None and stop.is_set()):
            logger.warning(f"resolve: Stopping after {iteration} iterations, graph still cyclic")
            report.status = ResolutionStatus.TIMEOUT
            break
        iteration += 1
        stat = resolve_step(g, cfg, rng, iteration, sources=sources, clock=clock)
        report.iterations.append(stat)
        report.removals.extend(stat.removals)
        logger.info(
            f"resolve: iteration {iteration}: |N|={stat.neighborhood_size} cycles={stat.cycles} "
            f"truncated={stat.truncated} removed={stat.edges_removed} cost={stat.solver_cost} "
            f"wall_ms={stat.wall_ms}"
        )
        sources = [n for n in sorted(stat.neighborhood) if g.in_degree(n) and g.out_degree(n)]
    logger.info(f"resolve: Finished with status {report.status.value}, {len(report.removals)} edges removed")
    return report
