import itertools
import os
import random
import threading

import networkx as nx
import pytest
from src.errors import ConfigError, NoCycleError
from src.evaluation.oracle import brute_force_min_removal
from src.evaluation.synthetic import SyntheticSpec, generate
from src.graph.cycles import induced_subgraph
from src.graph.digraph import DirectedGraph, RemovalReason
from src.graph.search import is_acyclic
from src.resolver.resolver import ResolutionStatus, ResolverConfig, collect_neighborhood, resolve, resolve_step
from tests.conftest import EXAMPLE_EDGES, EXAMPLE_OPTIMUM, example_graph, random_graph

# src/resolver/test_resolver.py

def _ring(n):
    return DirectedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

def _is_dag(graph):
    return nx.is_directed_acyclic_graph(graph.nx)

@pytest.mark.regression
def test_example_removes_five_edges(example):
    report = resolve(example, ResolverConfig())
    assert report.status is ResolutionStatus.ACYCLIC
    assert len(report.removals) == EXAMPLE_OPTIMUM
    assert all(r.reason is RemovalReason.MAXSAT for r in report.removals)
    assert _is_dag(example)
    assert example.edge_count == len(EXAMPLE_EDGES) - EXAMPLE_OPTIMUM

def test_acyclic_input_needs_no_iteration():
    graph = DirectedGraph.from_edges(3, [(0, 1), (1, 2)])
    report = resolve(graph, ResolverConfig())
    assert report.status is ResolutionStatus.ACYCLIC
    assert report.removals == []
    assert report.iterations == []

def test_two_disjoint_triangles():
    graph = DirectedGraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    report = resolve(graph, ResolverConfig(bound=6))
    assert len(report.removals) == 2

def test_triangles_sharing_an_edge():
    graph = DirectedGraph.from_edges(4, [(0, 1), (1, 2), (2, 0), (1, 3), (3, 0)])
    report = resolve(graph, ResolverConfig(bound=4))
    assert [r.edge for r in report.removals] == [(0, 1)]

def test_oversized_single_cycle_falls_back_to_random_edge():
    graph = _ring(100)
    report = resolve(graph, ResolverConfig(bound=60))
    assert report.status is ResolutionStatus.ACYCLIC
    assert len(report.removals) == 1
    assert report.removals[0].reason is RemovalReason.OVERSIZED_CYCLE_FALLBACK
    assert report.iterations[0].fallback

def test_neighborhood_waits_for_min_cycles():
    # Five disjoint 2-cycles: the bound is met by the first, but three cycles are required.
    graph = DirectedGraph.from_edges(10, [(2 * i, 2 * i + 1) for i in range(5)] + [(2 * i + 1, 2 * i) for i in range(5)])
    neighborhood = collect_neighborhood(graph, ResolverConfig(bound=2, min_cycles=3), random.Random(0))
    assert len(neighborhood) == 6

def test_neighborhood_stops_when_graph_runs_dry():
    graph = DirectedGraph.from_edges(4, [(0, 1), (1, 0), (2, 3)])
    neighborhood = collect_neighborhood(graph, ResolverConfig(bound=2, min_cycles=3), random.Random(0))
    assert neighborhood == {0, 1}

def test_neighborhood_leaves_graph_untouched(example):
    collect_neighborhood(example, ResolverConfig(bound=4), random.Random(1))
    assert example == example_graph()

def test_neighborhood_on_dag_raises():
    with pytest.raises(NoCycleError):
        collect_neighborhood(DirectedGraph.from_edges(2, [(0, 1)]), ResolverConfig(), random.Random(0))

def test_step_applies_its_removals(example):
    stat = resolve_step(example, ResolverConfig(), random.Random(0), 1)
    assert stat.edges_removed == EXAMPLE_OPTIMUM
    assert all(not example.has_edge(*r.edge) for r in stat.removals)
    assert stat.cycles == 12

@pytest.mark.parametrize("seed", range(200))
def test_matches_oracle_when_graph_fits_one_neighborhood(seed):
    graph = random_graph(seed)
    optimum, _ = brute_force_min_removal(graph)
    report = resolve(graph, ResolverConfig(bound=max(graph.node_count, 2), seed=seed))
    assert report.status is ResolutionStatus.ACYCLIC
    assert _is_dag(graph)
    assert len(report.removals) >= optimum
    if not any(stat.truncated for stat in report.iterations):
        assert len(report.removals) == optimum

@pytest.mark.parametrize("seed", range(20))
def test_small_bounds_still_terminate(seed):
    graph = random_graph(seed, max_nodes=12, low=0.2, high=0.4)
    optimum, _ = brute_force_min_removal(graph) if graph.edge_count <= 20 else (0, None)
    report = resolve(graph, ResolverConfig(bound=2, min_cycles=1, seed=seed))
    assert report.status is ResolutionStatus.ACYCLIC
    assert _is_dag(graph)
    assert len(report.removals) >= optimum

def test_same_seed_same_removals():
    spec = SyntheticSpec(nodes=80, edge_probability=0.03, planted_cycles=12, cycle_length=(2, 6), nesting=0.7, seed=4)
    first = resolve(generate(spec).graph, ResolverConfig(bound=12, seed=9))
    second = resolve(generate(spec).graph, ResolverConfig(bound=12, seed=9))
    assert first.removals == second.removals
    assert [s.as_dict() for s in first.iterations] == [s.as_dict() for s in second.iterations]

def test_zero_timeout_returns_partial_result(example):
    report = resolve(example, ResolverConfig(timeout_seconds=0))
    assert report.status is ResolutionStatus.TIMEOUT
    assert report.removals == []
    assert example == example_graph()

def test_stop_event_then_rerun_converges(example):
    stop = threading.Event()
    stop.set()
    partial = resolve(example, ResolverConfig(), stop=stop)
    assert partial.status is ResolutionStatus.TIMEOUT
    final = resolve(example, ResolverConfig())
    assert final.status is ResolutionStatus.ACYCLIC
    assert is_acyclic(example).acyclic

def test_wcnf_dump(tmp_path, example):
    resolve(example, ResolverConfig(wcnf_dir=str(tmp_path)))
    dumped = sorted(os.listdir(tmp_path))
    assert dumped == ["iteration_00001.wcnf"]
    text = (tmp_path / dumped[0]).read_text()
    assert "p wcnf 15 27 16" in text
    assert text.startswith("c edge ")

def test_timing_is_recorded_only_on_request(example):
    ticks = itertools.count()
    report = resolve(example, ResolverConfig(record_timing=True), clock=lambda: next(ticks) * 0.5)
    assert report.iterations[0].wall_ms == 500.0
    untimed = resolve(example_graph(), ResolverConfig())
    assert untimed.iterations[0].wall_ms == 0.0

@pytest.mark.parametrize("values", [
    {"bound": 1},
    {"min_cycles": 0},
    {"cycle_cap": 2, "min_cycles": 3},
    {"timeout_seconds": -1},
    {"solver": "z3"},
])
def test_config_validation(values):
    with pytest.raises(ConfigError):
        ResolverConfig(**values)

@pytest.mark.parametrize("seed", range(40))
def test_every_iteration_is_optimal_for_its_neighborhood(seed):
    graph = random_graph(seed, max_nodes=9, low=0.2, high=0.4)
    cfg = ResolverConfig(bound=3, min_cycles=1, seed=seed)
    rng = random.Random(seed)
    sources = None
    iteration = 0
    while not is_acyclic(graph).acyclic:
        iteration += 1
        before = graph.copy()
        stat = resolve_step(graph, cfg, rng, iteration, sources=sources)
        if not stat.fallback and not stat.truncated:
            # the cycles of the neighborhood are exactly those of its induced subgraph
            optimum, _ = brute_force_min_removal(induced_subgraph(before, stat.neighborhood))
            assert stat.edges_removed == optimum
        sources = [n for n in sorted(stat.neighborhood) if graph.in_degree(n) and graph.out_degree(n)]
    assert _is_dag(graph)

def test_stop_after_first_iteration_keeps_its_removals():
    triangles = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (6, 7), (7, 8), (8, 6)]
    graph = DirectedGraph.from_edges(9, triangles)
    stop = threading.Event()

    def clock():
        # read at the start of every iteration; the loop checks the event before the next one
        stop.set()
        return 0.0

    partial = resolve(graph, ResolverConfig(bound=3, min_cycles=1), stop=stop, clock=clock)
    assert partial.status is ResolutionStatus.TIMEOUT
    assert len(partial.iterations) == 1
    assert [r.reason for r in partial.removals] == [RemovalReason.MAXSAT]
    assert all(not graph.has_edge(*r.edge) for r in partial.removals)
    assert graph.edge_count == len(triangles) - 1
    assert not is_acyclic(graph).acyclic

    final = resolve(graph, ResolverConfig(bound=3, min_cycles=1))
    assert final.status is ResolutionStatus.ACYCLIC
    assert len(partial.removals) + len(final.removals) == 3
    assert _is_dag(graph)
