import io

import networkx as nx
import pytest
from src.errors import InfeasibleSpecError, InstanceTooLargeError
from src.evaluation.oracle import _ordering_search, _subset_search, brute_force_cycles, brute_force_min_removal
from src.evaluation.sweep import CSV_HEADER, SweepRow, mean_removals, summarize, sweep, trend, write_csv
from src.evaluation.synthetic import SYNTHETIC_NAMESPACE, SyntheticSpec, generate
from src.graph.digraph import DirectedGraph
from src.resolver.resolver import ResolverConfig
from tests.conftest import EXAMPLE_OPTIMUM, example_cycles, random_graph

# src/evaluation/test_evaluation.py

def _after_removal_is_dag(graph, removed):
    clone = graph.copy()
    for edge in removed:
        clone.remove_edge(*edge)
    return nx.is_directed_acyclic_graph(clone.nx)

# Oracle

def test_three_cycle_needs_one():
    graph = DirectedGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert brute_force_min_removal(graph)[0] == 1

def test_two_disjoint_two_cycles_need_two():
    graph = DirectedGraph.from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    assert brute_force_min_removal(graph)[0] == 2

@pytest.mark.regression
def test_example_oracle(example):
    size, removed = brute_force_min_removal(example)
    assert size == EXAMPLE_OPTIMUM
    assert _after_removal_is_dag(example, removed)

def test_self_loops_are_counted():
    graph = DirectedGraph.from_edges(2, [(0, 0), (0, 1), (1, 0)])
    size, removed = brute_force_min_removal(graph)
    assert size == 2
    assert (0, 0) in removed

def test_complete_digraph_uses_ordering_search():
    # 30 edges on 6 nodes: every ordering keeps exactly one edge of each pair.
    edges = [(u, v) for u in range(6) for v in range(6) if u != v]
    size, removed = brute_force_min_removal(DirectedGraph.from_edges(6, edges))
    assert size == 15
    assert len(removed) == 15

def test_too_large_instance():
    edges = [(i, i + 1) for i in range(11)] + [(11, 0)] + [(i, i + 2) for i in range(10)]
    with pytest.raises(InstanceTooLargeError):
        brute_force_min_removal(DirectedGraph.from_edges(12, edges))

@pytest.mark.parametrize("seed", range(30))
def test_subset_and_ordering_searches_agree(seed):
    graph = random_graph(seed, max_nodes=7, low=0.15, high=0.35)
    by_subset, removed = _subset_search(graph)
    by_ordering, _ = _ordering_search(graph)
    assert by_subset == by_ordering
    assert _after_removal_is_dag(graph, removed)

def test_brute_force_cycles_on_example(example):
    assert brute_force_cycles(example) == example_cycles()

# Synthetic benchmark

def test_no_planted_cycles_is_acyclic():
    bench = generate(SyntheticSpec(nodes=50, edge_probability=0.1, planted_cycles=0, seed=3))
    assert nx.is_directed_acyclic_graph(bench.graph.nx)
    assert bench.planted == []

def test_single_two_cycle_on_empty_base():
    bench = generate(SyntheticSpec(nodes=2, edge_probability=0.0, planted_cycles=1, cycle_length=(2, 2)))
    assert bench.graph.edges() == [(0, 1), (1, 0)]

def test_full_nesting_shares_nodes():
    spec = SyntheticSpec(nodes=100, edge_probability=0.0, planted_cycles=5, cycle_length=(3, 6), nesting=1.0, seed=2)
    bench = generate(spec)
    union = set().union(*(c.nodes for c in bench.planted))
    assert len(union) < sum(len(c) for c in bench.planted)

def test_planted_cycles_are_in_graph():
    bench = generate(SyntheticSpec(nodes=120, planted_cycles=15, seed=5))
    for cycle in bench.planted:
        assert all(bench.graph.has_edge(*e) for e in cycle.edges)

def test_generation_is_deterministic():
    spec = SyntheticSpec(nodes=120, planted_cycles=15, seed=8)
    assert generate(spec).graph == generate(spec).graph

def test_iri_naming():
    bench = generate(SyntheticSpec(nodes=3, planted_cycles=0))
    assert bench.iri(2) == f"{SYNTHETIC_NAMESPACE}C2"

@pytest.mark.parametrize("values", [
    {"nodes": 3, "cycle_length": (2, 5)},
    {"cycle_length": (1, 3)},
    {"cycle_length": (5, 3)},
    {"edge_probability": 1.5},
    {"nesting": -0.1},
])
def test_infeasible_specs(values):
    with pytest.raises(InfeasibleSpecError):
        generate(SyntheticSpec(**values))

# Sweep

@pytest.fixture
def small_bench():
    spec = SyntheticSpec(nodes=60, edge_probability=0.03, planted_cycles=10, cycle_length=(2, 5), nesting=0.6, seed=1)
    return generate(spec).graph

def test_sweep_row_count(small_bench):
    rows = sweep(small_bench, [20, 30, 40, 50, 60], 5, ResolverConfig(seed=0))
    assert len(rows) == 25
    assert [(r.B, r.run) for r in rows] == [(b, run) for b in [20, 30, 40, 50, 60] for run in range(5)]
    assert all(r.status == "acyclic" for r in rows)
    sink = io.StringIO()
    write_csv(rows, sink)
    lines = sink.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + 25 + 5

def test_sweep_on_acyclic_graph():
    rows = sweep(DirectedGraph.from_edges(3, [(0, 1), (1, 2)]), [20], 1, ResolverConfig())
    assert len(rows) == 1
    assert rows[0].removed == 0
    assert rows[0].iterations == 0

def test_sweep_leaves_input_untouched(small_bench):
    before = small_bench.copy()
    sweep(small_bench, [20], 2, ResolverConfig())
    assert small_bench == before

def test_runs_share_seeds_across_bounds(small_bench):
    rows = sweep(small_bench, [20, 40], 3, ResolverConfig(seed=10))
    assert [r.seed for r in rows] == [10, 11, 12, 10, 11, 12]

def test_repeated_sweep_is_byte_identical(small_bench):
    outputs = []
    for _ in range(2):
        sink = io.StringIO()
        write_csv(sweep(small_bench, [20, 40], 2, ResolverConfig(seed=3)), sink)
        outputs.append(sink.getvalue())
    assert outputs[0] == outputs[1]

def test_summary_rows():
    rows = [SweepRow(20, 0, 0, 4, 2, 0.0, "acyclic"), SweepRow(20, 1, 1, 6, 3, 0.0, "timeout")]
    summary = summarize(rows)
    assert summary == [{
        "B": "20", "run": "mean/std", "seed": "",
        "removed": "5.000/1.414", "iterations": "2.500/0.707", "wall_ms": "0.000/0.000",
        "status": "timeout 1/2",
    }]

def test_single_run_has_zero_std():
    summary = summarize([SweepRow(60, 0, 0, 7, 1, 0.0, "acyclic")])
    assert summary[0]["removed"] == "7.000/0.000"

def test_trend():
    rows = [SweepRow(b, 0, 0, removed, 1, 0.0, "acyclic") for b, removed in [(20, 9), (30, 7), (40, 7), (50, 4)]]
    assert trend(rows) < 0
    flat = [SweepRow(b, 0, 0, 3, 1, 0.0, "acyclic") for b in (20, 30, 40)]
    assert trend(flat) == 0.0

@pytest.mark.slow
def test_nested_benchmark_trend_does_not_increase():
    spec = SyntheticSpec(nodes=500, edge_probability=0.002, planted_cycles=60, cycle_length=(2, 8), nesting=0.6, seed=0)
    graph = generate(spec).graph
    rows = sweep(graph, [20, 30, 40, 50, 60], 5, ResolverConfig(seed=0, cycle_cap=5000))
    assert all(r.status == "acyclic" for r in rows)
    means = mean_removals(rows)
    assert trend(rows) <= 0, means
