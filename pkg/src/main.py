import argparse
import json
import logging
import os
import signal
import sys
import threading
from dataclasses import dataclass, field
from typing import List, Optional

from src.config.config_loader import build_resolver_config, build_synthetic_spec, load_config
from src.database.db_manager import connect, save_removals, save_sweep_rows
from src.errors import CyclicGraphError, SubcycleError
from src.evaluation.sweep import sweep, trend, write_csv
from src.evaluation.synthetic import generate
from src.graph.digraph import DirectedGraph
from src.graph.preprocess import cycle_profile, prune_equivalent, remove_reflexive
from src.graph.search import is_acyclic, superclasses
from src.publish.writer import build_report, publish, sidecar_path
from src.rdf.equivalence import load_equivalences
from src.rdf.iri_table import IriTable
from src.rdf.subsumption import ExtractionStats, extract_subsumption_graph
from src.rdf.terms import OWL_EQUIVALENTCLASS, OWL_SAMEAS, RDFS_SUBCLASSOF, expand_predicate, ntriples_line
from src.readers.ntriples_reader import NTriplesReader
from src.resolver.resolver import ResolutionStatus, ResolverConfig, resolve

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_TIMEOUT = 2
EXIT_CYCLIC = 3
EXIT_CLOSURE_CYCLIC = 4
EXIT_UNKNOWN_IRI = 5


def configure_logging(debug=False):
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler('subcycle.log'),
            logging.StreamHandler()
        ]
    )
    logging.getLogger().setLevel(logging.DEBUG if debug else logging.INFO)


@dataclass
class CliConfig:
    command: str
    input: Optional[str] = None
    predicate: str = RDFS_SUBCLASSOF
    sameas: Optional[str] = None
    equiv_from_input: bool = True
    out_clean: Optional[str] = None
    out_removed: Optional[str] = None
    out_report: Optional[str] = None
    results_db: Optional[str] = None
    max_line_length: int = 1 << 20
    resolver: ResolverConfig = field(default_factory=ResolverConfig)

    def validate(self):
        if self.input is not None and not os.path.exists(self.input):
            raise SubcycleError(f"input file not found: {self.input}")
        outputs = [p for p in (self.out_clean, self.out_removed, self.out_report) if p]
        if self.out_removed:
            outputs.append(sidecar_path(self.out_removed))
        resolved = [os.path.abspath(p) for p in outputs]
        if len(set(resolved)) != len(resolved):
            raise SubcycleError(f"output paths must be distinct, got {outputs}")
        if self.input and os.path.abspath(self.input) in resolved:
            raise SubcycleError("an output path may not overwrite the input")


@dataclass
class LoadedGraph:
    graph: DirectedGraph
    table: IriTable
    reader: NTriplesReader
    extraction: ExtractionStats
    equivalence_triples: List = field(default_factory=list)


def load_graph(path: str, predicate: str, max_line_length: int, keep_equivalences: bool = False) -> LoadedGraph:
    """Single pass over the input: subsumption edges go into the graph, equivalence triples are kept aside"""
    predicates = [predicate] + ([OWL_EQUIVALENTCLASS, OWL_SAMEAS] if keep_equivalences else [])
    reader = NTriplesReader({"max_line_length": max_line_length}, predicates=predicates)
    table = IriTable()
    extraction = ExtractionStats()
    aside = []

    def subsumptions():
        for triple in reader.read_path(path):
            if triple.predicate == predicate:
                yield triple
            elif keep_equivalences:
                aside.append(triple)

    graph = extract_subsumption_graph(subsumptions(), predicate, table, extraction)
    return LoadedGraph(graph, table, reader, extraction, aside)


def _default_output(path: str, suffix: str) -> str:
    stem = path[:-3] if path.endswith(".gz") else path
    return f"{os.path.splitext(stem)[0]}.{suffix}"


def _format_cycle(cycle, table: IriTable) -> str:
    names = [table.resolve(n) for n in cycle.nodes]
    return " -> ".join(names + names[:1])


def cmd_resolve(cfg: CliConfig) -> int:
    """
    Parse, pre-process and resolve one hierarchy, then publish the clean
    graph, the removed edges and the report. Partial outputs are written on
    timeout or interrupt.
    """
    loaded = load_graph(cfg.input, cfg.predicate, cfg.max_line_length, keep_equivalences=cfg.equiv_from_input)
    graph, table = loaded.graph, loaded.table
    eq = load_equivalences(loaded.equivalence_triples if cfg.equiv_from_input else None,
                           cfg.sameas, table, {"max_line_length": cfg.max_line_length})
    preprocessing = remove_reflexive(graph) + prune_equivalent(graph, eq)

    stop = threading.Event()
    previous = signal.signal(signal.SIGINT, lambda signum, frame: stop.set())
    try:
        report = resolve(graph, cfg.resolver, stop=stop)
    finally:
        signal.signal(signal.SIGINT, previous)
    report.removals[:0] = preprocessing

    extras = {
        "input": {
            "path": cfg.input,
            "predicate": cfg.predicate,
            "reader": loaded.reader.stats.as_dict(),
            "extraction": loaded.extraction.as_dict(),
            "nodes": len(table),
        },
        "equivalences": {
            "explicit_pairs": len(eq.explicit_pairs),
            "ignored_pairs": eq.ignored_pairs,
            "provenance": eq.provenance,
        },
    }
    publish(graph, report, table, cfg.predicate, cfg.out_clean, cfg.out_removed, cfg.out_report, extras)

    if cfg.results_db:
        Session = connect(cfg.results_db)
        label = f"{os.path.basename(cfg.input)}:seed={report.seed}"
        save_removals(Session, label, build_report(report, table)["removals"])

    if report.status is ResolutionStatus.TIMEOUT:
        logger.warning("cmd_resolve: Timed out, partial outputs written")
        return EXIT_TIMEOUT
    return EXIT_OK


def cmd_check(cfg: CliConfig) -> int:
    loaded = load_graph(cfg.input, cfg.predicate, cfg.max_line_length)
    check = is_acyclic(loaded.graph)
    if check.acyclic:
        print("acyclic")
        return EXIT_OK
    print("cyclic")
    print(_format_cycle(check.witness, loaded.table))
    return EXIT_CYCLIC


def cmd_closure(cfg: CliConfig, iri: str) -> int:
    loaded = load_graph(cfg.input, cfg.predicate, cfg.max_line_length)
    graph, table = loaded.graph, loaded.table
    node = table.lookup(expand_predicate(iri))
    try:
        if node is None:
            check = is_acyclic(graph)
            if not check.acyclic:
                raise CyclicGraphError(f"graph has cycle {_format_cycle(check.witness, table)}", check.witness)
            print(f"unknown IRI: {iri}", file=sys.stderr)
            return EXIT_UNKNOWN_IRI
        found = superclasses(graph, node)
    except CyclicGraphError as e:
        witness = _format_cycle(e.witness, table) if e.witness is not None else str(e)
        print(f"refusing closure on cyclic hierarchy, witness: {witness}", file=sys.stderr)
        return EXIT_CLOSURE_CYCLIC
    for name in sorted(table.resolve(n) for n in found):
        print(name)
    return EXIT_OK


def cmd_sweep(cfg: CliConfig, config, args) -> int:
    if cfg.input:
        loaded = load_graph(cfg.input, cfg.predicate, cfg.max_line_length)
        graph = loaded.graph
        remove_reflexive(graph)
    else:
        graph = generate(build_synthetic_spec(config)).graph
    bounds = args.bounds or config["sweep"]["bounds"]
    runs = args.runs if args.runs is not None else config["sweep"]["runs"]
    workers = args.workers if args.workers is not None else config["sweep"]["workers"]
    rows = sweep(graph, bounds, runs, cfg.resolver, workers=workers)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as sink:
            write_csv(rows, sink)
        logger.info(f"cmd_sweep: Wrote {len(rows)} rows to {args.out}")
    else:
        write_csv(rows, sys.stdout)
    logger.info(f"cmd_sweep: Spearman correlation between B and mean removals: {trend(rows):.3f}")
    if cfg.results_db:
        save_sweep_rows(connect(cfg.results_db), args.experiment, rows)
    return EXIT_OK


def cmd_generate(config, args) -> int:
    overrides = {
        "nodes": args.nodes,
        "edge_probability": args.edge_probability,
        "planted_cycles": args.planted,
        "nesting": args.nesting,
        "seed": args.seed,
    }
    if args.min_length is not None or args.max_length is not None:
        low, high = config["sweep"]["synthetic"]["cycle_length"]
        overrides["cycle_length"] = (args.min_length or low, args.max_length or high)
    benchmark = generate(build_synthetic_spec(config, overrides))
    with open(args.out, "w", encoding="utf-8") as sink:
        for source, target in benchmark.graph.edges_in_insertion_order():
            sink.write(ntriples_line(benchmark.iri(source), RDFS_SUBCLASSOF, benchmark.iri(target)))
    if args.out_planted:
        with open(args.out_planted, "w", encoding="utf-8") as sink:
            for cycle in benchmark.planted:
                sink.write("\t".join(benchmark.iri(n) for n in cycle.nodes) + "\n")
    logger.info(f"cmd_generate: Wrote {benchmark.graph.edge_count} edges to {args.out}")
    return EXIT_OK


def cmd_stats(cfg: CliConfig) -> int:
    loaded = load_graph(cfg.input, cfg.predicate, cfg.max_line_length)
    profile = cycle_profile(loaded.graph)
    document = {
        "nodes": loaded.graph.node_count,
        "edges": loaded.graph.edge_count,
        "reader": loaded.reader.stats.as_dict(),
        "profile": vars(profile),
    }
    print(json.dumps(document, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subcycle", description="Resolve cycles in RDF subsumption hierarchies")
    parser.add_argument("--config", default=None, help="JSON configuration file (default config/config.json)")
    parser.add_argument("--debug", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    def graph_input(sub, required=True):
        sub.add_argument("--input", required=required, help="N-Triples file, optionally gzipped")
        sub.add_argument("--predicate", default=None, help="subsumption predicate IRI or prefixed name")

    def resolver_flags(sub):
        sub.add_argument("--bound", type=int, default=None, help="soft bound B on the neighborhood size")
        sub.add_argument("--min-cycles", type=int, default=None)
        sub.add_argument("--cycle-cap", type=int, default=None)
        sub.add_argument("--timeout", type=float, default=None, help="seconds")
        sub.add_argument("--seed", type=int, default=None, help="falls back to SUBCYCLE_SEED")
        sub.add_argument("--solver", choices=["bnb", "rc2"], default=None)
        sub.add_argument("--timing", action="store_true", default=None, help="record wall-clock times")
        sub.add_argument("--results-db", default=None, help="SQLite file that collects results")

    resolve_cmd = commands.add_parser("resolve", help="remove a minimal set of edges until the hierarchy is acyclic")
    graph_input(resolve_cmd)
    resolver_flags(resolve_cmd)
    resolve_cmd.add_argument("--sameas", default=None, help="owl:sameAs pairs as N-Triples or TSV")
    resolve_cmd.add_argument("--equiv-from-input", action=argparse.BooleanOptionalAction, default=None)
    resolve_cmd.add_argument("--out-clean", default=None)
    resolve_cmd.add_argument("--out-removed", default=None)
    resolve_cmd.add_argument("--out-report", default=None)
    resolve_cmd.add_argument("--wcnf-dir", default=None, help="dump every MAXSAT instance as WCNF")

    check_cmd = commands.add_parser("check", help="report whether the hierarchy is acyclic")
    graph_input(check_cmd)

    closure_cmd = commands.add_parser("closure", help="print every superclass of a class")
    graph_input(closure_cmd)
    closure_cmd.add_argument("iri")

    sweep_cmd = commands.add_parser("sweep", help="resolve repeatedly over several soft bounds")
    graph_input(sweep_cmd, required=False)
    resolver_flags(sweep_cmd)
    sweep_cmd.add_argument("--B", "--bounds", dest="bounds", type=int, nargs="+", default=None)
    sweep_cmd.add_argument("--runs", type=int, default=None)
    sweep_cmd.add_argument("--workers", type=int, default=None)
    sweep_cmd.add_argument("--out", default=None, help="CSV file (default stdout)")
    sweep_cmd.add_argument("--experiment", default="sweep", help="label of the rows in the results database")

    generate_cmd = commands.add_parser("generate", help="write a synthetic nested-cycle benchmark")
    generate_cmd.add_argument("--out", required=True)
    generate_cmd.add_argument("--out-planted", default=None, help="TSV of planted cycles")
    generate_cmd.add_argument("--nodes", type=int, default=None)
    generate_cmd.add_argument("--edge-probability", type=float, default=None)
    generate_cmd.add_argument("--planted", type=int, default=None)
    generate_cmd.add_argument("--min-length", type=int, default=None)
    generate_cmd.add_argument("--max-length", type=int, default=None)
    generate_cmd.add_argument("--nesting", type=float, default=None)
    generate_cmd.add_argument("--seed", type=int, default=None)

    stats_cmd = commands.add_parser("stats", help="print the cycle profile of the hierarchy")
    graph_input(stats_cmd)
    return parser


def build_cli_config(args, config) -> CliConfig:
    ingest = config["ingest"]
    predicate = expand_predicate(getattr(args, "predicate", None) or ingest["predicate"])
    config["ingest"]["predicate"] = predicate
    resolver = None
    if args.command in ("resolve", "sweep"):
        resolver = build_resolver_config(config, {
            "bound": args.bound,
            "min_cycles": args.min_cycles,
            "cycle_cap": args.cycle_cap,
            "timeout_seconds": args.timeout,
            "seed": args.seed,
            "solver": args.solver,
            "record_timing": args.timing,
            "wcnf_dir": getattr(args, "wcnf_dir", None),
        })
    cfg = CliConfig(
        command=args.command,
        input=getattr(args, "input", None),
        predicate=predicate,
        sameas=getattr(args, "sameas", None),
        max_line_length=int(ingest["max_line_length"]),
        results_db=getattr(args, "results_db", None) or config["database"].get("url"),
    )
    if resolver is not None:
        cfg.resolver = resolver
    if args.command == "resolve":
        equiv = args.equiv_from_input
        cfg.equiv_from_input = ingest["equiv_from_input"] if equiv is None else equiv
        cfg.out_clean = args.out_clean or _default_output(cfg.input, "clean.nt")
        cfg.out_removed = args.out_removed or _default_output(cfg.input, "removed.nt")
        cfg.out_report = args.out_report or _default_output(cfg.input, "report.json")
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.debug)
    logger.info(f"main: Starting {args.command}")
    try:
        config = load_config(args.config)
        if args.command == "generate":
            return cmd_generate(config, args)
        cfg = build_cli_config(args, config)
        if args.command == "resolve":
            return cmd_resolve(cfg)
        if args.command == "check":
            return cmd_check(cfg)
        if args.command == "closure":
            return cmd_closure(cfg, args.iri)
        if args.command == "sweep":
            return cmd_sweep(cfg, config, args)
        return cmd_stats(cfg)
    except (SubcycleError, OSError, ValueError) as e:
        logger.error(f"main: Failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
