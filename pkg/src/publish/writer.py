import json
import logging
import os
from collections import Counter
from typing import Dict, Iterable, Optional, TextIO

from src.graph.digraph import DirectedGraph, RemovedEdge
from src.rdf.iri_table import IriTable
from src.rdf.terms import namespace_of, ntriples_line
from src.resolver.resolver import ResolutionReport

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def write_clean_graph(graph: DirectedGraph, table: IriTable, predicate: str, sink: TextIO) -> int:
    """Remaining edges as N-Triples, in the order they first appeared in the input"""
    written = 0
    for source, target in graph.edges_in_insertion_order():
        if graph.has_edge(source, target):
            sink.write(ntriples_line(table.resolve(source), predicate, table.resolve(target)))
            written += 1
    return written


def write_removed_edges(removals: Iterable[RemovedEdge], table: IriTable, predicate: str, sink: TextIO) -> int:
    written = 0
    for removal in removals:
        sink.write(ntriples_line(table.resolve(removal.edge.source), predicate, table.resolve(removal.edge.target)))
        written += 1
    return written


def write_removal_reasons(removals: Iterable[RemovedEdge], table: IriTable, sink: TextIO) -> None:
    """TSV sidecar: subject, object, reason and iteration (empty for pre-processing removals)"""
    for removal in removals:
        iteration = "" if removal.iteration is None else str(removal.iteration)
        sink.write(
            f"{table.resolve(removal.edge.source)}\t{table.resolve(removal.edge.target)}\t"
            f"{removal.reason.value}\t{iteration}\n"
        )


def sidecar_path(removed_path: str) -> str:
    return f"{os.path.splitext(removed_path)[0]}.reasons.tsv"


def namespace_breakdown(removals: Iterable[RemovedEdge], table: IriTable) -> Dict[str, Dict[str, int]]:
    """Removed relations per reason, grouped by the namespace of their subject"""
    breakdown: Dict[str, Counter] = {}
    for removal in removals:
        namespace = namespace_of(table.resolve(removal.edge.source))
        breakdown.setdefault(removal.reason.value, Counter())[namespace] += 1
    return {reason: dict(sorted(counts.items())) for reason, counts in sorted(breakdown.items())}


def build_report(report: ResolutionReport, table: IriTable, extras: Optional[dict] = None) -> dict:
    """
    JSON-ready view of a resolution run.

    Parameters:
        report (ResolutionReport): removals and iteration stats of the run.
        table (IriTable): maps node ids back to IRIs.
        extras (dict): additional sections such as ingest counters and
            equivalence provenance, merged in at top level.

    Returns:
        dict: the report document, schema_version 1.
    """
    counts = Counter(r.reason.value for r in report.removals)
    document = {
        "schema_version": SCHEMA_VERSION,
        "status": report.status.value,
        "seed": report.seed,
        "config": report.config.as_dict(),
        "removed_total": len(report.removals),
        "removed_by_reason": dict(sorted(counts.items())),
        "namespaces": namespace_breakdown(report.removals, table),
        "iterations": [stat.as_dict() for stat in report.iterations],
        "removals": [
            {
                "subject": table.resolve(r.edge.source),
                "object": table.resolve(r.edge.target),
                "reason": r.reason.value,
                "iteration": r.iteration,
            }
            for r in report.removals
        ],
    }
    document.update(extras or {})
    return document


def write_report(document: dict, sink: TextIO) -> None:
    json.dump(document, sink, indent=2, sort_keys=True)
    sink.write("\n")


def publish(graph: DirectedGraph, report: ResolutionReport, table: IriTable, predicate: str,
            out_clean: str, out_removed: str, out_report: str, extras: Optional[dict] = None) -> None:
    """
    Write the cleaned hierarchy, the removed edges with their reason sidecar
    and the JSON report. Called for timed-out runs too.
    """
    logger.info(f"publish: Writing {out_clean}, {out_removed} and {out_report}")
    try:
        with open(out_clean, "w", encoding="utf-8") as sink:
            kept = write_clean_graph(graph, table, predicate, sink)
        with open(out_removed, "w", encoding="utf-8") as sink:
            removed = write_removed_edges(report.removals, table, predicate, sink)
        with open(sidecar_path(out_removed), "w", encoding="utf-8") as sink:
            write_removal_reasons(report.removals, table, sink)
        with open(out_report, "w", encoding="utf-8") as sink:
            write_report(build_report(report, table, extras), sink)
    except OSError as e:
        logger.error(f"publish: Failed: {e}")
        raise
    logger.info(f"publish: {kept} edges kept, {removed} removed")
