import logging
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, Optional

from src.graph.digraph import DirectedGraph, Edge
from src.rdf.iri_table import IriTable
from src.rdf.terms import RDFS_SUBCLASSOF, Triple

logger = logging.getLogger(__name__)


@dataclass
class ExtractionStats:
    matched: int = 0
    duplicates: int = 0
    literal_objects: int = 0

    def as_dict(self):
        return asdict(self)


def extract_subsumption_graph(triples: Iterable[Triple], predicate: str = RDFS_SUBCLASSOF,
                              table: Optional[IriTable] = None,
                              stats: Optional[ExtractionStats] = None) -> DirectedGraph:
    """
    Build G_cat: one edge s -> o per distinct (s, predicate, o) triple.
    Literal objects are counted and skipped.
    """
    table = table if table is not None else IriTable()
    stats = stats if stats is not None else ExtractionStats()
    logger.info(f"extract_subsumption_graph: Collecting {predicate} edges")
    edges: Dict[Edge, None] = {}
    for triple in triples:
        if triple.predicate != predicate:
            continue
        stats.matched += 1
        if triple.object_is_literal:
            stats.literal_objects += 1
            continue
        edge = Edge(table.intern(triple.subject), table.intern(triple.object))
        if edge in edges:
            stats.duplicates += 1
            continue
        edges[edge] = None
    graph = DirectedGraph.from_edges(len(table), edges)
    logger.info(
        f"extract_subsumption_graph: {graph.edge_count} edges over {graph.node_count} nodes "
        f"({stats.duplicates} duplicates, {stats.literal_objects} literal objects skipped)"
    )
    return graph
