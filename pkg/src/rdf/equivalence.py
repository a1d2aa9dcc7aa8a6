import logging
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from networkx.utils import UnionFind

from src.errors import IngestError
from src.rdf.iri_table import IriTable
from src.rdf.terms import OWL_EQUIVALENTCLASS, OWL_SAMEAS, Triple
from src.readers.tsv_reader import read_pair_file

logger = logging.getLogger(__name__)


@dataclass
class EquivalenceInput:
    explicit_pairs: Set[Tuple[int, int]] = field(default_factory=set)
    sameas_partition: UnionFind = field(default_factory=UnionFind)
    ignored_pairs: int = 0
    provenance: Dict[str, Dict[str, int]] = field(default_factory=dict)

    def explicitly_equivalent(self, u: int, v: int) -> bool:
        return (u, v) in self.explicit_pairs or (v, u) in self.explicit_pairs

    def same_identity(self, u: int, v: int) -> bool:
        parents = self.sameas_partition.parents
        # lookups must not add singletons to the partition
        if u not in parents or v not in parents:
            return False
        return self.sameas_partition[u] == self.sameas_partition[v]

    def find(self, node: int) -> int:
        return self.sameas_partition[node] if node in self.sameas_partition.parents else node


@dataclass
class _SameAsPairs:
    """sameAs pairs over IRI strings, so identity paths through IRIs outside the graph survive"""
    partition: UnionFind = field(default_factory=UnionFind)
    subjects_by_source: Dict[str, List[str]] = field(default_factory=lambda: defaultdict(list))


def _counts(eq: EquivalenceInput, source: str) -> Dict[str, int]:
    return eq.provenance.setdefault(source, {"equivalent_class": 0, "same_as": 0, "ignored": 0})


def _harvest(eq: EquivalenceInput, pending: _SameAsPairs, triples: Iterable[Triple], table: IriTable,
             source: str) -> None:
    counts = _counts(eq, source)
    for triple in triples:
        if triple.predicate not in (OWL_EQUIVALENTCLASS, OWL_SAMEAS) or triple.object_is_literal:
            continue
        if triple.predicate == OWL_SAMEAS:
            pending.partition.union(triple.subject, triple.object)
            pending.subjects_by_source[source].append(triple.subject)
            continue
        u, v = table.lookup(triple.subject), table.lookup(triple.object)
        if u is None or v is None:
            eq.ignored_pairs += 1
            counts["ignored"] += 1
            continue
        eq.explicit_pairs.add((u, v))
        counts["equivalent_class"] += 1


def _project(eq: EquivalenceInput, pending: _SameAsPairs, table: IriTable) -> None:
    # identity classes restricted to interned nodes; a class touching none of them is ignored
    touching: Set[str] = set()
    for members in pending.partition.to_sets():
        nodes = sorted(n for n in (table.lookup(iri) for iri in members) if n is not None)
        if not nodes:
            continue
        touching.add(pending.partition[next(iter(members))])
        for node in nodes:
            eq.sameas_partition.union(nodes[0], node)
    for source, subjects in pending.subjects_by_source.items():
        counts = _counts(eq, source)
        for subject in subjects:
            if pending.partition[subject] in touching:
                counts["same_as"] += 1
            else:
                counts["ignored"] += 1
                eq.ignored_pairs += 1


def load_equivalences(triples: Optional[Iterable[Triple]], sameas_file=None, table: Optional[IriTable] = None,
                      config=None) -> EquivalenceInput:
    """
    Collect owl:equivalentClass pairs and the owl:sameAs identity closure,
    projected onto nodes already interned in table. The closure is taken over
    every IRI first, so identity paths through IRIs that are not classes of
    the graph still join the classes at their ends. equivalentClass pairs
    naming unknown IRIs, and sameAs pairs whose identity class holds no known
    IRI, are counted and ignored. Provenance records what came from the input
    scan and what came from the side file.
    """
    table = table if table is not None else IriTable()
    eq = EquivalenceInput()
    pending = _SameAsPairs()
    if triples is not None:
        _harvest(eq, pending, triples, table, "input")
    if sameas_file is not None:
        if not os.path.exists(sameas_file):
            logger.error(f"load_equivalences: Failed: sameAs file {sameas_file} not found")
            raise IngestError(f"sameAs file not found: {sameas_file}")
        _harvest(eq, pending, read_pair_file(sameas_file, config), table, "sameas_file")
    _project(eq, pending, table)
    logger.info(
        f"load_equivalences: {len(eq.explicit_pairs)} equivalentClass pairs, "
        f"{len(eq.sameas_partition.parents)} nodes in sameAs classes, {eq.ignored_pairs} pairs ignored"
    )
    return eq
