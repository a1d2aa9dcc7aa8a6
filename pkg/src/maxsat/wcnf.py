import logging
from typing import Dict, List, Optional, TextIO, Tuple

from src.errors import WcnfParseError
from src.graph.digraph import Edge
from src.maxsat.encoding import EdgeVar, MaxSatInstance

logger = logging.getLogger(__name__)


def export_wcnf(inst: MaxSatInstance, sink: TextIO, edge_comments: bool = False) -> None:
    """
    Classic DIMACS WCNF: `p wcnf <nvars> <nclauses> <top>`, hard clauses
    weighted top (total soft weight + 1), then the unit soft clauses.
    """
    top = inst.top
    if edge_comments:
        for var in inst.vars:
            if var.edge is not None:
                sink.write(f"c edge {var.id} {var.edge.source} {var.edge.target}\n")
    sink.write(f"p wcnf {inst.var_count} {len(inst.hard_clauses) + len(inst.soft_clauses)} {top}\n")
    for clause in inst.hard_clauses:
        sink.write(f"{top} {' '.join(str(lit) for lit in clause)} 0\n")
    for lit, weight in inst.soft_clauses:
        sink.write(f"{weight} {lit} 0\n")


def import_wcnf(source: TextIO) -> MaxSatInstance:
    """Inverse of export_wcnf; edge comments, when present, restore the edge of each variable"""
    header: Optional[Tuple[int, int, int]] = None
    edges: Dict[int, Edge] = {}
    hard: List[Tuple[int, ...]] = []
    soft: List[Tuple[int, int]] = []
    for number, line in enumerate(source, start=1):
        fields = line.split()
        if not fields:
            continue
        if fields[0] == "c":
            if len(fields) == 5 and fields[1] == "edge":
                try:
                    edges[int(fields[2])] = Edge(int(fields[3]), int(fields[4]))
                except ValueError:
                    raise WcnfParseError(f"bad edge comment {line.strip()!r}", number)
            continue
        if fields[0] == "p":
            if header is not None:
                raise WcnfParseError("duplicate problem line", number)
            if len(fields) != 5 or fields[1] != "wcnf":
                raise WcnfParseError(f"expected 'p wcnf <nvars> <nclauses> <top>', got {line.strip()!r}", number)
            try:
                header = (int(fields[2]), int(fields[3]), int(fields[4]))
            except ValueError:
                raise WcnfParseError(f"non-integer header field in {line.strip()!r}", number)
            continue
        if header is None:
            raise WcnfParseError("clause before problem line", number)
        try:
            numbers = [int(x) for x in fields]
        except ValueError:
            raise WcnfParseError(f"non-integer token in {line.strip()!r}", number)
        if len(numbers) < 3 or numbers[-1] != 0:
            raise WcnfParseError("clause must have a weight, at least one literal and a terminating 0", number)
        weight, lits = numbers[0], tuple(numbers[1:-1])
        if weight < 1 or 0 in lits or any(abs(lit) > header[0] for lit in lits):
            raise WcnfParseError(f"invalid weight or literal in {line.strip()!r}", number)
        if weight >= header[2]:
            hard.append(lits)
        elif len(lits) == 1 and lits[0] > 0:
            soft.append((lits[0], weight))
        else:
            raise WcnfParseError("soft clauses must be unit positive literals", number)
    if header is None:
        raise WcnfParseError("missing problem line", 0)
    nvars, nclauses, _ = header
    if len(hard) + len(soft) != nclauses:
        raise WcnfParseError(f"header declares {nclauses} clauses, found {len(hard) + len(soft)}", number)
    inst = MaxSatInstance(
        vars=[EdgeVar(var, edges.get(var)) for var in range(1, nvars + 1)],
        hard_clauses=hard,
        soft_clauses=soft,
    )
    logger.debug(f"import_wcnf: {nvars} variables, {len(hard)} hard and {len(soft)} soft clauses")
    return inst
