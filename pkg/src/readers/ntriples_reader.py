import logging
from typing import BinaryIO, Iterable, Iterator, List, Optional

from rdflib import BNode, Literal
from rdflib.exceptions import ParserError
from rdflib.plugins.parsers.ntriples import W3CNTriplesParser

from src.rdf.terms import Triple, term_key

from .base_reader import DEFAULT_MAX_LINE_LENGTH, BaseReader, ReaderStats

logger = logging.getLogger(__name__)


class _LabelPreservingBNodes(dict):
    """bnode context that keeps the document's own blank node labels instead of minting fresh ids"""

    def get(self, label, default=None):
        return self.setdefault(label, BNode(label))


class _Collector:
    def __init__(self):
        self.pending: List[tuple] = []

    def triple(self, s, p, o):
        self.pending.append((s, p, o))


class NTriplesReader(BaseReader):
    """
    Line-oriented N-Triples reader. Each statement is parsed on its own with
    the rdflib N-Triples grammar so a malformed line costs only that line.
    """

    def __init__(self, config=None, predicates: Optional[Iterable[str]] = None):
        super().__init__(config)
        self.predicates = sorted(set(predicates)) if predicates else None
        self._collector = _Collector()
        self._parser = W3CNTriplesParser(sink=self._collector)
        self._bnodes = _LabelPreservingBNodes()

    def _wanted(self, line: str) -> bool:
        return self.predicates is None or any(p in line for p in self.predicates)

    def read(self, stream: BinaryIO) -> Iterator[Triple]:
        for line in self.lines(stream):
            if not self._wanted(line):
                self.stats.filtered += 1
                continue
            self._collector.pending.clear()
            try:
                self._parser.parsestring(line, bnode_context=self._bnodes)
            except (ParserError, ValueError) as e:
                self.stats.malformed += 1
                logger.debug(f"NTriplesReader.read: Skipping malformed line {self.stats.lines}: {e}")
                continue
            for s, p, o in self._collector.pending:
                self.stats.triples += 1
                yield Triple(term_key(s), term_key(p), term_key(o), isinstance(o, Literal))
        if self.stats.malformed or self.stats.overlong:
            logger.warning(
                f"NTriplesReader.read: Skipped {self.stats.malformed} malformed and "
                f"{self.stats.overlong} overlong lines"
            )


def parse_ntriples(stream: BinaryIO, max_line_length: int = DEFAULT_MAX_LINE_LENGTH,
                   predicates: Optional[Iterable[str]] = None,
                   stats: Optional[ReaderStats] = None) -> Iterator[Triple]:
    """Yield the well-formed triples of an N-Triples byte stream in file order"""
    reader = NTriplesReader({"max_line_length": max_line_length}, predicates=predicates)
    if stats is not None:
        reader.stats = stats
    return reader.read(stream)
