import logging
import os
from typing import BinaryIO, Dict, Iterator

from src.rdf.terms import OWL_EQUIVALENTCLASS, OWL_SAMEAS, Triple

from .base_reader import BaseReader
from .ntriples_reader import NTriplesReader

logger = logging.getLogger(__name__)

TSV_EXTENSIONS = (".tsv", ".txt", ".tab")


def _strip_brackets(field: str) -> str:
    field = field.strip()
    if field.startswith("<") and field.endswith(">"):
        return field[1:-1]
    return field


def _looks_like_iri(field: str) -> bool:
    return ":" in field


class TsvPairReader(BaseReader):
    """
    Identity pairs in two tab-separated columns. Rows are either `iri<TAB>iri`
    or `id<TAB>iri`, where every IRI sharing an id belongs to one identity
    class. Each row becomes an owl:sameAs triple.
    """

    def read(self, stream: BinaryIO) -> Iterator[Triple]:
        class_members: Dict[str, str] = {}
        for line in self.lines(stream):
            fields = line.split("\t")
            if len(fields) < 2:
                self.stats.malformed += 1
                continue
            left, right = _strip_brackets(fields[0]), _strip_brackets(fields[1])
            if not left or not right:
                self.stats.malformed += 1
                continue
            if _looks_like_iri(left):
                self.stats.triples += 1
                yield Triple(left, OWL_SAMEAS, right)
                continue
            anchor = class_members.setdefault(left, right)
            if anchor != right:
                self.stats.triples += 1
                yield Triple(anchor, OWL_SAMEAS, right)


def reader_for(path, config=None) -> BaseReader:
    name = os.fspath(path).lower()
    if name.endswith(".gz"):
        name = name[:-3]
    if name.endswith(TSV_EXTENSIONS):
        return TsvPairReader(config)
    return NTriplesReader(config, predicates=[OWL_SAMEAS, OWL_EQUIVALENTCLASS])


def read_pair_file(path, config=None) -> Iterator[Triple]:
    """Identity and equivalence triples from an N-Triples or TSV file, format chosen by extension"""
    reader = reader_for(path, config)
    logger.info(f"read_pair_file: Reading {path} with {type(reader).__name__}")
    return reader.read_path(path)
