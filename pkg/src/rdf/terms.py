from typing import NamedTuple

from rdflib import BNode, Literal, URIRef
from rdflib.namespace import OWL, RDF, RDFS

RDFS_SUBCLASSOF = str(RDFS.subClassOf)
RDFS_SUBPROPERTYOF = str(RDFS.subPropertyOf)
OWL_EQUIVALENTCLASS = str(OWL.equivalentClass)
OWL_SAMEAS = str(OWL.sameAs)

PREFIXES = {
    "rdf": str(RDF),
    "rdfs": str(RDFS),
    "owl": str(OWL),
}

BLANK_PREFIX = "_:"


class Triple(NamedTuple):
    subject: str
    predicate: str
    object: str
    object_is_literal: bool = False


def term_key(term) -> str:
    """String handle of an rdflib term: the IRI itself, `_:label` for blank nodes, N-Triples text for literals"""
    if isinstance(term, BNode):
        return BLANK_PREFIX + str(term)
    if isinstance(term, Literal):
        return term.n3()
    return str(term)


def to_ntriples_term(key: str) -> str:
    if key.startswith(BLANK_PREFIX):
        return BNode(key[len(BLANK_PREFIX):]).n3()
    return URIRef(key).n3()


def ntriples_line(subject: str, predicate: str, obj: str) -> str:
    return f"{to_ntriples_term(subject)} {to_ntriples_term(predicate)} {to_ntriples_term(obj)} .\n"


def expand_predicate(name: str) -> str:
    """Accept either a full IRI or a prefixed name such as rdfs:subPropertyOf"""
    if name.startswith("<") and name.endswith(">"):
        return name[1:-1]
    prefix, sep, local = name.partition(":")
    if sep and prefix in PREFIXES and not local.startswith("//"):
        return PREFIXES[prefix] + local
    return name


def namespace_of(key: str) -> str:
    if key.startswith(BLANK_PREFIX):
        return BLANK_PREFIX
    cut = max(key.rfind("#"), key.rfind("/"))
    return key[:cut + 1] if cut >= 0 else key
