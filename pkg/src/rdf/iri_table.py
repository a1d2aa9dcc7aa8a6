from typing import Dict, Iterator, List, Optional


class IriTable:
    """Bidirectional IRI <-> node id map; ids are handed out contiguously in first-seen order"""

    def __init__(self):
        self._ids: Dict[str, int] = {}
        self._iris: List[str] = []

    def intern(self, iri: str) -> int:
        node = self._ids.get(iri)
        if node is None:
            node = len(self._iris)
            self._ids[iri] = node
            self._iris.append(iri)
        return node

    def lookup(self, iri: str) -> Optional[int]:
        return self._ids.get(iri)

    def resolve(self, node: int) -> str:
        return self._iris[node]

    def __contains__(self, iri: str) -> bool:
        return iri in self._ids

    def __len__(self) -> int:
        return len(self._iris)

    def __iter__(self) -> Iterator[str]:
        return iter(self._iris)
