import gzip
import io
import logging
import os
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from typing import BinaryIO, Iterator

from src.errors import IngestError
from src.rdf.terms import Triple

logger = logging.getLogger(__name__)

GZIP_MAGIC = b"\x1f\x8b"
DEFAULT_MAX_LINE_LENGTH = 1 << 20


@dataclass
class ReaderStats:
    lines: int = 0
    triples: int = 0
    malformed: int = 0
    overlong: int = 0
    ignored: int = 0
    filtered: int = 0

    def as_dict(self):
        return asdict(self)


def _maybe_gunzip(stream: BinaryIO) -> BinaryIO:
    if hasattr(stream, "peek"):
        magic = stream.peek(2)[:2]
    elif stream.seekable():
        position = stream.tell()
        magic = stream.read(2)
        stream.seek(position)
    else:
        stream = io.BufferedReader(stream)
        magic = stream.peek(2)[:2]
    if magic == GZIP_MAGIC:
        logger.debug("_maybe_gunzip: gzip stream detected")
        return gzip.GzipFile(fileobj=stream)
    return stream


class BaseReader(ABC):
    def __init__(self, config=None):
        config = config or {}
        logger.debug(f"BaseReader.__init__: Initializing reader with config: {config}")
        self.config = config
        self.max_line_length = int(config.get("max_line_length", DEFAULT_MAX_LINE_LENGTH))
        self.stats = ReaderStats()

    @abstractmethod
    def read(self, stream: BinaryIO) -> Iterator[Triple]:
        raise NotImplementedError("Subclasses should implement this method.")

    def read_path(self, path) -> Iterator[Triple]:
        logger.info(f"{type(self).__name__}.read_path: Reading {path}")
        if not os.path.exists(path):
            logger.error(f"{type(self).__name__}.read_path: Failed: {path} does not exist")
            raise IngestError(f"input file not found: {path}")
        try:
            with open(path, "rb") as stream:
                yield from self.read(stream)
        except OSError as e:
            logger.error(f"{type(self).__name__}.read_path: Failed: {e}")
            raise IngestError(f"cannot read {path}: {e}") from e
        logger.info(f"{type(self).__name__}.read_path: Done with {path}: {self.stats.as_dict()}")

    def lines(self, stream: BinaryIO) -> Iterator[str]:
        """
        Decoded text lines of a (possibly gzipped) byte stream. Lines longer
        than max_line_length and lines that are not UTF-8 are counted and
        dropped; blank lines and comment lines are counted as ignored.
        """
        stream = _maybe_gunzip(stream)
        limit = self.max_line_length
        while True:
            raw = stream.readline(limit + 1)
            if not raw:
                return
            self.stats.lines += 1
            if len(raw) > limit and not raw.endswith(b"\n"):
                self.stats.overlong += 1
                while raw and not raw.endswith(b"\n"):
                    raw = stream.readline(limit + 1)
                continue
            try:
                text = raw.decode("utf-8").strip()
            except UnicodeDecodeError:
                self.stats.malformed += 1
                continue
            if not text or text.startswith("#"):
                self.stats.ignored += 1
                continue
            yield text
