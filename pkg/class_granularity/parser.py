"""Dump reading and N-Triples parsing.

Only the line-oriented N-Triples syntax is understood. Turtle files restricted to that subset are accepted;
any other Turtle construct (prefixes, abbreviations, multi-line statements) is reported as a malformed line.
"""
import bz2
import gzip
import logging
import re
import zlib
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Iterator, NamedTuple, Optional, Union

from rdflib.plugins.parsers.ntriples import unquote

from class_granularity.constants import PROGRESS_EVERY
from class_granularity.data import InternTable, Term, Triple
from class_granularity.errors import DumpError, ParserError

logger = logging.getLogger(__name__)

GZIP_MAGIC = b"\x1f\x8b"
BZIP2_MAGIC = b"BZh"


class Compression(str, Enum):
    """Supported dump compressions."""

    NONE = "none"
    GZIP = "gzip"
    BZIP2 = "bzip2"
    AUTO = "auto"


class Strictness(str, Enum):
    """Behaviour on malformed lines."""

    STRICT = "strict"
    SKIP_BAD_LINES = "skip-bad-lines"


class DumpStream:
    """Sequential byte stream over a possibly compressed dump.

    Decompression failures surface as `DumpError` while reading, since archives are only validated lazily.
    """

    def __init__(self, path: Path, raw: IO[bytes]):
        """Wrap an opened binary file object."""
        self.path = path
        self._raw = raw

    def _guard(self, func, *args):
        try:
            return func(*args)
        except (EOFError, OSError, zlib.error, ValueError) as exc:
            raise DumpError(f"corrupt-archive: {self.path}: {exc}") from exc

    def read(self, size: int = -1) -> bytes:
        """Read up to `size` bytes."""
        return self._guard(self._raw.read, size)

    def readline(self) -> bytes:
        """Read one line."""
        return self._guard(self._raw.readline)

    def __iter__(self) -> Iterator[bytes]:
        """Iterate lines."""
        while True:
            line = self.readline()
            if not line:
                return
            yield line

    def close(self):
        """Close the underlying file."""
        self._raw.close()

    def __enter__(self) -> "DumpStream":
        """Context manager entry."""
        return self

    def __exit__(self, *exc_info):
        """Context manager exit."""
        self.close()


def sniff_compression(path: Path) -> Compression:
    """Detect the compression of a file from its magic bytes."""
    with open(path, "rb") as raw_file:
        head = raw_file.read(3)
    if head.startswith(GZIP_MAGIC):
        return Compression.GZIP
    if head.startswith(BZIP2_MAGIC):
        return Compression.BZIP2
    return Compression.NONE


def open_dump(path: Union[str, Path], compression: Union[str, Compression] = Compression.AUTO) -> DumpStream:
    """Open a dump file as a sequential byte stream, decompressing gzip or bzip2 archives."""
    path = Path(path)
    try:
        compression = Compression(compression)
    except ValueError as exc:
        raise DumpError(f"unsupported-compression: {compression}") from exc

    if not path.is_file():
        raise DumpError(f"file-not-found: {path}")

    if compression == Compression.AUTO:
        compression = sniff_compression(path)
        logger.debug("Detected %s compression for %s", compression.value, path)

    if compression == Compression.GZIP:
        raw: IO[bytes] = gzip.open(path, "rb")
    elif compression == Compression.BZIP2:
        raw = bz2.open(path, "rb")
    else:
        raw = open(path, "rb")  # pylint: disable=consider-using-with
    return DumpStream(path, raw)


_IRI = r"<((?:[^\x00-\x20<>\"{}|^`\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*)>"
_BNODE = r"_:([\w\-]+(?:\.[\w\-]+)*)"
_LITERAL = r"\"((?:[^\"\\\n\r]|\\.)*)\"(?:\^\^" + _IRI + r"|@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*))?"

LINE_RE = re.compile(
    r"^[ \t]*(?:"
    + _IRI.replace("(", "(?P<s_iri>", 1)
    + "|"
    + _BNODE.replace("(", "(?P<s_bnode>", 1)
    + r")[ \t]*"
    + _IRI.replace("(", "(?P<p_iri>", 1)
    + r"[ \t]*(?:"
    + _IRI.replace("(", "(?P<o_iri>", 1)
    + "|"
    + _BNODE.replace("(", "(?P<o_bnode>", 1)
    + "|"
    + _LITERAL.replace("(", "(?P<o_lex>", 1)
    + r")[ \t]*\.[ \t]*(?:#.*)?$"
)
TERM_RE = re.compile(
    r"^(?:"
    + _IRI.replace("(", "(?P<o_iri>", 1)
    + "|"
    + _BNODE.replace("(", "(?P<o_bnode>", 1)
    + "|"
    + _LITERAL.replace("(", "(?P<o_lex>", 1)
    + r")$"
)


def _unescape(value: str) -> str:
    return unquote(value) if "\\" in value else value


def _object_term(match) -> Term:
    """Build the object term from a LINE_RE or TERM_RE match."""
    if match.group("o_iri") is not None:
        return Term.iri(_unescape(match.group("o_iri")))
    if match.group("o_bnode") is not None:
        return Term.blank(match.group("o_bnode"))
    # The literal's datatype and language groups follow its lexical group
    lex_index = match.re.groupindex["o_lex"]
    datatype, language = match.group(lex_index + 1), match.group(lex_index + 2)
    return Term.literal(
        _unescape(match.group("o_lex")), datatype=_unescape(datatype) if datatype else None, language=language
    )


def canonicalize(term: Term) -> Term:
    """Re-derive the canonical form of a term from its N-Triples serialization.

    Examples:
        >>> canonicalize(Term.literal("a\\tb")) == Term.literal("a\\tb")
        True
    """
    match = TERM_RE.match(term.n3)
    if not match:
        raise ParserError(f"Not a valid N-Triples term: {term.n3}")
    return _object_term(match)


class LineError(NamedTuple):
    """A malformed line reported in skip-bad-lines mode."""

    line_number: int
    message: str
    line: str


class ParseCounters:
    """Running counts of one parse, used for diagnostics and line accounting."""

    def __init__(self):
        """Start at zero."""
        self.lines = 0
        self.triples = 0
        self.skipped = 0
        self.errors = 0

    def __repr__(self) -> str:
        """Readable summary."""
        return (
            f"ParseCounters(lines={self.lines}, triples={self.triples}, skipped={self.skipped}, errors={self.errors})"
        )


class NTriplesParser:
    """Streaming N-Triples parser interning terms into a shared table."""

    def __init__(self, table: InternTable, strictness: Union[str, Strictness] = Strictness.STRICT, source: str = ""):
        """Bind the parser to an intern table."""
        self.table = table
        self.strictness = Strictness(strictness)
        self.source = source
        self.counters = ParseCounters()

    def parse_line(self, line: str) -> Optional[Triple]:
        """Parse one line; blank lines and comments return None, malformed lines raise ValueError."""
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            return None
        match = LINE_RE.match(stripped)
        if not match:
            raise ValueError("not a well-formed N-Triples statement")

        intern = self.table.intern
        if match.group("s_iri") is not None:
            subject = Term.iri(_unescape(match.group("s_iri")))
        else:
            subject = Term.blank(match.group("s_bnode"))
        predicate = Term.iri(_unescape(match.group("p_iri")))
        return Triple(intern(subject), intern(predicate), intern(_object_term(match)))

    def parse(self, stream: Iterable[bytes]) -> Iterator[Union[Triple, LineError]]:
        """Yield one Triple per statement, or a LineError per malformed line in skip-bad-lines mode."""
        counters = self.counters
        for line_number, raw_line in enumerate(stream, 1):
            counters.lines += 1
            try:
                line = raw_line.decode("utf-8") if isinstance(raw_line, bytes) else raw_line
                if line_number == 1:
                    line = line.lstrip("\ufeff")
                triple = self.parse_line(line)
            except (ValueError, UnicodeDecodeError) as exc:
                if self.strictness == Strictness.STRICT:
                    raise ParserError(
                        f"{self.source or 'stream'}:{line_number}: {exc}", line_number=line_number
                    ) from exc
                counters.errors += 1
                logger.warning("Skipping malformed line %s:%s: %s", self.source or "stream", line_number, exc)
                text = raw_line if isinstance(raw_line, str) else raw_line.decode("utf-8", errors="replace")
                yield LineError(line_number, str(exc), text.rstrip("\n"))
                continue

            if triple is None:
                counters.skipped += 1
                continue
            counters.triples += 1
            if counters.lines % PROGRESS_EVERY == 0:
                logger.debug("%s: %s lines parsed", self.source or "stream", counters.lines)
            yield triple


def parse_ntriples(
    stream: Iterable[bytes], table: InternTable, strictness: Union[str, Strictness] = Strictness.STRICT
) -> Iterator[Union[Triple, LineError]]:
    """Parse an N-Triples byte stream into interned triples."""
    return NTriplesParser(table, strictness).parse(stream)


def serialize_ntriples(triples: Iterable[Triple], table: InternTable) -> Iterator[str]:
    """Serialize interned triples back to canonical N-Triples lines."""
    term = table.term
    for subject, predicate, obj in triples:
        yield f"{term(subject).n3} {term(predicate).n3} {term(obj).n3} .\n"

