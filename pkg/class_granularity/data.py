"""Definition of Data classes: RDF terms, triples and the intern table."""
import logging
import re
import threading
from enum import Enum
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional

logger = logging.getLogger(__name__)

TermId = int

IRI_FORBIDDEN_RE = re.compile(r"[\x00-\x20<>\"{}|^`\\]")


class TermKind(str, Enum):
    """Kinds of RDF terms."""

    IRI = "iri"
    LITERAL = "literal"
    BLANK_NODE = "blank-node"


def escape_literal(lexical: str) -> str:
    """Escape a lexical form for the canonical N-Triples literal syntax.

    Examples:
        >>> escape_literal('say "hi"')
        'say \\\\"hi\\\\"'
    """
    return lexical.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r")


def escape_iri(value: str) -> str:
    """Escape the characters an N-Triples IRI may not contain as `\\uXXXX`.

    Examples:
        >>> escape_iri("http://example.org/x y")
        'http://example.org/x\\\\u0020y'
    """
    return IRI_FORBIDDEN_RE.sub(lambda match: f"\\u{ord(match.group()):04X}", value)


class Term(NamedTuple):
    """A canonical RDF term.

    `text` holds the IRI without angle brackets, the blank node label without `_:`, or the full
    literal in N-Triples syntax (quoted lexical form plus optional `^^<datatype>` or `@lang`).

    Examples:
        >>> Term.iri("http://example.org/x").n3
        '<http://example.org/x>'
        >>> Term.literal("1850197130", datatype="http://www.w3.org/2001/XMLSchema#integer").text
        '"1850197130"^^<http://www.w3.org/2001/XMLSchema#integer>'
        >>> Term.literal("chat", language="fr").text
        '"chat"@fr'
    """

    kind: TermKind
    text: str

    @classmethod
    def iri(cls, value: str) -> "Term":
        """Build an IRI term."""
        return cls(TermKind.IRI, value)

    @classmethod
    def blank(cls, label: str) -> "Term":
        """Build a blank node term."""
        return cls(TermKind.BLANK_NODE, label)

    @classmethod
    def literal(cls, lexical: str, datatype: Optional[str] = None, language: Optional[str] = None) -> "Term":
        """Build a literal term, keeping the lexical form verbatim."""
        text = f'"{escape_literal(lexical)}"'
        if language:
            text += f"@{language}"
        elif datatype:
            text += f"^^<{escape_iri(datatype)}>"
        return cls(TermKind.LITERAL, text)

    @property
    def n3(self) -> str:
        """N-Triples serialization of the term."""
        if self.kind == TermKind.IRI:
            return f"<{escape_iri(self.text)}>"
        if self.kind == TermKind.BLANK_NODE:
            return f"_:{self.text}"
        return self.text

    @property
    def is_empty(self) -> bool:
        """True for the empty IRI and for literals with an empty lexical form."""
        if self.kind == TermKind.LITERAL:
            return self.text == '""' or self.text.startswith(('""^^', '""@'))
        return self.kind == TermKind.IRI and not self.text


class Triple(NamedTuple):
    """Subject-predicate-object record over interned term ids."""

    subject: TermId
    predicate: TermId
    object: TermId


class InternTable:
    """Dense, session-scoped mapping between canonical terms and integer ids.

    Ids are handed out in first-seen order and never reused. Lookups of known terms take no lock, so a
    fully populated table can be shared by reader threads; only insertions are serialized.

    Examples:
        >>> table = InternTable()
        >>> table.intern(Term.iri("x")), table.intern(Term.iri("x")), table.intern(Term.iri("y"))
        (0, 0, 1)
    """

    def __init__(self, terms: Optional[Iterable[Term]] = None):
        """Create an empty table, or one preloaded with `terms` in id order."""
        self._ids: Dict[Term, TermId] = {}
        self._terms: List[Term] = []
        self._lock = threading.Lock()
        for term in terms or []:
            self.intern(term)

    def __len__(self) -> int:
        """Number of distinct terms."""
        return len(self._terms)

    def __iter__(self) -> Iterator[Term]:
        """Iterate terms in id order."""
        return iter(self._terms)

    def intern(self, term: Term) -> TermId:
        """Return the id of `term`, assigning the next dense id to unseen terms."""
        term_id = self._ids.get(term)
        if term_id is None:
            with self._lock:
                term_id = self._ids.get(term)
                if term_id is None:
                    term_id = len(self._terms)
                    self._terms.append(term)
                    self._ids[term] = term_id
        return term_id

    def intern_iri(self, value: str) -> TermId:
        """Shortcut to intern an IRI given as a string."""
        return self.intern(Term.iri(value))

    def lookup(self, term: Term) -> Optional[TermId]:
        """Return the id of a known term without inserting it."""
        return self._ids.get(term)

    def lookup_iri(self, value: str) -> Optional[TermId]:
        """Return the id of a known IRI without inserting it."""
        return self._ids.get(Term.iri(value))

    def term(self, term_id: TermId) -> Term:
        """Return the term behind an id."""
        return self._terms[term_id]

    def text(self, term_id: TermId) -> str:
        """Return the canonical text behind an id."""
        return self._terms[term_id].text

    def merge(self, other: "InternTable") -> List[TermId]:
        """Absorb the terms of `other` in its id order and return the local-to-session id remap.

        Merging per-worker tables in input order reproduces the ids sequential ingestion would assign.
        """
        remap = [self.intern(term) for term in other]
        logger.debug("Merged %s terms into intern table, now %s terms.", len(remap), len(self))
        return remap
