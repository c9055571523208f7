"""Tests for terms and the intern table."""
from concurrent.futures import ThreadPoolExecutor

import pytest

from class_granularity.data import InternTable, Term, TermKind, escape_literal


@pytest.mark.parametrize(
    "term, n3",
    [
        (Term.iri("http://example.org/a"), "<http://example.org/a>"),
        (Term.iri("http://example.org/a b"), "<http://example.org/a\\u0020b>"),
        (Term.blank("b0"), "_:b0"),
        (Term.literal("plain"), '"plain"'),
        (Term.literal("chat", language="fr"), '"chat"@fr'),
        (
            Term.literal("5", datatype="http://www.w3.org/2001/XMLSchema#integer"),
            '"5"^^<http://www.w3.org/2001/XMLSchema#integer>',
        ),
        (Term.literal('a "quoted"\nline'), '"a \\"quoted\\"\\nline"'),
    ],
)
def test_term_n3(term, n3):
    """Tests the N-Triples form of each kind of term."""
    assert term.n3 == n3


@pytest.mark.parametrize(
    "term, empty",
    [
        (Term.iri(""), True),
        (Term.literal(""), True),
        (Term.literal("", language="en"), True),
        (Term.literal("", datatype="http://www.w3.org/2001/XMLSchema#string"), True),
        (Term.literal("x"), False),
        (Term.iri("http://example.org/a"), False),
        (Term.blank("b0"), False),
    ],
)
def test_term_is_empty(term, empty):
    """Tests empty objects detection."""
    assert term.is_empty is empty


def test_literals_keep_lexical_form():
    """Tests different lexical forms of one value stay distinct terms."""
    integer = "http://www.w3.org/2001/XMLSchema#integer"
    assert Term.literal("01", datatype=integer) != Term.literal("1", datatype=integer)
    assert Term.literal("1", datatype=integer) != Term.literal("1")


def test_escape_literal_backslash_first():
    """Tests backslashes are escaped before quotes."""
    assert escape_literal('\\"') == '\\\\\\"'


def test_intern_dense_ids():
    """Tests ids are dense, stable and in first-seen order."""
    table = InternTable()
    ids = [table.intern(Term.iri(name)) for name in ["a", "b", "a", "c", "b"]]
    assert ids == [0, 1, 0, 2, 1]
    assert len(table) == 3
    assert [term.text for term in table] == ["a", "b", "c"]
    assert table.term(1) == Term.iri("b")
    assert table.text(2) == "c"


def test_intern_distinguishes_kinds():
    """Tests an IRI and a blank node with the same text are different terms."""
    table = InternTable()
    assert table.intern(Term.iri("x")) != table.intern(Term.blank("x"))
    assert table.term(1).kind == TermKind.BLANK_NODE


def test_lookup_does_not_insert():
    """Tests lookups of unknown terms."""
    table = InternTable()
    table.intern_iri("known")
    assert table.lookup_iri("known") == 0
    assert table.lookup_iri("unknown") is None
    assert table.lookup(Term.literal("unknown")) is None
    assert len(table) == 1


def test_preloaded_table():
    """Tests a table built from terms keeps their order as ids."""
    table = InternTable([Term.iri("z"), Term.iri("a")])
    assert table.lookup_iri("z") == 0
    assert table.lookup_iri("a") == 1


def test_merge_remaps_in_order():
    """Tests merging a worker table gives the ids sequential interning would give."""
    session = InternTable()
    session.intern_iri("shared")
    worker = InternTable()
    worker.intern_iri("new")
    worker.intern_iri("shared")

    remap = session.merge(worker)
    assert remap == [1, 0]
    assert session.text(1) == "new"


def test_concurrent_intern():
    """Tests threads interning the same terms agree on every id."""
    table = InternTable()
    names = [f"http://example.org/{index % 50}" for index in range(2000)]
    with ThreadPoolExecutor(max_workers=8) as executor:
        ids = list(executor.map(table.intern_iri, names))
    assert len(table) == 50
    for name, term_id in zip(names, ids):
        assert table.text(term_id) == name
