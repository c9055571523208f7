"""Tests for dump reading and N-Triples parsing."""
import bz2
import gzip
import os
from pathlib import Path

import pytest

from class_granularity.data import InternTable, Term, TermKind
from class_granularity.errors import DumpError, ParserError
from class_granularity.parser import (
    Compression,
    LineError,
    NTriplesParser,
    Strictness,
    canonicalize,
    open_dump,
    parse_ntriples,
    serialize_ntriples,
    sniff_compression,
)

dir_path = os.path.dirname(os.path.realpath(__file__))

FACTS_PATH = Path(dir_path, "data", "granularity", "facts.nt")


def parse_text(text, strictness=Strictness.STRICT):
    """Parse an N-Triples string, returning the table and the parsed items."""
    table = InternTable()
    items = list(parse_ntriples(text.encode("utf-8").splitlines(keepends=True), table, strictness))
    return table, items


@pytest.mark.parametrize(
    "line, subject, predicate, obj",
    [
        (
            "<http://ex.org/s> <http://ex.org/p> <http://ex.org/o> .",
            Term.iri("http://ex.org/s"),
            Term.iri("http://ex.org/p"),
            Term.iri("http://ex.org/o"),
        ),
        (
            '_:b1 <http://ex.org/p> "hello"@en-GB .',
            Term.blank("b1"),
            Term.iri("http://ex.org/p"),
            Term.literal("hello", language="en-GB"),
        ),
        (
            '<http://ex.org/s> <http://ex.org/p> "1850197130"^^<http://www.w3.org/2001/XMLSchema#decimal> .',
            Term.iri("http://ex.org/s"),
            Term.iri("http://ex.org/p"),
            Term.literal("1850197130", datatype="http://www.w3.org/2001/XMLSchema#decimal"),
        ),
        (
            '<http://ex.org/s> <http://ex.org/p> "tab\\there \\"q\\" \\u00e9" .',
            Term.iri("http://ex.org/s"),
            Term.iri("http://ex.org/p"),
            Term.literal('tab\there "q" é'),
        ),
        (
            "<http://ex.org/caf\\u00E9> <http://ex.org/p> _:x.y . # trailing comment",
            Term.iri("http://ex.org/café"),
            Term.iri("http://ex.org/p"),
            Term.blank("x.y"),
        ),
        (
            '  <http://ex.org/s>\t<http://ex.org/p>   ""   .  ',
            Term.iri("http://ex.org/s"),
            Term.iri("http://ex.org/p"),
            Term.literal(""),
        ),
    ],
)
def test_parse_line(line, subject, predicate, obj):
    """Tests parsing of single statements into canonical terms."""
    table, items = parse_text(line + "\n")
    assert len(items) == 1
    triple = items[0]
    assert table.term(triple.subject) == subject
    assert table.term(triple.predicate) == predicate
    assert table.term(triple.object) == obj


@pytest.mark.parametrize(
    "line",
    [
        "<http://ex.org/s> <http://ex.org/p> <http://ex.org/o>",
        '"literal" <http://ex.org/p> <http://ex.org/o> .',
        "<http://ex.org/s> _:p <http://ex.org/o> .",
        "@prefix ex: <http://ex.org/> .",
        "ex:s ex:p ex:o .",
        "<http://ex.org/s> <http://ex.org/p> <http://ex.org/o> . extra",
    ],
)
def test_parse_malformed_strict(line):
    """Tests strict mode aborts on the first malformed line with its number."""
    with pytest.raises(ParserError) as exc_info:
        parse_text("# header\n" + line + "\n")
    assert exc_info.value.line_number == 2


def test_parse_skip_bad_lines_accounting():
    """Tests skipped, malformed and parsed lines add up to the lines read."""
    text = (
        "# comment\n"
        "<http://ex.org/s> <http://ex.org/p> <http://ex.org/o> .\n"
        "\n"
        "not a triple\n"
        "<http://ex.org/s> <http://ex.org/q> \"v\" .\n"
    )
    table = InternTable()
    parser = NTriplesParser(table, Strictness.SKIP_BAD_LINES, source="inline")
    items = list(parser.parse(text.encode("utf-8").splitlines(keepends=True)))

    errors = [item for item in items if isinstance(item, LineError)]
    assert len(errors) == 1
    assert errors[0].line_number == 4
    assert errors[0].line == "not a triple"
    counters = parser.counters
    assert (counters.lines, counters.triples, counters.skipped, counters.errors) == (5, 2, 2, 1)
    assert counters.lines == counters.triples + counters.skipped + counters.errors


def test_parse_invalid_utf8_is_a_bad_line():
    """Tests undecodable bytes are reported like any malformed line."""
    table = InternTable()
    line = b"<http://ex.org/\xff> <http://ex.org/p> <http://ex.org/o> .\n"
    items = list(parse_ntriples([line], table, "skip-bad-lines"))
    assert isinstance(items[0], LineError)


def test_parse_facts_file():
    """Tests the worked example facts file: comment and blank lines are skipped."""
    table = InternTable()
    with open_dump(FACTS_PATH) as stream:
        triples = list(parse_ntriples(stream, table))
    assert len(triples) == 9
    box_office = [triple for triple in triples if table.text(triple.predicate).endswith("P2142")]
    assert table.term(box_office[0].object).kind == TermKind.LITERAL


@pytest.mark.parametrize(
    "compression, opener",
    [(Compression.GZIP, gzip.open), (Compression.BZIP2, bz2.open), (Compression.NONE, open)],
)
def test_open_dump_compressions(tmp_path, compression, opener):
    """Tests compressed dumps are detected from their magic bytes and read transparently."""
    path = tmp_path / "facts.nt.archive"
    with opener(path, "wb") as archive:
        archive.write(FACTS_PATH.read_bytes())

    assert sniff_compression(path) == compression
    for mode in (Compression.AUTO, compression):
        table = InternTable()
        with open_dump(path, mode) as stream:
            assert len(list(parse_ntriples(stream, table))) == 9


def test_open_dump_truncated_archive(tmp_path):
    """Tests a truncated gzip archive surfaces as a corrupt archive while reading."""
    path = tmp_path / "facts.nt.gz"
    payload = gzip.compress(FACTS_PATH.read_bytes() * 20)
    path.write_bytes(payload[: len(payload) // 2])

    with pytest.raises(DumpError, match="corrupt-archive"):
        with open_dump(path) as stream:
            list(parse_ntriples(stream, InternTable(), "skip-bad-lines"))


def test_open_dump_missing_file(tmp_path):
    """Tests missing dumps."""
    with pytest.raises(DumpError, match="file-not-found"):
        open_dump(tmp_path / "missing.nt")


def test_open_dump_unsupported_compression():
    """Tests unknown compression names."""
    with pytest.raises(DumpError, match="unsupported-compression"):
        open_dump(FACTS_PATH, "zstd")


def test_serialize_reparses_to_same_terms():
    """Tests serialized triples parse back to the same canonical terms."""
    table = InternTable()
    with open_dump(FACTS_PATH) as stream:
        triples = list(parse_ntriples(stream, table))
    lines = [line.encode("utf-8") for line in serialize_ntriples(triples, table)]

    other = InternTable()
    reparsed = list(parse_ntriples(lines, other))
    assert [tuple(other.term(term_id) for term_id in triple) for triple in reparsed] == [
        tuple(table.term(term_id) for term_id in triple) for triple in triples
    ]


def test_canonicalize_rejects_garbage():
    """Tests canonicalization of an invalid term."""
    with pytest.raises(ParserError):
        canonicalize(Term(TermKind.LITERAL, "no quotes"))


@pytest.mark.parametrize(
    "line",
    [
        '<http://a/x\\u0020y> <http://a/p> "v" .',
        '<http://a/s> <http://a/p> <http://a/\\u003Cangle\\u003E> .',
        '<http://a/s> <http://a/p> "5"^^<http://a/my\\u0022type> .',
    ],
)
def test_escaped_iris_survive_serialization(line):
    """Tests IRIs decoding to characters N-Triples forbids are escaped again when serialized."""
    table, (triple,) = parse_text(line)
    (serialized,) = serialize_ntriples([triple], table)

    other, (reparsed,) = parse_text(serialized)
    assert [other.term(term_id) for term_id in reparsed] == [table.term(term_id) for term_id in triple]


def test_byte_order_mark_on_first_line():
    """Tests a UTF-8 byte order mark at the start of a dump is ignored."""
    table = InternTable()
    lines = [b"\xef\xbb\xbf<http://a/s> <http://a/p> <http://a/o> .\n", b"<http://a/s> <http://a/p> \"v\" .\n"]
    items = list(parse_ntriples(lines, table))
    assert [table.text(item.subject) for item in items] == ["http://a/s", "http://a/s"]
