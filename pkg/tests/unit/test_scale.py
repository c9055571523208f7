"""Scale tests over a synthetic dump, run with `invoke scale`."""
import datetime
import os
import time
import tracemalloc
from collections import deque

import pytest

from class_granularity.constants import RDF_TYPE, RDFS_DOMAIN, RDFS_SUBCLASS_OF
from class_granularity.data import InternTable
from class_granularity.parser import open_dump, parse_ntriples
from class_granularity.report import RunConfig, run

SCALE_TRIPLES = int(os.environ.get("CLASS_GRANULARITY_SCALE_TRIPLES", "0"))

pytestmark = [
    pytest.mark.slow,
    pytest.mark.skipif(not SCALE_TRIPLES, reason="CLASS_GRANULARITY_SCALE_TRIPLES is not set"),
]

EX = "http://example.org/scale/"
N_CLASSES = 30
N_PREDICATES = 70
N_INSTANCES = 900
MEMORY_LIMIT = 512 * 1024 * 1024
TIME_LIMIT = 300
NOW = datetime.datetime(2024, 1, 1, tzinfo=datetime.timezone.utc)


@pytest.fixture(scope="module")
def synthetic_dump(tmp_path_factory):
    """An ontology plus type and attribute dumps, SCALE_TRIPLES triples over about a thousand terms."""
    directory = tmp_path_factory.mktemp("scale")
    ontology, types, facts = directory / "ontology.nt", directory / "types.nt", directory / "facts.nt"

    with open(ontology, "w", encoding="utf-8") as stream:
        for index in range(1, N_CLASSES):
            stream.write(f"<{EX}C{index}> <{RDFS_SUBCLASS_OF}> <{EX}C{(index - 1) // 3}> .\n")
        for index in range(N_PREDICATES):
            stream.write(f"<{EX}p{index}> <{RDFS_DOMAIN}> <{EX}C{index % N_CLASSES}> .\n")

    with open(types, "w", encoding="utf-8") as stream:
        for index in range(N_INSTANCES):
            stream.write(f"<{EX}i{index}> <{RDF_TYPE}> <{EX}C{index % N_CLASSES}> .\n")

    with open(facts, "w", encoding="utf-8") as stream:
        for index in range(max(0, SCALE_TRIPLES - N_INSTANCES)):
            stream.write(f"<{EX}i{index % N_INSTANCES}> <{EX}p{index % N_PREDICATES}> <{EX}i{index % 7}> .\n")
    return ontology, [types, facts]


def scale_config(synthetic_dump, workers):
    """Run config over the synthetic dump."""
    ontology, data = synthetic_dump
    return RunConfig(
        label="scale", input={"ontology": [str(ontology)], "data": [str(path) for path in data], "workers": workers}
    )


def test_ingest_memory_tracks_distinct_terms(synthetic_dump):
    """Tests peak ingestion memory stays bounded however many triples stream through."""
    _, data = synthetic_dump
    table = InternTable()
    tracemalloc.start()
    try:
        for path in data:
            with open_dump(path) as stream:
                deque(parse_ntriples(stream, table), maxlen=0)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()

    assert len(table) <= N_CLASSES + N_PREDICATES + N_INSTANCES + 1
    assert peak < MEMORY_LIMIT


def test_full_pipeline_time(synthetic_dump):
    """Tests the whole pipeline over the synthetic dump finishes in time."""
    start = time.monotonic()
    report = run(scale_config(synthetic_dump, 1), now=NOW)
    assert time.monotonic() - start < TIME_LIMIT
    assert report.companion.instance_count == N_INSTANCES
    assert 0 <= report.class_granularity.value <= 1


def test_worker_count_does_not_change_the_report(synthetic_dump):
    """Tests the JSON report is byte-identical with one and with four workers."""
    single = run(scale_config(synthetic_dump, 1), now=NOW)
    parallel = run(scale_config(synthetic_dump, 4), now=NOW)
    assert single.to_json() == parallel.to_json()
