"""Used to setup fixtures to be used through tests"""
from pathlib import Path
from typing import List

import pytest

from class_granularity.data import InternTable
from class_granularity.ontology import HierarchyConfig, build_hierarchy
from class_granularity.parser import open_dump, parse_ntriples
from class_granularity.report import RunConfig
from class_granularity.stats import build_membership, build_predicate_stats

DATA_DIR = Path(__file__).parent / "data"
GRANULARITY_DIR = DATA_DIR / "granularity"
FREEBASE_DIR = DATA_DIR / "freebase"

ONTO = "http://example.org/onto/"
WD = "http://www.wikidata.org/entity/"
WDT = "http://www.wikidata.org/prop/direct/"


def read_triples(table: InternTable, *paths: Path) -> List:
    """Parse fixture files into one list of interned triples."""
    triples = []
    for path in paths:
        with open_dump(path) as stream:
            triples.extend(parse_ntriples(stream, table))
    return triples


def build_pipeline(ontology_files, data_files, hierarchy=None):
    """Run the model and statistics stages in memory over fixture files."""
    hierarchy = hierarchy or HierarchyConfig()
    table = InternTable()
    graph = build_hierarchy(read_triples(table, *ontology_files), hierarchy, table)
    data = read_triples(table, *data_files)
    membership = build_membership(data, graph, hierarchy, table)
    stats = build_predicate_stats(data, membership, graph, hierarchy, table)
    return table, graph, membership, stats


@pytest.fixture()
def table():
    """Returns an empty intern table."""
    return InternTable()


@pytest.fixture()
def ontology_a_pipeline():
    """Model and statistics of the worked example under the shallow ontology."""
    return build_pipeline(
        [GRANULARITY_DIR / "ontology_a.nt"], [GRANULARITY_DIR / "facts.nt", GRANULARITY_DIR / "types_a.nt"]
    )


@pytest.fixture()
def ontology_b_pipeline():
    """Model and statistics of the worked example under the deeper ontology."""
    return build_pipeline(
        [GRANULARITY_DIR / "ontology_b.nt"], [GRANULARITY_DIR / "facts.nt", GRANULARITY_DIR / "types_b.nt"]
    )


@pytest.fixture()
def run_config_factory():
    """Returns a builder of RunConfigs over the worked example fixtures."""

    def factory(ontology="b", **sections) -> RunConfig:
        ontology_files = [str(GRANULARITY_DIR / f"ontology_{ontology}.nt")]
        if ontology == "b_dead_schema":
            ontology_files = [str(GRANULARITY_DIR / name) for name in ["ontology_b.nt", "ontology_b_dead_schema.nt"]]
        types = "types_a.nt" if ontology == "a" else "types_b.nt"
        inputs = {
            "ontology": ontology_files,
            "data": [str(GRANULARITY_DIR / "facts.nt"), str(GRANULARITY_DIR / types)],
            **sections.pop("input", {}),
        }
        return RunConfig(label=sections.pop("label", f"ontology-{ontology}"), input=inputs, **sections)

    return factory
