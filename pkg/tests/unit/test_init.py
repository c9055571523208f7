"""Tests for the adapter registry."""
import pytest

from class_granularity import get_adapter_class, init_adapter, resolve_adapter
from class_granularity.adapter import DBpedia, Freebase, Identity, YAGO
from class_granularity.errors import AdapterError, NonexistentAdapterError


@pytest.mark.parametrize(
    "adapter_type, result_name",
    [("wrong", None), ("", "identity"), (None, "identity"), ("dbpedia", "dbpedia"), ("freebase", "freebase")],
)
def test_init_adapter(adapter_type, result_name):
    """Tests for init_adapter."""
    spec = init_adapter(adapter_type=adapter_type)
    if result_name:
        assert spec.name == result_name
    else:
        assert spec is None


@pytest.mark.parametrize(
    "adapter_name, result, error",
    [
        ("identity", Identity, None),
        ("DBpedia", DBpedia, None),
        ("dbpedia", DBpedia, None),
        ("yago", YAGO, None),
        ("YAGO", YAGO, None),
        ("Freebase", Freebase, None),
        ("wikidata", None, NonexistentAdapterError),
    ],
)
def test_get_adapter_class(adapter_name, result, error):
    """Tests for get_adapter_class."""
    if result:
        assert get_adapter_class(adapter_name) is result
    if error:
        with pytest.raises(error):
            get_adapter_class(adapter_name)


def test_nonexistent_adapter_is_an_adapter_error():
    """Tests unknown adapters are reported as adapter errors."""
    with pytest.raises(AdapterError, match="Only identity, dbpedia, yago, freebase"):
        resolve_adapter("wikidata")


def test_resolve_adapter_file(tmp_path):
    """Tests adapter files are loaded by their .toml suffix."""
    path = tmp_path / "mine.toml"
    path.write_text('[[rules]]\nkind = "drop-empty-object"\n')
    spec = resolve_adapter(str(path))
    assert spec.name == "mine"
    assert resolve_adapter(None).name == "identity"
