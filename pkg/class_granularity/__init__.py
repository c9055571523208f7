"""Class-granularity init."""
from pathlib import Path
from typing import Optional, Type

from .adapter import DBpedia, Freebase, GenericAdapter, Identity, YAGO, AdapterSpec, apply_adapter, load_adapter_spec
from .errors import GranularityError, NonexistentAdapterError
from .metrics import MetricConfig, class_granularity
from .ontology import HierarchyConfig, build_hierarchy
from .output import DatasetResult, Ratio

SUPPORTED_ADAPTERS = (
    Identity,
    DBpedia,
    YAGO,
    Freebase,
)

SUPPORTED_ADAPTER_NAMES = [adapter.get_adapter_type() for adapter in SUPPORTED_ADAPTERS]


def init_adapter(adapter_type=None) -> Optional[AdapterSpec]:
    """Returns the AdapterSpec of the corresponding named Adapter."""
    try:
        if not adapter_type:
            adapter_type = Identity.get_adapter_type()
        return get_adapter_class(adapter_type).get_spec()

    except NonexistentAdapterError:
        return None


def get_adapter_class(adapter_name: str) -> Type[GenericAdapter]:
    """Returns the Adapter class for a specific adapter_type."""
    adapter_name = adapter_name.lower()

    for adapter_class in SUPPORTED_ADAPTERS:
        if adapter_class.get_adapter_type() == adapter_name:
            break
    else:
        raise NonexistentAdapterError(
            f"{adapter_name} is not a currently supported adapter. Only {', '.join(SUPPORTED_ADAPTER_NAMES)}"
        )

    return adapter_class


def resolve_adapter(name_or_file: Optional[str]) -> AdapterSpec:
    """Return a named adapter's spec, or load one from a TOML file path."""
    if name_or_file and Path(name_or_file).suffix == ".toml":
        return load_adapter_spec(name_or_file)
    return get_adapter_class(name_or_file or Identity.get_adapter_type()).get_spec()


__all__ = [
    "AdapterSpec",
    "DatasetResult",
    "GranularityError",
    "HierarchyConfig",
    "MetricConfig",
    "NonexistentAdapterError",
    "Ratio",
    "apply_adapter",
    "build_hierarchy",
    "class_granularity",
    "get_adapter_class",
    "init_adapter",
    "resolve_adapter",
]
