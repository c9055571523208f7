"""Definition of dataset Adapters, the ordered normalization rules applied to a dump's triple stream."""
import logging
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Union

import toml
from pydantic import BaseModel, Extra, validator
from pydantic.error_wrappers import ValidationError

from class_granularity.constants import (
    FREEBASE_OBJECT_TYPE,
    FREEBASE_PROPERTY_SCHEMA,
    FREEBASE_THING,
    FREEBASE_TYPE_INSTANCE,
    RDF_TYPE,
    SCHEMA_DOMAIN_INCLUDES,
)
from class_granularity.data import InternTable, Triple
from class_granularity.errors import AdapterError
from class_granularity.ontology import HierarchyConfig
from class_granularity.rules import (
    AdapterContext,
    DropEmptyObject,
    DropUnicodeClassNames,
    GenericRule,
    InjectVirtualRoot,
    RenamePredicate,
    ReversePredicate,
    build_rule,
)

logger = logging.getLogger(__name__)


class AdapterSpec(BaseModel, extra=Extra.forbid):
    """Named, ordered list of normalization rules.

    Attributes:
        name: dataset identifier.
        rules: rules applied in order; config-file entries (dicts with a `kind` key) are accepted too.
        hierarchy (optional): overrides of the hierarchy vocabulary the dataset needs.

    Examples:
        >>> AdapterSpec(name="custom", rules=[{"kind": "drop-empty-object"}]).rules
        [DropEmptyObject()]
    """

    name: str
    rules: List[GenericRule] = []
    hierarchy: Dict = {}

    # pylint: disable=no-self-argument,no-self-use
    @validator("rules", pre=True, each_item=True)
    def validate_rules(cls, value):
        """Build rules given as config entries."""
        if isinstance(value, dict):
            return build_rule(value)
        if not isinstance(value, GenericRule):
            raise ValueError(f"Not an adapter rule: {value!r}")
        return value

    @property
    def stateless(self) -> bool:
        """Whether every rule can run on independently adapted per-file streams."""
        return all(rule.is_stateless() for rule in self.rules)

    def to_config(self) -> Dict:
        """Spec as a config-file mapping."""
        return {"name": self.name, "rules": [rule.to_config() for rule in self.rules], "hierarchy": self.hierarchy}


def apply_adapter(
    triples: Iterable[Triple],
    spec: AdapterSpec,
    table: InternTable,
    hierarchy: Optional[HierarchyConfig] = None,
    context: Optional[AdapterContext] = None,
) -> Iterator[Triple]:
    """Apply the rules of `spec` in order to a triple stream.

    Triples synthesized by a rule at end of stream still flow through the rules declared after it.
    """
    if not spec.rules:
        yield from triples
        return

    context = context or AdapterContext(table, hierarchy)
    rules = spec.rules

    def run(triple: Triple, start: int) -> Optional[Triple]:
        for rule in rules[start:]:
            result = rule.process_hook(triple, context)
            if result is None:
                context.dropped[rule.get_kind()] += 1
                return None
            triple = result
        return triple

    for triple in triples:
        result = run(triple, 0)
        if result is not None:
            yield result

    for position, rule in enumerate(rules):
        for synthetic in rule.post_process_hook(context):
            context.emitted += 1
            result = run(synthetic, position + 1)
            if result is not None:
                yield result

    if context.dropped:
        logger.info("Adapter %s dropped triples: %s", spec.name, dict(sorted(context.dropped.items())))


class GenericAdapter(BaseModel):
    """Base class for the named Adapters.

    Attributes:
        _rules (optional): rules applied in order to every stream of the dataset. Default: no rules.
        _hierarchy_defaults (optional): hierarchy vocabulary overrides the dataset needs, applied below any
            user-given hierarchy settings.

    Examples:
        >>> Identity.get_spec()
        AdapterSpec(name='identity', rules=[], hierarchy={})
    """

    _rules: List[GenericRule] = []
    _hierarchy_defaults: Dict = {}

    @classmethod
    def get_adapter_type(cls) -> str:
        """Return the Adapter Type."""
        return cls.__name__.lower()

    @classmethod
    def get_hierarchy_defaults(cls) -> Dict:
        """Expose hierarchy defaults as class attribute."""
        return dict(cls._hierarchy_defaults)

    @classmethod
    def get_spec(cls) -> AdapterSpec:
        """Return the AdapterSpec of the dataset."""
        return AdapterSpec(name=cls.get_adapter_type(), rules=list(cls._rules), hierarchy=cls.get_hierarchy_defaults())


####################
# ADAPTERS         #
####################


class Identity(GenericAdapter):
    """Adapter leaving the stream untouched."""


class DBpedia(GenericAdapter):
    """DBpedia adapter: skips triples with empty objects and classes named with non-ASCII characters."""

    _rules: List[GenericRule] = [DropEmptyObject(), DropUnicodeClassNames()]


class YAGO(GenericAdapter):
    """YAGO adapter custom class."""

    _rules: List[GenericRule] = [DropEmptyObject()]
    _hierarchy_defaults = {"domain_of": [SCHEMA_DOMAIN_INCLUDES]}


class Freebase(GenericAdapter):
    """Freebase adapter.

    Freebase states membership as `class type.type.instance instance`; those triples are reversed into
    `instance type.object.type class`. Freebase has no single root class, so every parentless class is attached
    below a virtual `Thing`.
    """

    _rules: List[GenericRule] = [
        ReversePredicate(from_iri=FREEBASE_TYPE_INSTANCE, to_iri=FREEBASE_OBJECT_TYPE),
        RenamePredicate(from_iri=RDF_TYPE, to_iri=FREEBASE_OBJECT_TYPE),
        InjectVirtualRoot(root_iri=FREEBASE_THING),
    ]
    _hierarchy_defaults = {
        "instance_of": [FREEBASE_OBJECT_TYPE],
        "domain_of": [FREEBASE_PROPERTY_SCHEMA],
        "virtual_root_iri": FREEBASE_THING,
    }


def load_adapter_spec(path: Union[str, Path]) -> AdapterSpec:
    """Load an AdapterSpec from a TOML file with a `name` and one `[[rules]]` table per rule."""
    path = Path(path)
    try:
        content = toml.load(path)
    except (OSError, toml.TomlDecodeError) as exc:
        raise AdapterError(f"Unable to read adapter file {path}: {exc}") from exc

    content.setdefault("name", path.stem)
    try:
        return AdapterSpec(**content)
    except ValidationError as exc:
        raise AdapterError(f"Invalid adapter file {path}: {exc}") from exc
