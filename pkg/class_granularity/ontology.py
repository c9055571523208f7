"""Class hierarchy model: subclass DAG, roots, related classes and predicate sets."""
import logging
from collections import defaultdict
from enum import Enum
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple

import networkx as nx  # type: ignore
from pydantic import BaseModel, Extra, validator

from class_granularity.constants import (
    DEFAULT_VIRTUAL_ROOT,
    OWL_CLASS,
    RDF_TYPE,
    RDFS_CLASS,
    RDFS_DOMAIN,
    RDFS_SUBCLASS_OF,
    SCHEMA_DOMAIN_INCLUDES,
    WIKIDATA_INSTANCE_OF,
    WIKIDATA_SUBCLASS_OF,
)
from class_granularity.data import InternTable, TermId, Triple
from class_granularity.errors import CycleError, ModelError

if TYPE_CHECKING:
    from class_granularity.stats import ClassPredicateStats

logger = logging.getLogger(__name__)


class CyclePolicy(str, Enum):
    """What to do with subclass cycles."""

    REJECT = "reject"
    COLLAPSE = "collapse"


class PredicateMode(str, Enum):
    """Source of each class's defined predicates."""

    DECLARED = "declared"
    INDUCED = "induced"


class HierarchyConfig(BaseModel, extra=Extra.forbid):
    """Vocabulary and policies used to read a class hierarchy.

    Attributes:
        subclass_of: predicates stating `child subClassOf parent`.
        instance_of: predicates stating `instance type class`.
        domain_of: predicates stating `predicate domain class`, the source of declared predicates.
        class_types: metaclasses; `C type owl:Class` declares C without making owl:Class a class.
        cycle_policy: reject cycles, or collapse each strongly connected component into one class.
        root_iri (optional): pinned root; every other parentless class is attached below it.
        inject_virtual_root: add `virtual_root_iri` above the roots when more than one root exists.
        virtual_root_iri: IRI of the virtual root. A parentless class with this IRI is taken as a virtual root added
            upstream and is left out of schema counts.

    Examples:
        >>> HierarchyConfig.profile("wikidata").subclass_of
        ['http://www.wikidata.org/prop/direct/P279']
        >>> HierarchyConfig(subclass_of=[])
        Traceback (most recent call last):
        ...
        pydantic.error_wrappers.ValidationError: 1 validation error for HierarchyConfig
        subclass_of
          At least one subclass predicate is required (type=value_error)
    """

    subclass_of: List[str] = [RDFS_SUBCLASS_OF]
    instance_of: List[str] = [RDF_TYPE]
    domain_of: List[str] = [RDFS_DOMAIN, SCHEMA_DOMAIN_INCLUDES]
    class_types: List[str] = [OWL_CLASS, RDFS_CLASS]
    cycle_policy: CyclePolicy = CyclePolicy.COLLAPSE
    root_iri: Optional[str] = None
    inject_virtual_root: bool = False
    virtual_root_iri: str = DEFAULT_VIRTUAL_ROOT

    # pylint: disable=no-self-argument,no-self-use
    @validator("subclass_of")
    def validate_subclass_of(cls, value):
        """Validate that at least one subclass predicate is configured."""
        if not value:
            raise ValueError("At least one subclass predicate is required")
        return value

    @classmethod
    def profile(cls, name: str, **overrides) -> "HierarchyConfig":
        """Return a named vocabulary profile (`default` or `wikidata`)."""
        if name == "wikidata":
            base = {"subclass_of": [WIKIDATA_SUBCLASS_OF], "instance_of": [WIKIDATA_INSTANCE_OF]}
        elif name == "default":
            base = {}
        else:
            raise ModelError(f"{name} is not a known hierarchy profile. Only default, wikidata")
        return cls(**{**base, **overrides})


class RelatedClassSet(NamedTuple):
    """Direct superclasses and siblings of a class."""

    owner: TermId
    members: FrozenSet[TermId]


class DistinctPredicateSet(NamedTuple):
    """Predicates defined on a class and on none of its related classes."""

    owner: TermId
    predicates: FrozenSet[TermId]


class OntologyGraph:
    """Immutable class hierarchy.

    Edges point from child to parent. Safe to share between threads once built.
    """

    def __init__(
        self,
        classes: Iterable[TermId],
        edges: Iterable[Tuple[TermId, TermId]],
        declared_predicates: Dict[TermId, Set[TermId]],
        virtual_root: Optional[TermId] = None,
        aliases: Optional[Dict[TermId, TermId]] = None,
    ):
        """Build the graph from already-validated parts."""
        self.dag = nx.DiGraph()
        self.dag.add_nodes_from(classes)
        self.dag.add_edges_from(edges)
        self.classes: FrozenSet[TermId] = frozenset(self.dag.nodes)
        self.subclass_edges: FrozenSet[Tuple[TermId, TermId]] = frozenset(self.dag.edges)
        self.roots: FrozenSet[TermId] = frozenset(node for node in self.dag.nodes if self.dag.out_degree(node) == 0)
        self.virtual_root = virtual_root
        self.aliases: Dict[TermId, TermId] = dict(aliases or {})
        self.declared_predicates: Dict[TermId, FrozenSet[TermId]] = {
            class_id: frozenset(predicates) for class_id, predicates in declared_predicates.items() if predicates
        }
        self._ancestors: Dict[TermId, FrozenSet[TermId]] = {}

    def __repr__(self) -> str:
        """Short summary."""
        return f"OntologyGraph(classes={len(self.classes)}, edges={len(self.subclass_edges)}, roots={len(self.roots)})"

    def resolve(self, class_id: TermId) -> TermId:
        """Map a class collapsed out of a cycle to its representative."""
        return self.aliases.get(class_id, class_id)

    def check(self, class_id: TermId):
        """Raise ModelError for classes outside the ontology."""
        if class_id not in self.classes:
            raise ModelError(f"Unknown class id {class_id}")

    def parents(self, class_id: TermId) -> Set[TermId]:
        """Direct superclasses."""
        return set(self.dag.successors(class_id))

    def children(self, class_id: TermId) -> Set[TermId]:
        """Direct subclasses."""
        return set(self.dag.predecessors(class_id))

    def ancestors(self, class_id: TermId) -> FrozenSet[TermId]:
        """The class itself and all its transitive superclasses."""
        cached = self._ancestors.get(class_id)
        if cached is None:
            cached = frozenset(nx.descendants(self.dag, class_id)) | {class_id}
            self._ancestors[class_id] = cached
        return cached

    def is_root(self, class_id: TermId) -> bool:
        """Whether the class has no parents."""
        return class_id in self.roots

    def metric_classes(self) -> List[TermId]:
        """All non-root classes, the classes Class Granularity averages over."""
        return sorted(self.classes - self.roots)

    def schema_classes(self) -> FrozenSet[TermId]:
        """Classes of the ontology proper, without the synthesized virtual root."""
        if self.virtual_root is None:
            return self.classes
        return self.classes - {self.virtual_root}

    def schema_edges(self) -> FrozenSet[Tuple[TermId, TermId]]:
        """Subclass edges without those added towards the virtual root."""
        if self.virtual_root is None:
            return self.subclass_edges
        return frozenset(edge for edge in self.subclass_edges if edge[1] != self.virtual_root)


def _collapse_cycles(
    dag: nx.DiGraph, table: InternTable, policy: CyclePolicy
) -> Tuple[nx.DiGraph, Dict[TermId, TermId]]:
    """Reject or collapse subclass cycles, returning the acyclic graph and the alias map."""
    if nx.is_directed_acyclic_graph(dag):
        return dag, {}

    if policy == CyclePolicy.REJECT:
        cycle = [table.text(child) for child, _ in nx.find_cycle(dag)]
        raise CycleError(f"Subclass cycle detected: {' -> '.join(cycle)}", cycle=cycle)

    aliases: Dict[TermId, TermId] = {}
    for component in nx.strongly_connected_components(dag):
        if len(component) < 2:
            continue
        representative = min(component, key=table.text)
        logger.warning(
            "Collapsing subclass cycle of %s classes into %s: %s",
            len(component),
            table.text(representative),
            ", ".join(sorted(table.text(member) for member in component)),
        )
        for member in component:
            if member != representative:
                aliases[member] = representative

    collapsed = nx.DiGraph()
    collapsed.add_nodes_from(aliases.get(node, node) for node in dag.nodes)
    collapsed.add_edges_from(
        (aliases.get(child, child), aliases.get(parent, parent))
        for child, parent in dag.edges
        if aliases.get(child, child) != aliases.get(parent, parent)
    )
    return collapsed, aliases


def build_hierarchy(triples: Iterable[Triple], config: HierarchyConfig, table: InternTable) -> OntologyGraph:
    """Fold an ontology triple stream into an OntologyGraph.

    Classes are the subjects and objects of subclass triples, the subjects of metaclass declarations, the
    objects of other instance-of triples and the objects of domain declarations.
    """
    subclass_ids = {table.intern_iri(iri) for iri in config.subclass_of}
    instance_ids = {table.intern_iri(iri) for iri in config.instance_of}
    domain_ids = {table.intern_iri(iri) for iri in config.domain_of}
    metaclass_ids = {table.intern_iri(iri) for iri in config.class_types}

    dag = nx.DiGraph()
    declared: Dict[TermId, Set[TermId]] = defaultdict(set)
    for subject, predicate, obj in triples:
        if predicate in subclass_ids:
            dag.add_node(subject)
            dag.add_node(obj)
            if subject != obj:
                dag.add_edge(subject, obj)
        elif predicate in instance_ids:
            dag.add_node(subject if obj in metaclass_ids else obj)
        elif predicate in domain_ids:
            dag.add_node(obj)
            declared[obj].add(subject)

    dag, aliases = _collapse_cycles(dag, table, config.cycle_policy)
    if aliases:
        merged: Dict[TermId, Set[TermId]] = defaultdict(set)
        for class_id, predicates in declared.items():
            merged[aliases.get(class_id, class_id)] |= predicates
        declared = merged

    if config.root_iri:
        pinned = table.intern_iri(config.root_iri)
        pinned = aliases.get(pinned, pinned)
        dag.add_node(pinned)
        for parent in list(dag.successors(pinned)):
            logger.warning("Ignoring superclass %s of pinned root %s", table.text(parent), config.root_iri)
            dag.remove_edge(pinned, parent)
        for node in [node for node in dag.nodes if node != pinned and dag.out_degree(node) == 0]:
            dag.add_edge(node, pinned)

    virtual_root = None
    roots = [node for node in dag.nodes if dag.out_degree(node) == 0]
    upstream_root = table.lookup_iri(config.virtual_root_iri)
    if upstream_root in roots and config.root_iri != config.virtual_root_iri:
        # Already added to the stream, by an adapter rule
        virtual_root = upstream_root
        logger.debug("Using %s as the virtual root", config.virtual_root_iri)
    elif config.inject_virtual_root and len(roots) > 1:
        virtual_root = table.intern_iri(config.virtual_root_iri)
        dag.add_edges_from((root, virtual_root) for root in roots)
        logger.info("Injected virtual root %s above %s roots", config.virtual_root_iri, len(roots))

    graph = OntologyGraph(dag.nodes, dag.edges, declared, virtual_root=virtual_root, aliases=aliases)
    logger.info("Built class hierarchy: %s", graph)
    return graph


def related_classes(graph: OntologyGraph, class_id: TermId) -> RelatedClassSet:
    """Direct superclasses plus every class sharing at least one direct superclass."""
    graph.check(class_id)
    if graph.is_root(class_id):
        raise ModelError(f"Related classes are undefined for root class id {class_id}")

    members: Set[TermId] = set()
    for parent in graph.parents(class_id):
        members.add(parent)
        members |= graph.children(parent)
    members.discard(class_id)
    return RelatedClassSet(class_id, frozenset(members))


def defined_predicates(
    graph: OntologyGraph,
    class_id: TermId,
    mode: PredicateMode = PredicateMode.DECLARED,
    stats: Optional["ClassPredicateStats"] = None,
) -> FrozenSet[TermId]:
    """Predicates a class defines, from ontology declarations or from its directly typed instances."""
    graph.check(class_id)
    if PredicateMode(mode) == PredicateMode.DECLARED:
        return graph.declared_predicates.get(class_id, frozenset())
    if stats is None:
        raise ModelError("Induced predicate definitions require instance statistics")
    return frozenset(stats.direct_predicates.get(class_id, frozenset()))


def distinct_predicates(
    graph: OntologyGraph,
    class_id: TermId,
    mode: PredicateMode = PredicateMode.DECLARED,
    stats: Optional["ClassPredicateStats"] = None,
) -> DistinctPredicateSet:
    """Defined predicates of a class that none of its related classes define."""
    own = defined_predicates(graph, class_id, mode, stats)
    shared: Set[TermId] = set()
    for related in related_classes(graph, class_id).members:
        shared |= defined_predicates(graph, related, mode, stats)
    return DistinctPredicateSet(class_id, frozenset(own - shared))
