"""Definition of the adapter Rules that normalize dataset-specific triple streams."""
import logging
from collections import Counter
from typing import Callable, Dict, FrozenSet, List, Optional, Set, Type

from pydantic import BaseModel, Extra, validator
from pydantic.error_wrappers import ValidationError

from class_granularity.constants import DEFAULT_CLASS_NAME_CHARS
from class_granularity.data import InternTable, TermId, TermKind, Triple
from class_granularity.errors import AdapterError
from class_granularity.ontology import HierarchyConfig

logger = logging.getLogger(__name__)


class AdapterContext:
    """Per-stream state shared by the rules of one adapter run.

    Rules are configuration and stay immutable; anything a rule accumulates while a stream flows lives here,
    keyed by the rule instance.
    """

    def __init__(self, table: InternTable, hierarchy: Optional[HierarchyConfig] = None):
        """Resolve the hierarchy vocabulary against the intern table."""
        hierarchy = hierarchy or HierarchyConfig()
        self.table = table
        self.subclass_of: FrozenSet[TermId] = frozenset(table.intern_iri(iri) for iri in hierarchy.subclass_of)
        self.instance_of: FrozenSet[TermId] = frozenset(table.intern_iri(iri) for iri in hierarchy.instance_of)
        self.class_types: FrozenSet[TermId] = frozenset(table.intern_iri(iri) for iri in hierarchy.class_types)
        self.subclass_predicate = table.intern_iri(hierarchy.subclass_of[0])
        self.dropped: Counter = Counter()
        self.emitted = 0
        self._state: Dict[int, object] = {}

    def state(self, rule: "GenericRule", factory: Callable[[], object]):
        """Return the state of `rule`, creating it on first use."""
        key = id(rule)
        if key not in self._state:
            self._state[key] = factory()
        return self._state[key]

    def class_positions(self, triple: Triple) -> List[TermId]:
        """Term ids standing for classes in a hierarchy triple, empty for any other triple."""
        subject, predicate, obj = triple
        if predicate in self.subclass_of:
            return [subject, obj]
        if predicate in self.instance_of:
            if obj in self.class_types:
                return [subject]
            return [obj]
        return []


class GenericRule(BaseModel, extra=Extra.forbid):
    """Base class for the adapter Rules.

    There are 2 hooks available, to be implemented by custom `Rules`:
        process_hook: receives one triple and returns it, a rewritten triple, or None to drop it.
        post_process_hook (optional): called once at end of stream, returns synthetic triples to append.

    Attributes:
        _kind: name used for the rule in config files.
        _stateless: whether the rule keeps no per-stream state, so streams may be split and adapted per file.
    """

    _kind: str = "generic"
    _stateless: bool = True

    @classmethod
    def get_kind(cls) -> str:
        """Expose the rule kind."""
        return cls._kind

    @classmethod
    def is_stateless(cls) -> bool:
        """Expose whether the rule can run on split streams."""
        return cls._stateless

    def to_config(self) -> Dict:
        """Rule as a config-file entry."""
        return {"kind": self.get_kind(), **self.dict()}

    def process_hook(self, triple: Triple, context: AdapterContext) -> Optional[Triple]:
        """Rewrite or drop one triple."""
        raise NotImplementedError

    def post_process_hook(self, context: AdapterContext) -> List[Triple]:  # pylint: disable=unused-argument
        """Emit synthetic triples at end of stream."""
        return []


class DropEmptyObject(GenericRule):
    """Drop triples whose object is the empty IRI or an empty literal."""

    _kind = "drop-empty-object"

    def process_hook(self, triple, context):
        """Drop empty objects."""
        if context.table.term(triple.object).is_empty:
            return None
        return triple


class DropUnicodeClassNames(GenericRule):
    """Drop hierarchy triples naming a class with characters outside `allowed_chars`.

    Attributes:
        allowed_chars: characters a class IRI may contain. Default: printable ASCII allowed in IRIs.
    """

    _kind = "drop-unicode-class-names"

    allowed_chars: str = DEFAULT_CLASS_NAME_CHARS

    # pylint: disable=no-self-argument,no-self-use
    @validator("allowed_chars")
    def validate_allowed_chars(cls, value):
        """Validate the allowed set is not empty."""
        if not value:
            raise ValueError("The allowed character set cannot be empty")
        return value

    def process_hook(self, triple, context):
        """Drop triples with disallowed class names."""
        allowed = context.state(self, lambda: frozenset(self.allowed_chars))
        for class_id in context.class_positions(triple):
            term = context.table.term(class_id)
            if term.kind == TermKind.IRI and not set(term.text) <= allowed:
                return None
        return triple


class _PredicateRewrite(GenericRule):
    """Common fields of the predicate rewriting rules."""

    from_iri: str
    to_iri: str

    def _ids(self, context: AdapterContext):
        table = context.table
        return context.state(self, lambda: (table.intern_iri(self.from_iri), table.intern_iri(self.to_iri)))


class ReversePredicate(_PredicateRewrite):
    """Swap subject and object of `from_iri` triples and rewrite their predicate to `to_iri`."""

    _kind = "reverse-predicate"

    def process_hook(self, triple, context):
        """Reverse matching triples; literal objects cannot become subjects and are dropped."""
        from_id, to_id = self._ids(context)
        if triple.predicate != from_id:
            return triple
        if context.table.term(triple.object).kind == TermKind.LITERAL:
            logger.debug("Dropping %s triple with literal object", self.from_iri)
            return None
        return Triple(triple.object, to_id, triple.subject)


class RenamePredicate(_PredicateRewrite):
    """Rewrite the predicate of `from_iri` triples to `to_iri`."""

    _kind = "rename-predicate"

    def process_hook(self, triple, context):
        """Rename matching predicates."""
        from_id, to_id = self._ids(context)
        if triple.predicate != from_id:
            return triple
        return Triple(triple.subject, to_id, triple.object)


class _RootTracker:  # pylint: disable=too-few-public-methods
    def __init__(self):
        self.classes: Set[TermId] = set()
        self.parented: Set[TermId] = set()


class InjectVirtualRoot(GenericRule):
    """Attach every class without a superclass below `root_iri` once the stream ends.

    Attributes:
        root_iri: IRI of the synthetic root class.
    """

    _kind = "inject-virtual-root"
    _stateless = False

    root_iri: str

    def process_hook(self, triple, context):
        """Track classes and the classes that have a superclass."""
        tracker = context.state(self, _RootTracker)
        if triple.predicate in context.subclass_of and triple.subject != triple.object:
            tracker.parented.add(triple.subject)
        tracker.classes.update(context.class_positions(triple))
        return triple

    def post_process_hook(self, context):
        """Emit `C subClassOf root` for each parentless class, in IRI order."""
        tracker = context.state(self, _RootTracker)
        root = context.table.intern_iri(self.root_iri)
        orphans = sorted(tracker.classes - tracker.parented - {root}, key=context.table.text)
        logger.info("Attaching %s parentless classes below %s", len(orphans), self.root_iri)
        return [Triple(class_id, context.subclass_predicate, root) for class_id in orphans]


SUPPORTED_RULES: List[Type[GenericRule]] = [
    DropEmptyObject,
    DropUnicodeClassNames,
    ReversePredicate,
    RenamePredicate,
    InjectVirtualRoot,
]


def get_rule_class(kind: str) -> Type[GenericRule]:
    """Returns the Rule class for a rule kind."""
    for rule_class in SUPPORTED_RULES:
        if rule_class.get_kind() == kind:
            return rule_class
    raise AdapterError(
        f"{kind} is not a known adapter rule. Only {', '.join(rule.get_kind() for rule in SUPPORTED_RULES)}"
    )


def build_rule(entry: Dict) -> GenericRule:
    """Build a Rule from a config-file entry such as `{"kind": "rename-predicate", "from_iri": ..., "to_iri": ...}`."""
    entry = dict(entry)
    kind = entry.pop("kind", None)
    if not kind:
        raise AdapterError(f"Adapter rule without kind: {entry}")
    rule_class = get_rule_class(kind)
    try:
        return rule_class(**entry)
    except ValidationError as exc:
        raise AdapterError(f"Invalid {kind} rule: {exc}") from exc
