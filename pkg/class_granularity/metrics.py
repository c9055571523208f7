"""Class Granularity metrics: IDPP, IDPPA, Class Granularity and baseline schema metrics.

All values are exact ratios; decimals only appear when reports are rendered.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, Extra

from class_granularity.data import InternTable, TermId
from class_granularity.errors import MetricError
from class_granularity.ontology import (
    OntologyGraph,
    PredicateMode,
    defined_predicates,
    distinct_predicates,
    related_classes,
)
from class_granularity.output import (
    ClassResult,
    CompanionStats,
    DatasetResult,
    ObservedPredicate,
    PredicateResult,
    Ratio,
)
from class_granularity.stats import ClassPredicateStats, MembershipIndex

logger = logging.getLogger(__name__)


class TiePolicy(str, Enum):
    """How an exact tie between a class's IPP and its related maximum is scored.

    - "keep-on-tie": the class keeps its IPP when no related class is strictly higher.
    - "zero-on-tie": the class keeps its IPP only when it is strictly higher than every related class.
    """

    KEEP_ON_TIE = "keep-on-tie"
    ZERO_ON_TIE = "zero-on-tie"


class EmptyClassPolicy(str, Enum):
    """Treatment of classes without instances."""

    IDPPA_ZERO = "idppa-zero"
    EXCLUDE_FROM_AVERAGE = "exclude-from-average"


class MetricConfig(BaseModel, extra=Extra.forbid):
    """Metric options.

    Attributes:
        tie_policy: see `TiePolicy` (default keep-on-tie).
        empty_class_policy: see `EmptyClassPolicy` (default idppa-zero).
        predicate_definition_mode (optional): declared or induced; when unset, declared if the ontology declares any
            predicate, induced otherwise.

    Examples:
        >>> MetricConfig().tie_policy.value
        'keep-on-tie'
        >>> MetricConfig(tie_policy="zero-on-tie", empty_class_policy="exclude-from-average").empty_class_policy.value
        'exclude-from-average'
    """

    tie_policy: TiePolicy = TiePolicy.KEEP_ON_TIE
    empty_class_policy: EmptyClassPolicy = EmptyClassPolicy.IDPPA_ZERO
    predicate_definition_mode: Optional[PredicateMode] = None

    def resolve_mode(self, graph: OntologyGraph) -> PredicateMode:
        """Effective predicate definition mode for a graph."""
        if self.predicate_definition_mode is not None:
            return self.predicate_definition_mode
        return PredicateMode.DECLARED if graph.declared_predicates else PredicateMode.INDUCED


def idpp(ipp_class: Ratio, max_related_ipp: Ratio, config: Optional[MetricConfig] = None) -> Ratio:
    """IDPP of one distinct predicate: its IPP, or 0 when a related class outranks it.

    Examples:
        >>> idpp(Ratio.of(1, 2), Ratio.of(4, 5))
        Ratio(numerator=0, denominator=1, decimal=None)
        >>> idpp(Ratio.of(3, 6), Ratio.of(1, 2))
        Ratio(numerator=3, denominator=6, decimal=None)
        >>> idpp(Ratio.of(3, 6), Ratio.of(1, 2), MetricConfig(tie_policy="zero-on-tie"))
        Ratio(numerator=0, denominator=1, decimal=None)
    """
    config = config or MetricConfig()
    if config.tie_policy == TiePolicy.KEEP_ON_TIE:
        kept = max_related_ipp <= ipp_class
    else:
        kept = ipp_class > max_related_ipp
    return ipp_class if kept else Ratio.zero()


def idppa(idpp_values: List[Ratio], n_dp: int) -> Ratio:
    """Mean IDPP over a class's distinct predicates, exactly 0 when it has none.

    Examples:
        >>> str(idppa([Ratio.of(2, 2), Ratio.of(1, 2), Ratio.of(1, 2)], 3))
        '2/3'
        >>> str(idppa([], 0))
        '0/1'
    """
    if len(idpp_values) != n_dp:
        raise MetricError(f"Expected {n_dp} IDPP values, got {len(idpp_values)}")
    if n_dp == 0:
        return Ratio.zero()
    return Ratio.from_fraction(sum((value.value for value in idpp_values), Fraction(0)) / n_dp)


def _class_ipp(stats: ClassPredicateStats, membership: MembershipIndex, class_id: TermId, predicate: TermId) -> Ratio:
    """IPP with an empty class scoring 0, so it never outranks anything."""
    total = membership.count(class_id)
    if total == 0:
        return Ratio.zero()
    return Ratio.of(stats.count(class_id, predicate), total)


class _ClassEvaluator:  # pylint: disable=too-few-public-methods
    """Evaluates ClassResults against one consistent set of inputs."""

    def __init__(self, graph, membership, stats, config, table, mode):
        self.graph = graph
        self.membership = membership
        self.stats = stats
        self.config = config
        self.mode = mode
        self.sort_key = table.text if table is not None else int

    def __call__(self, class_id: TermId) -> ClassResult:
        graph, membership, stats = self.graph, self.membership, self.stats
        instances = membership.count(class_id)
        related = related_classes(graph, class_id).members
        distinct = distinct_predicates(graph, class_id, self.mode, stats).predicates

        per_predicate = []
        for predicate in sorted(distinct, key=self.sort_key):
            own = _class_ipp(stats, membership, class_id, predicate)
            max_related = max(
                (_class_ipp(stats, membership, other, predicate) for other in related), default=Ratio.zero()
            )
            per_predicate.append(
                PredicateResult(
                    predicate=predicate,
                    ipp=own,
                    max_related_ipp=max_related,
                    idpp=idpp(own, max_related, self.config) if instances else Ratio.zero(),
                )
            )

        observed = [
            ObservedPredicate(predicate=predicate, ipp=_class_ipp(stats, membership, class_id, predicate))
            for predicate in sorted(stats.all_predicates.get(class_id, ()), key=self.sort_key)
        ]
        empty = instances == 0
        return ClassResult(
            class_id=class_id,
            n_dp=len(distinct),
            per_predicate=per_predicate,
            observed=observed,
            idppa=idppa([result.idpp for result in per_predicate], len(distinct)),
            instance_count=instances,
            empty=empty,
            included=not (empty and self.config.empty_class_policy == EmptyClassPolicy.EXCLUDE_FROM_AVERAGE),
        )


def class_granularity(
    graph: OntologyGraph,
    membership: MembershipIndex,
    stats: ClassPredicateStats,
    config: Optional[MetricConfig] = None,
    table: Optional[InternTable] = None,
    workers: int = 1,
) -> DatasetResult:
    """Average IDPPA over every non-root class; 0 when only the root exists.

    Class results are ordered by class IRI when `table` is given, whatever the number of workers.
    """
    config = config or MetricConfig()
    unknown = {class_id for class_id, _ in stats.with_predicate_count} - graph.classes
    unknown |= set(membership.class_instance_count) - graph.classes
    if unknown:
        raise MetricError(f"Statistics reference {len(unknown)} classes unknown to the ontology")

    mode = config.resolve_mode(graph)
    evaluate = _ClassEvaluator(graph, membership, stats, config, table, mode)
    classes = sorted(graph.metric_classes(), key=evaluate.sort_key)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        class_results = list(executor.map(evaluate, classes))

    included = [result.idppa.value for result in class_results if result.included]
    if included:
        granularity = Ratio.from_fraction(sum(included, Fraction(0)) / len(included))
    else:
        granularity = Ratio.zero()
    logger.info(
        "Class Granularity %s over %s classes (%s mode, %s)",
        granularity,
        len(included),
        mode.value,
        config.tie_policy.value,
    )
    return DatasetResult(
        class_granularity=granularity,
        n_classes=len(graph.classes),
        class_results=class_results,
        companion=basic_stats(graph, membership, stats, stats.triple_count, mode),
    )


def attribute_richness(
    graph: OntologyGraph, mode: PredicateMode = PredicateMode.DECLARED, stats: Optional[ClassPredicateStats] = None
) -> Ratio:
    """Average number of predicates defined per class."""
    classes = graph.schema_classes()
    if not classes:
        raise MetricError("Attribute richness is undefined for an empty ontology")
    total = sum(len(defined_predicates(graph, class_id, mode, stats)) for class_id in classes)
    return Ratio.of(total, len(classes))


def inheritance_richness(graph: OntologyGraph) -> Ratio:
    """Average number of subclasses per class."""
    classes = graph.schema_classes()
    if not classes:
        raise MetricError("Inheritance richness is undefined for an empty ontology")
    return Ratio.of(len(graph.schema_edges()), len(classes))


def basic_stats(
    graph: OntologyGraph,
    membership: MembershipIndex,
    stats: ClassPredicateStats,
    triple_count: int,
    mode: PredicateMode = PredicateMode.DECLARED,
) -> CompanionStats:
    """Class, predicate, instance and triple counts plus the baseline richness metrics."""
    class_count = len(graph.schema_classes())
    predicate_count = len(stats.used_predicates())
    if class_count:
        return CompanionStats(
            attribute_richness=attribute_richness(graph, mode, stats),
            inheritance_richness=inheritance_richness(graph),
            class_count=class_count,
            predicate_count=predicate_count,
            instance_count=membership.instance_count,
            triple_count=triple_count,
            avg_predicates_per_class=Ratio.of(predicate_count, class_count),
        )
    return CompanionStats(
        attribute_richness=Ratio.zero(),
        inheritance_richness=Ratio.zero(),
        class_count=0,
        predicate_count=predicate_count,
        instance_count=membership.instance_count,
        triple_count=triple_count,
        avg_predicates_per_class=Ratio.zero(),
    )
