"""Property-based tests of Class Granularity against a brute-force oracle."""
from fractions import Fraction
from typing import Dict, List, NamedTuple, Set, Tuple

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from class_granularity.constants import RDF_TYPE, RDFS_DOMAIN, RDFS_SUBCLASS_OF
from class_granularity.data import InternTable, Triple
from class_granularity.metrics import EmptyClassPolicy, MetricConfig, TiePolicy, class_granularity
from class_granularity.ontology import HierarchyConfig, PredicateMode, build_hierarchy
from class_granularity.stats import build_membership, build_predicate_stats

EX = "http://example.org/"
PREDICATES = [EX + f"p{index}" for index in range(10)]

PROPERTY_SETTINGS = settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])


class RandomKG(NamedTuple):
    """A small knowledge graph: class 0 is the only root."""

    parents: Dict[int, Set[int]]
    declared: Dict[int, Set[str]]
    instances: List[Tuple[Set[int], Set[str]]]


@st.composite
def random_kgs(draw) -> RandomKG:
    """Random DAG of classes with declared predicates and typed instances."""
    n_classes = draw(st.integers(min_value=2, max_value=8))
    parents = {0: set()}
    for class_index in range(1, n_classes):
        parents[class_index] = set(
            draw(st.lists(st.integers(0, class_index - 1), min_size=1, max_size=2, unique=True))
        )
    declared = {
        class_index: set(draw(st.lists(st.sampled_from(PREDICATES), max_size=3, unique=True)))
        for class_index in range(n_classes)
    }
    instances = draw(
        st.lists(
            st.tuples(
                st.sets(st.integers(0, n_classes - 1), min_size=1, max_size=2),
                st.sets(st.sampled_from(PREDICATES), max_size=5),
            ),
            max_size=30,
        )
    )
    return RandomKG(parents, declared, instances)


def class_iri(class_index: int) -> str:
    """IRI of a generated class."""
    return f"{EX}C{class_index}"


def ontology_rows(kg: RandomKG) -> List[Tuple[str, str, str]]:
    """Subclass and domain triples of a generated graph."""
    rows = [
        (class_iri(child), RDFS_SUBCLASS_OF, class_iri(parent))
        for child, parents in kg.parents.items()
        for parent in sorted(parents)
    ]
    rows += [
        (predicate, RDFS_DOMAIN, class_iri(owner))
        for owner, predicates in kg.declared.items()
        for predicate in sorted(predicates)
    ]
    return rows


def data_rows(kg: RandomKG) -> List[Tuple[str, str, str]]:
    """Type and attribute triples of a generated graph."""
    rows = []
    for index, (types, predicates) in enumerate(kg.instances):
        instance = f"{EX}i{index}"
        rows += [(instance, RDF_TYPE, class_iri(class_index)) for class_index in sorted(types)]
        rows += [(instance, predicate, EX + "value") for predicate in sorted(predicates)]
    return rows


def library_granularity(kg: RandomKG, config: MetricConfig, data=None) -> Fraction:
    """Class Granularity computed by the library."""
    hierarchy = HierarchyConfig()
    table = InternTable()

    def intern(rows):
        return [Triple(*(table.intern_iri(iri) for iri in row)) for row in rows]

    graph = build_hierarchy(intern(ontology_rows(kg)), hierarchy, table)
    triples = intern(data if data is not None else data_rows(kg))
    membership = build_membership(triples, graph, hierarchy, table)
    stats = build_predicate_stats(triples, membership, graph, hierarchy, table)
    return class_granularity(graph, membership, stats, config, table).class_granularity.value


def oracle_granularity(kg: RandomKG, config: MetricConfig) -> Fraction:
    """Class Granularity computed straight from the definitions."""
    classes = list(kg.parents)

    def ancestors(class_index: int) -> Set[int]:
        result = {class_index}
        for parent in kg.parents[class_index]:
            result |= ancestors(parent)
        return result

    closures = [set().union(*(ancestors(c) for c in types)) for types, _ in kg.instances]

    def count(class_index: int) -> int:
        return sum(1 for closure in closures if class_index in closure)

    def ipp(class_index: int, predicate: str) -> Fraction:
        total = count(class_index)
        if total == 0:
            return Fraction(0)
        with_predicate = sum(
            1 for closure, (_, preds) in zip(closures, kg.instances) if class_index in closure and predicate in preds
        )
        return Fraction(with_predicate, total)

    def defined(class_index: int) -> Set[str]:
        if config.predicate_definition_mode == PredicateMode.DECLARED:
            return kg.declared[class_index]
        return set().union(*(preds for types, preds in kg.instances if class_index in types))

    scores = []
    for class_index in classes:
        if not kg.parents[class_index]:
            continue
        related: Set[int] = set()
        for parent in kg.parents[class_index]:
            related |= {parent} | {child for child in classes if parent in kg.parents[child]}
        related.discard(class_index)
        distinct = defined(class_index) - set().union(*(defined(other) for other in related))

        empty = count(class_index) == 0
        if empty and config.empty_class_policy == EmptyClassPolicy.EXCLUDE_FROM_AVERAGE:
            continue
        values = []
        for predicate in distinct:
            own = ipp(class_index, predicate)
            highest = max((ipp(other, predicate) for other in related), default=Fraction(0))
            if config.tie_policy == TiePolicy.KEEP_ON_TIE:
                kept = own >= highest
            else:
                kept = own > highest
            values.append(own if kept and not empty else Fraction(0))
        scores.append(sum(values, Fraction(0)) / len(values) if values else Fraction(0))
    return sum(scores, Fraction(0)) / len(scores) if scores else Fraction(0)


def metric_config(
    tie_policy=TiePolicy.KEEP_ON_TIE, empty_class_policy=EmptyClassPolicy.IDPPA_ZERO, mode=PredicateMode.DECLARED
) -> MetricConfig:
    """Metric options, declared mode unless told otherwise."""
    return MetricConfig(tie_policy=tie_policy, empty_class_policy=empty_class_policy, predicate_definition_mode=mode)


@pytest.mark.parametrize("mode", list(PredicateMode))
@pytest.mark.parametrize("tie_policy", list(TiePolicy))
@pytest.mark.parametrize("empty_class_policy", list(EmptyClassPolicy))
@PROPERTY_SETTINGS
@given(kg=random_kgs())
def test_matches_oracle(kg, tie_policy, empty_class_policy, mode):
    """Tests the library agrees with the brute-force definitions."""
    config = metric_config(tie_policy, empty_class_policy, mode)
    assert library_granularity(kg, config) == oracle_granularity(kg, config)


@PROPERTY_SETTINGS
@given(kg=random_kgs())
def test_bounded(kg):
    """Tests Class Granularity stays within [0, 1]."""
    assert 0 <= library_granularity(kg, metric_config()) <= 1


@PROPERTY_SETTINGS
@given(kg=random_kgs())
def test_duplicate_triples_do_not_matter(kg):
    """Tests repeating every data triple leaves the score unchanged."""
    config = metric_config()
    rows = data_rows(kg)
    assert library_granularity(kg, config, rows + rows) == library_granularity(kg, config, rows)


@PROPERTY_SETTINGS
@given(kg=random_kgs(), seed=st.randoms(use_true_random=False))
def test_triple_order_does_not_matter(kg, seed):
    """Tests shuffling the data triples leaves the score unchanged."""
    config = metric_config()
    rows = data_rows(kg)
    shuffled = list(rows)
    seed.shuffle(shuffled)
    assert library_granularity(kg, config, shuffled) == library_granularity(kg, config, rows)


@PROPERTY_SETTINGS
@given(kg=random_kgs(), data=st.data())
def test_dead_schema_never_raises_the_score(kg, data):
    """Tests adding a subclass without instances or declarations."""
    parent = data.draw(st.sampled_from(sorted(kg.parents)))
    dead = len(kg.parents)
    extended = RandomKG({**kg.parents, dead: {parent}}, {**kg.declared, dead: set()}, kg.instances)

    zero = metric_config()
    assert library_granularity(extended, zero) <= library_granularity(kg, zero)
    exclude = metric_config(empty_class_policy=EmptyClassPolicy.EXCLUDE_FROM_AVERAGE)
    assert library_granularity(extended, exclude) == library_granularity(kg, exclude)


@pytest.mark.parametrize("copies", [2, 5])
@pytest.mark.parametrize("mode", list(PredicateMode))
@PROPERTY_SETTINGS
@given(kg=random_kgs())
def test_cloned_instances_do_not_matter(kg, copies, mode):
    """Tests repeating every instance under fresh IRIs leaves the score unchanged."""
    config = metric_config(mode=mode)
    cloned = RandomKG(kg.parents, kg.declared, kg.instances * copies)
    assert library_granularity(cloned, config) == library_granularity(kg, config)
