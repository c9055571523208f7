"""Instance statistics: transitive class membership and per-(class, predicate) instance counts.

Statistics are built in two streaming passes over the data dumps. The first pass collects direct type assertions
so that each instance's transitive class set is known before the second pass counts predicate usage.
"""
import heapq
import logging
import os
import tempfile
from array import array
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from pydantic import BaseModel, Extra

from class_granularity.constants import PROGRESS_EVERY, SCHEMA_VERSION
from class_granularity.data import InternTable, Term, TermId, TermKind, Triple
from class_granularity.errors import EmptyClassError, StatsError
from class_granularity.ontology import HierarchyConfig, OntologyGraph
from class_granularity.output import Ratio

logger = logging.getLogger(__name__)


class MembershipDiagnostics(BaseModel, extra=Extra.forbid):
    """Counts describing what instance filtering removed."""

    type_assertions: int = 0
    unknown_class_assertions: int = 0
    dropped_instances: int = 0


class MembershipIndex:
    """Direct types of every kept instance and the size of each class's transitive extension."""

    def __init__(
        self,
        graph: OntologyGraph,
        direct_types: Dict[TermId, FrozenSet[TermId]],
        class_instance_count: Dict[TermId, int],
        diagnostics: Optional[MembershipDiagnostics] = None,
        instance_count: Optional[int] = None,
    ):
        """Store the index; `instance_count` is only given when `direct_types` was not kept (snapshots)."""
        self.graph = graph
        self.direct_types = direct_types
        self.class_instance_count = class_instance_count
        self.diagnostics = diagnostics or MembershipDiagnostics()
        self.instance_count = len(direct_types) if instance_count is None else instance_count
        self._closures: Dict[FrozenSet[TermId], FrozenSet[TermId]] = {}

    def closure(self, types: FrozenSet[TermId]) -> FrozenSet[TermId]:
        """Transitive class set of a set of direct types, cached since many instances share one."""
        cached = self._closures.get(types)
        if cached is None:
            cached = frozenset().union(*(self.graph.ancestors(class_id) for class_id in types))
            self._closures[types] = cached
        return cached

    def classes_of(self, instance: TermId) -> FrozenSet[TermId]:
        """Transitive class set of a kept instance (empty for anything else)."""
        types = self.direct_types.get(instance)
        return self.closure(types) if types else frozenset()

    def count(self, class_id: TermId) -> int:
        """Number of instances in the transitive extension of a class."""
        return self.class_instance_count.get(class_id, 0)


def build_membership(
    triples: Iterable[Triple], graph: OntologyGraph, config: HierarchyConfig, table: InternTable
) -> MembershipIndex:
    """Collect direct types from instance-of triples whose object is an ontology class and propagate them upward.

    Instances none of whose types belong to the ontology are dropped and reported, never raised.
    """
    instance_ids = {table.intern_iri(iri) for iri in config.instance_of}
    direct: Dict[TermId, Set[TermId]] = defaultdict(set)
    rejected: Set[TermId] = set()
    diagnostics = MembershipDiagnostics()

    for subject, predicate, obj in triples:
        if predicate not in instance_ids:
            continue
        diagnostics.type_assertions += 1
        class_id = graph.resolve(obj)
        if class_id in graph.classes:
            direct[subject].add(class_id)
        else:
            diagnostics.unknown_class_assertions += 1
            rejected.add(subject)

    direct_types = {instance: frozenset(types) for instance, types in direct.items()}
    diagnostics.dropped_instances = len(rejected.difference(direct_types))
    if diagnostics.unknown_class_assertions:
        logger.warning(
            "Ignored %s type assertions to classes outside the ontology, dropping %s instances",
            diagnostics.unknown_class_assertions,
            diagnostics.dropped_instances,
        )

    index = MembershipIndex(graph, direct_types, {}, diagnostics)
    counts: Counter = Counter()
    for types in direct_types.values():
        counts.update(index.closure(types))
    index.class_instance_count = dict(counts)
    logger.info("Built membership for %s instances over %s classes", index.instance_count, len(counts))
    return index


class ClassPredicateStats:
    """Per-(class, predicate) counts of distinct instances bearing the predicate in subject position."""

    def __init__(
        self,
        with_predicate_count: Dict[Tuple[TermId, TermId], int],
        direct_predicates: Dict[TermId, Set[TermId]],
        triple_count: int = 0,
    ):
        """Store counts and derive each class's in-use predicates."""
        self.with_predicate_count = with_predicate_count
        self.direct_predicates = direct_predicates
        self.triple_count = triple_count
        self.all_predicates: Dict[TermId, Set[TermId]] = defaultdict(set)
        for (class_id, predicate), count in with_predicate_count.items():
            if count > 0:
                self.all_predicates[class_id].add(predicate)

    def count(self, class_id: TermId, predicate: TermId) -> int:
        """Distinct instances of the class using the predicate."""
        return self.with_predicate_count.get((class_id, predicate), 0)

    def used_predicates(self) -> Set[TermId]:
        """All predicates used by at least one kept instance."""
        used: Set[TermId] = set()
        for predicates in self.all_predicates.values():
            used |= predicates
        return used


class PredicateStatsBuilder:
    """Second-pass accumulator.

    Each instance's predicate set is gathered in the shard owning it (by subject id modulo the shard count), then
    folded once into all of the instance's classes. Shards own disjoint instances, so their class counters merge by
    addition and the result does not depend on sharding or on triple order.
    """

    def __init__(self, membership: MembershipIndex, excluded_predicates: Iterable[TermId] = (), shards: int = 1):
        """Prepare empty shards."""
        self.membership = membership
        self.excluded = frozenset(excluded_predicates)
        self.shards: List[Dict[TermId, Set[TermId]]] = [{} for _ in range(max(1, shards))]
        self.triple_count = 0
        self._counts: Counter = Counter()
        self._direct: Dict[TermId, Set[TermId]] = defaultdict(set)
        self._folded: Set[TermId] = set()

    def _keep(self, subject: TermId, predicate: TermId) -> bool:
        return predicate not in self.excluded and subject in self.membership.direct_types

    def consume(self, triples: Iterable[Triple]) -> "PredicateStatsBuilder":
        """Accumulate predicate sets of kept instances in any triple order."""
        shards = self.shards
        n_shards = len(shards)
        for subject, predicate, _ in triples:
            if not self._keep(subject, predicate):
                continue
            self.triple_count += 1
            shards[subject % n_shards].setdefault(subject, set()).add(predicate)
        return self

    def consume_grouped(self, triples: Iterable[Triple]) -> "PredicateStatsBuilder":
        """Fold each instance as soon as its contiguous run of triples ends.

        Beyond the membership index, only the ids of already folded instances are kept, to reject input where an
        instance's triples are not contiguous. Subjects that are not instances contribute nothing and may repeat.
        """
        current: Optional[TermId] = None
        predicates: Set[TermId] = set()
        for position, (subject, predicate, _) in enumerate(triples, 1):
            if subject != current:
                if current is not None:
                    if current in self.membership.direct_types:
                        self._folded.add(current)
                    self._fold(current, predicates)
                if subject in self._folded:
                    raise StatsError(f"Input is not grouped by subject: subject id {subject} reappears")
                current, predicates = subject, set()
            if self._keep(subject, predicate):
                self.triple_count += 1
                predicates.add(predicate)
            if position % PROGRESS_EVERY == 0:
                logger.debug("Grouped fold: %s triples", position)
        if current is not None:
            self._fold(current, predicates)
        return self

    def _fold(self, instance: TermId, predicates: Set[TermId], counts: Optional[Counter] = None, direct=None):
        counts = self._counts if counts is None else counts
        direct = self._direct if direct is None else direct
        if not predicates:
            return
        for class_id in self.membership.classes_of(instance):
            for predicate in predicates:
                counts[(class_id, predicate)] += 1
        for class_id in self.membership.direct_types.get(instance, ()):
            direct[class_id] |= predicates

    def merge(self, other: "PredicateStatsBuilder") -> "PredicateStatsBuilder":
        """Absorb another builder's unfolded shards (same shard count) and counters."""
        if len(other.shards) != len(self.shards):
            raise StatsError("Cannot merge builders with different shard counts")
        for mine, theirs in zip(self.shards, other.shards):
            for instance, predicates in theirs.items():
                mine.setdefault(instance, set()).update(predicates)
        self.triple_count += other.triple_count
        self._counts.update(other._counts)  # pylint: disable=protected-access
        for class_id, predicates in other._direct.items():  # pylint: disable=protected-access
            self._direct[class_id] |= predicates
        return self

    def _fold_shard(self, shard: Dict[TermId, Set[TermId]]) -> Tuple[Counter, Dict[TermId, Set[TermId]]]:
        counts: Counter = Counter()
        direct: Dict[TermId, Set[TermId]] = defaultdict(set)
        for instance, predicates in shard.items():
            self._fold(instance, predicates, counts, direct)
        return counts, direct

    def finalize(self, workers: int = 1) -> ClassPredicateStats:
        """Fold the shards (in parallel when `workers` > 1) and merge their counters in shard order."""
        with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
            results = list(executor.map(self._fold_shard, self.shards))
        counts = Counter(self._counts)
        direct: Dict[TermId, Set[TermId]] = defaultdict(set, {key: set(value) for key, value in self._direct.items()})
        for shard_counts, shard_direct in results:
            counts.update(shard_counts)
            for class_id, predicates in shard_direct.items():
                direct[class_id] |= predicates
        for shard in self.shards:
            shard.clear()
        stats = ClassPredicateStats(dict(counts), dict(direct), self.triple_count)
        logger.info("Counted %s (class, predicate) pairs over %s triples", len(counts), self.triple_count)
        return stats


def build_predicate_stats(
    triples: Iterable[Triple],
    membership: MembershipIndex,
    graph: OntologyGraph,  # pylint: disable=unused-argument
    config: HierarchyConfig,
    table: InternTable,
    grouped: bool = False,
) -> ClassPredicateStats:
    """Count, for every class and predicate, the distinct kept instances using the predicate as subject.

    Instance-of predicates describe membership and are not counted as attributes.
    """
    excluded = [table.intern_iri(iri) for iri in config.instance_of]
    builder = PredicateStatsBuilder(membership, excluded)
    if grouped:
        builder.consume_grouped(triples)
    else:
        builder.consume(triples)
    return builder.finalize()


def ipp(stats: ClassPredicateStats, membership: MembershipIndex, class_id: TermId, predicate: TermId) -> Ratio:
    """Instance-with-predicate proportion of a class."""
    total = membership.count(class_id)
    if total == 0:
        raise EmptyClassError(f"Class id {class_id} has no instances")
    return Ratio.of(stats.count(class_id, predicate), total)


_RECORD = "q"


def _write_run(run: List[Triple], directory: str) -> str:
    run.sort()
    handle, path = tempfile.mkstemp(prefix="run-", suffix=".bin", dir=directory)
    with os.fdopen(handle, "wb") as run_file:
        array(_RECORD, (value for triple in run for value in triple)).tofile(run_file)
    return path


def _read_run(path: str, block: int = 65536) -> Iterator[Triple]:
    with open(path, "rb") as run_file:
        while True:
            values = array(_RECORD)
            try:
                values.fromfile(run_file, block * 3)
            except EOFError:
                pass
            if not values:
                return
            for index in range(0, len(values), 3):
                yield Triple(values[index], values[index + 1], values[index + 2])


def group_by_subject(triples: Iterable[Triple], run_size: int = 1_000_000) -> Iterator[Triple]:
    """Sort a triple stream by subject with a bounded-memory external merge sort.

    Runs of `run_size` triples are sorted and spilled to temporary files, then merged.
    """
    with tempfile.TemporaryDirectory(prefix="class-granularity-") as directory:
        paths: List[str] = []
        run: List[Triple] = []
        for triple in triples:
            run.append(triple)
            if len(run) >= run_size:
                paths.append(_write_run(run, directory))
                run = []
        if not paths:
            run.sort()
            yield from run
            return
        if run:
            paths.append(_write_run(run, directory))
        logger.debug("Merging %s sorted runs", len(paths))
        yield from heapq.merge(*(_read_run(path) for path in paths))


class StatsSnapshot(BaseModel, extra=Extra.forbid):
    """Versioned on-disk form of everything the metrics need, so metric re-runs skip ingestion.

    Only the terms referenced by the counters are kept; ids are local to the snapshot.
    """

    schema_version: int = SCHEMA_VERSION
    terms: List[Tuple[TermKind, str]]
    classes: List[TermId]
    subclass_edges: List[Tuple[TermId, TermId]]
    virtual_root: Optional[TermId] = None
    aliases: List[Tuple[TermId, TermId]] = []
    declared_predicates: List[Tuple[TermId, List[TermId]]] = []
    class_instance_count: List[Tuple[TermId, int]] = []
    with_predicate_count: List[Tuple[TermId, TermId, int]] = []
    direct_predicates: List[Tuple[TermId, List[TermId]]] = []
    instance_count: int = 0
    triple_count: int = 0
    diagnostics: MembershipDiagnostics = MembershipDiagnostics()
    ingest_diagnostics: Dict[str, int] = {}

    @classmethod
    def capture(
        cls,
        table: InternTable,
        graph: OntologyGraph,
        membership: MembershipIndex,
        stats: ClassPredicateStats,
        ingest_diagnostics: Optional[Dict[str, int]] = None,
    ) -> "StatsSnapshot":
        """Snapshot the model and counters, renumbering referenced terms in canonical text order."""
        referenced: Set[TermId] = set(graph.classes) | set(graph.aliases)
        for predicates in graph.declared_predicates.values():
            referenced |= predicates
        for predicates in stats.direct_predicates.values():
            referenced |= predicates
        referenced |= {predicate for _, predicate in stats.with_predicate_count}
        ordered = sorted(referenced, key=lambda term_id: (table.term(term_id).kind.value, table.text(term_id)))
        local = {term_id: index for index, term_id in enumerate(ordered)}

        def sets(mapping) -> List[Tuple[TermId, List[TermId]]]:
            return sorted((local[key], sorted(local[item] for item in items)) for key, items in mapping.items())

        return cls(
            terms=[(table.term(term_id).kind, table.text(term_id)) for term_id in ordered],
            classes=sorted(local[class_id] for class_id in graph.classes),
            subclass_edges=sorted((local[child], local[parent]) for child, parent in graph.subclass_edges),
            virtual_root=None if graph.virtual_root is None else local[graph.virtual_root],
            aliases=sorted((local[member], local[rep]) for member, rep in graph.aliases.items()),
            declared_predicates=sets(graph.declared_predicates),
            class_instance_count=sorted((local[key], value) for key, value in membership.class_instance_count.items()),
            with_predicate_count=sorted(
                (local[class_id], local[predicate], count)
                for (class_id, predicate), count in stats.with_predicate_count.items()
            ),
            direct_predicates=sets(stats.direct_predicates),
            instance_count=membership.instance_count,
            triple_count=stats.triple_count,
            diagnostics=membership.diagnostics,
            ingest_diagnostics=dict(ingest_diagnostics or {}),
        )

    def restore(self) -> Tuple[InternTable, OntologyGraph, MembershipIndex, ClassPredicateStats]:
        """Rebuild the intern table, graph, membership counts and predicate stats."""
        if self.schema_version != SCHEMA_VERSION:
            raise StatsError(f"Unsupported stats snapshot version {self.schema_version}")
        table = InternTable(Term(kind, text) for kind, text in self.terms)
        graph = OntologyGraph(
            self.classes,
            self.subclass_edges,
            {key: set(items) for key, items in self.declared_predicates},
            virtual_root=self.virtual_root,
            aliases=dict(self.aliases),
        )
        membership = MembershipIndex(
            graph, {}, dict(self.class_instance_count), self.diagnostics.copy(), instance_count=self.instance_count
        )
        stats = ClassPredicateStats(
            {(class_id, predicate): count for class_id, predicate, count in self.with_predicate_count},
            {key: set(items) for key, items in self.direct_predicates},
            self.triple_count,
        )
        return table, graph, membership, stats
