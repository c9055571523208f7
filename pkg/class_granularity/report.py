"""Run configuration, the end-to-end pipeline and the Class Granularity reports it produces."""
import contextlib
import csv
import datetime
import hashlib
import io
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Union

import toml
from pydantic import BaseModel, Extra, validator
from pydantic.error_wrappers import ValidationError

from class_granularity import resolve_adapter
from class_granularity.adapter import AdapterSpec
from class_granularity.constants import CONFIG_VERSION, DEFAULT_PRECISION, SCHEMA_VERSION, VERSION
from class_granularity.data import InternTable
from class_granularity.errors import (
    AdapterError,
    ConfigError,
    DumpError,
    GranularityError,
    ParserError,
    ReportError,
    StageError,
    StatsError,
)
from class_granularity.ingest import IngestDiagnostics, TripleSource
from class_granularity.metrics import MetricConfig, class_granularity
from class_granularity.ontology import HierarchyConfig, OntologyGraph, PredicateMode, build_hierarchy
from class_granularity.output import CompanionStats, DatasetResult, Ratio
from class_granularity.parser import Compression, Strictness
from class_granularity.stats import (
    MembershipDiagnostics,
    PredicateStatsBuilder,
    StatsSnapshot,
    build_membership,
    group_by_subject,
)

logger = logging.getLogger(__name__)


class OutputFormat(str, Enum):
    """Report renderings."""

    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown"
    PLAIN = "plain"


class Grouping(str, Enum):
    """How the data pass gathers each instance's predicates.

    - "none": any triple order; predicate sets of all instances are held until the pass ends.
    - "presorted": the data files are already grouped by subject; each instance is folded as soon as it ends.
    - "external-sort": the stream is grouped by subject with an on-disk merge sort first.
    """

    NONE = "none"
    PRESORTED = "presorted"
    EXTERNAL_SORT = "external-sort"


####################
# CONFIGURATION    #
####################


class InputConfig(BaseModel, extra=Extra.forbid):
    """The `[input]` section of a run config."""

    ontology: List[str] = []
    data: List[str] = []
    compression: Compression = Compression.AUTO
    strictness: Strictness = Strictness.STRICT
    adapter: Optional[str] = None
    workers: int = 1
    grouping: Grouping = Grouping.NONE
    stats_in: Optional[str] = None

    # pylint: disable=no-self-argument,no-self-use
    @validator("workers")
    def validate_workers(cls, value):
        """Validate a positive worker count."""
        if value < 1:
            raise ValueError("At least one worker is required")
        return value


class OutputConfig(BaseModel, extra=Extra.forbid):
    """The `[output]` section of a run config."""

    format: OutputFormat = OutputFormat.JSON
    precision: int = DEFAULT_PRECISION
    path: Optional[str] = None
    stats_out: Optional[str] = None

    # pylint: disable=no-self-argument,no-self-use
    @validator("precision")
    def validate_precision(cls, value):
        """Validate a sensible number of decimal places."""
        if not 0 <= value <= 30:
            raise ValueError("Precision must be between 0 and 30")
        return value


class AdapterSection(BaseModel, extra=Extra.forbid):
    """The `[adapter]` section: extra rules appended after those of the named adapter."""

    rules: List[Dict] = []


class RunConfig(BaseModel, extra=Extra.forbid):
    """Everything one pipeline run needs.

    Mirrors the TOML config file: `config_version`, `label`, `[input]`, `[hierarchy]` (a `profile` name plus
    any `HierarchyConfig` field), `[metrics]`, `[output]` and `[[adapter.rules]]`.

    Attributes:
        config_version: config file format version.
        label (optional): dataset label in reports. Default: stem of the first data file.

    Examples:
        >>> RunConfig(input={"ontology": ["onto.nt"], "data": ["facts.nt.gz"]}).label_or_default()
        'facts'
        >>> RunConfig()
        Traceback (most recent call last):
        ...
        pydantic.error_wrappers.ValidationError: 1 validation error for RunConfig
        input
          At least one data input is required (type=value_error)
    """

    config_version: int = CONFIG_VERSION
    label: Optional[str] = None
    input: InputConfig = InputConfig()
    hierarchy: Dict = {}
    metrics: MetricConfig = MetricConfig()
    output: OutputConfig = OutputConfig()
    adapter: AdapterSection = AdapterSection()

    # pylint: disable=no-self-argument,no-self-use
    @validator("config_version")
    def validate_config_version(cls, value):
        """Validate the config format version."""
        if value != CONFIG_VERSION:
            raise ValueError(f"Unsupported config_version {value}, expected {CONFIG_VERSION}")
        return value

    @validator("input", always=True)
    def validate_input(cls, value):
        """Validate that the run has data to read."""
        if not value.data and not value.stats_in:
            raise ValueError("At least one data input is required")
        return value

    @validator("metrics", always=True)
    def validate_metrics(cls, value, values):
        """Data files may double as the ontology only in induced mode with a pinned instance-of predicate."""
        inputs, hierarchy = values.get("input"), values.get("hierarchy") or {}
        if inputs is None or inputs.ontology or inputs.stats_in:
            return value
        if value.predicate_definition_mode != PredicateMode.INDUCED or not hierarchy.get("instance_of"):
            raise ValueError(
                "Without ontology inputs the run needs predicate_definition_mode 'induced' and an explicit instance_of"
            )
        return value

    @classmethod
    def from_toml(cls, path: Union[str, Path], **overrides) -> "RunConfig":
        """Load a config file; `overrides` are merged section by section on top of it."""
        try:
            content = toml.load(path)
        except (OSError, toml.TomlDecodeError) as exc:
            raise ConfigError(f"Unable to read config file {path}: {exc}") from exc
        for key, value in overrides.items():
            if isinstance(value, dict):
                content[key] = {**content.get(key, {}), **value}
            else:
                content[key] = value
        return cls.build(**content)

    @classmethod
    def build(cls, **content) -> "RunConfig":
        """Validate a config mapping, raising ConfigError."""
        try:
            return cls(**content)
        except ValidationError as exc:
            raise ConfigError(f"Invalid run configuration: {exc}") from exc

    def label_or_default(self) -> str:
        """Dataset label used in reports."""
        if self.label:
            return self.label
        source = self.input.data[0] if self.input.data else self.input.stats_in
        return Path(str(source)).name.split(".")[0]

    def adapter_spec(self) -> AdapterSpec:
        """Named adapter (or adapter file) with the config's own rules appended."""
        spec = resolve_adapter(self.input.adapter)
        if self.adapter.rules:
            try:
                spec = AdapterSpec(name=spec.name, rules=spec.rules + self.adapter.rules, hierarchy=spec.hierarchy)
            except ValidationError as exc:
                raise AdapterError(f"Invalid adapter rules: {exc}") from exc
        return spec

    def hierarchy_config(self, spec: Optional[AdapterSpec] = None) -> HierarchyConfig:
        """Profile vocabulary, then adapter defaults, then the `[hierarchy]` section."""
        overrides = dict(self.hierarchy)
        profile = overrides.pop("profile", "default")
        defaults = spec.hierarchy if spec is not None else {}
        try:
            return HierarchyConfig.profile(profile, **{**defaults, **overrides})
        except (ValidationError, GranularityError) as exc:
            raise ConfigError(f"Invalid hierarchy configuration: {exc}") from exc

    def echo(self) -> Dict:
        """Config as echoed in reports, without settings that only affect execution or output location."""
        return json.loads(self.json(exclude={"input": {"workers", "stats_in"}, "output": {"path", "stats_out"}}))


####################
# REPORT MODELS    #
####################


class PredicateReport(BaseModel, extra=Extra.forbid):
    """IDPP detail of one distinct predicate."""

    predicate: str
    ipp: Ratio
    max_related_ipp: Ratio
    idpp: Ratio


class ObservedReport(BaseModel, extra=Extra.forbid):
    """IPP of one in-use predicate."""

    predicate: str
    ipp: Ratio


class ClassReport(BaseModel, extra=Extra.forbid):
    """Per-class result, the class detail view."""

    class_iri: str
    instance_count: int
    n_dp: int
    idppa: Ratio
    empty: bool
    included: bool
    distinct_predicates: List[PredicateReport] = []
    observed_predicates: List[ObservedReport] = []


class CycleCollapse(BaseModel, extra=Extra.forbid):
    """Classes merged into one because they formed a subclass cycle."""

    representative: str
    members: List[str]


class Diagnostics(BaseModel, extra=Extra.forbid):
    """What filtering and normalization did to the input."""

    type_assertions: int = 0
    unknown_class_assertions: int = 0
    dropped_instances: int = 0
    cycle_collapses: List[CycleCollapse] = []
    roots: List[str] = []
    virtual_root: Optional[str] = None
    ontology_ingest: Optional[IngestDiagnostics] = None
    data_ingest: Optional[IngestDiagnostics] = None


class InputDigest(BaseModel, extra=Extra.forbid):
    """SHA-256 digest of one input file."""

    role: str
    path: str
    sha256: str


class Provenance(BaseModel, extra=Extra.forbid):
    """Where a report comes from. `generated_at` is the only field that changes between identical runs."""

    tool_version: str = VERSION
    inputs: List[InputDigest] = []
    config: Dict = {}
    generated_at: str = ""


class ReportSettings(BaseModel, extra=Extra.forbid):
    """Resolved settings that decide whether two reports are comparable."""

    tie_policy: str
    empty_class_policy: str
    predicate_definition_mode: str
    adapter: str
    precision: int = DEFAULT_PRECISION


class GranularityReport(BaseModel, extra=Extra.forbid):
    """Class Granularity report of one dataset, with classes sorted by IRI."""

    schema_version: int = SCHEMA_VERSION
    label: str
    class_granularity: Ratio
    n_classes: int
    companion: CompanionStats
    classes: List[ClassReport] = []
    settings: ReportSettings
    diagnostics: Diagnostics = Diagnostics()
    provenance: Provenance = Provenance()

    # pylint: disable=no-self-argument,no-self-use
    @validator("schema_version")
    def validate_schema_version(cls, value):
        """Validate the report schema version."""
        if value != SCHEMA_VERSION:
            raise ValueError(f"Unsupported report schema_version {value}, expected {SCHEMA_VERSION}")
        return value

    def to_json(self) -> str:
        """Get JSON representation of the report."""
        return self.json(sort_keys=True, indent=2)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "GranularityReport":
        """Read a JSON report."""
        try:
            return cls.parse_file(path)
        except (OSError, ValueError) as exc:
            raise ReportError(f"Unable to read report {path}: {exc}") from exc


class ComparisonRow(BaseModel, extra=Extra.forbid):
    """One dataset of a comparison table."""

    label: str
    classes: int
    predicates: int
    instances: int
    triples: int
    avg_predicates_per_class: Ratio
    granularity: Ratio


class Comparison(BaseModel, extra=Extra.forbid):
    """Cross-dataset comparison table."""

    rows: List[ComparisonRow]
    footnotes: List[str] = []


####################
# PIPELINE         #
####################


@contextlib.contextmanager
def stage(name: str) -> Iterator[None]:
    """Attribute library errors raised inside the block to a pipeline stage.

    Dump, parse and adapter errors surface lazily while streams are consumed and are always attributed to ingest.
    """
    try:
        yield
    except StageError:
        raise
    except GranularityError as exc:
        failed = "ingest" if isinstance(exc, (DumpError, ParserError, AdapterError)) else name
        raise StageError(failed, f"{failed} stage failed: {exc}", related_exceptions=[exc]) from exc


def file_digest(path: Union[str, Path]) -> str:
    """SHA-256 of a file, read in chunks."""
    digest = hashlib.sha256()
    with open(path, "rb") as input_file:
        for chunk in iter(lambda: input_file.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _digests(config: RunConfig) -> List[InputDigest]:
    roles = [("ontology", path) for path in config.input.ontology] + [("data", path) for path in config.input.data]
    if config.input.stats_in:
        roles.append(("stats", config.input.stats_in))
    digests = []
    for role, path in roles:
        try:
            digests.append(InputDigest(role=role, path=str(path), sha256=file_digest(path)))
        except OSError as exc:
            raise DumpError(f"file-not-found: {path}") from exc
    return digests


def _ingest_counts(diagnostics: IngestDiagnostics) -> Dict[str, int]:
    return diagnostics.dict(exclude={"first_line_errors"})


def _read_snapshot(path: str) -> StatsSnapshot:
    try:
        return StatsSnapshot.parse_file(path)
    except (OSError, ValueError) as exc:
        raise StatsError(f"Unable to read stats snapshot {path}: {exc}") from exc


def _write_snapshot(snapshot: StatsSnapshot, path: str):
    try:
        Path(path).write_text(snapshot.json(), encoding="utf-8")
    except OSError as exc:
        raise StatsError(f"Unable to write stats snapshot {path}: {exc}") from exc
    logger.info("Wrote stats snapshot to %s", path)


def _count_predicates(config: RunConfig, source: TripleSource, table: InternTable, membership, hierarchy):
    """Second data pass: per-(class, predicate) instance counts."""
    workers = config.input.workers
    excluded = [table.intern_iri(iri) for iri in hierarchy.instance_of]

    def new_builder() -> PredicateStatsBuilder:
        return PredicateStatsBuilder(membership, excluded, shards=workers)

    grouping = config.input.grouping
    if grouping == Grouping.PRESORTED:
        builder = new_builder().consume_grouped(source.stream(table))
    elif grouping == Grouping.EXTERNAL_SORT:
        builder = new_builder().consume_grouped(group_by_subject(source.stream(table)))
    else:
        builder = source.fold(
            table, new_builder, PredicateStatsBuilder.consume, PredicateStatsBuilder.merge, workers=workers
        )
    return builder.finalize(workers)


def _diagnostics(
    table: InternTable, graph: OntologyGraph, membership_diagnostics: MembershipDiagnostics, **ingest
) -> Diagnostics:
    collapsed: Dict[int, List[str]] = {}
    for member, representative in graph.aliases.items():
        collapsed.setdefault(representative, []).append(table.text(member))
    return Diagnostics(
        type_assertions=membership_diagnostics.type_assertions,
        unknown_class_assertions=membership_diagnostics.unknown_class_assertions,
        dropped_instances=membership_diagnostics.dropped_instances,
        cycle_collapses=sorted(
            (
                CycleCollapse(representative=table.text(rep), members=sorted(members + [table.text(rep)]))
                for rep, members in collapsed.items()
            ),
            key=lambda collapse: collapse.representative,
        ),
        roots=sorted(table.text(root) for root in graph.roots),
        virtual_root=None if graph.virtual_root is None else table.text(graph.virtual_root),
        **ingest,
    )


def build_report(
    label: str,
    result: DatasetResult,
    table: InternTable,
    settings: ReportSettings,
    diagnostics: Optional[Diagnostics] = None,
    provenance: Optional[Provenance] = None,
) -> GranularityReport:
    """Translate an id-based DatasetResult into an IRI-based report with rendered ratios."""
    precision = settings.precision

    def ratio(value: Ratio) -> Ratio:
        return value.rendered(precision)

    companion = result.companion
    classes = [
        ClassReport(
            class_iri=table.text(class_result.class_id),
            instance_count=class_result.instance_count,
            n_dp=class_result.n_dp,
            idppa=ratio(class_result.idppa),
            empty=class_result.empty,
            included=class_result.included,
            distinct_predicates=[
                PredicateReport(
                    predicate=table.text(detail.predicate),
                    ipp=ratio(detail.ipp),
                    max_related_ipp=ratio(detail.max_related_ipp),
                    idpp=ratio(detail.idpp),
                )
                for detail in class_result.per_predicate
            ],
            observed_predicates=[
                ObservedReport(predicate=table.text(observed.predicate), ipp=ratio(observed.ipp))
                for observed in class_result.observed
            ],
        )
        for class_result in result.class_results
    ]
    return GranularityReport(
        label=label,
        class_granularity=ratio(result.class_granularity),
        n_classes=result.n_classes,
        companion=companion.copy(
            update={
                "attribute_richness": ratio(companion.attribute_richness),
                "inheritance_richness": ratio(companion.inheritance_richness),
                "avg_predicates_per_class": ratio(companion.avg_predicates_per_class),
            }
        ),
        classes=sorted(classes, key=lambda class_report: class_report.class_iri),
        settings=settings,
        diagnostics=diagnostics or Diagnostics(),
        provenance=provenance or Provenance(),
    )


def run(config: RunConfig, now: Optional[datetime.datetime] = None) -> GranularityReport:
    """Run ingestion, model building, statistics and metrics, and return the report."""
    workers = config.input.workers
    with stage("ingest"):
        spec = config.adapter_spec()
        hierarchy = config.hierarchy_config(spec)
        digests = _digests(config)

    if config.input.stats_in:
        with stage("stats"):
            snapshot = _read_snapshot(config.input.stats_in)
            table, graph, membership, stats = snapshot.restore()
        ingest = {"data_ingest": IngestDiagnostics(**snapshot.ingest_diagnostics)}
    else:
        table = InternTable()
        ontology_source = TripleSource(
            config.input.ontology or config.input.data,
            config.input.compression,
            config.input.strictness,
            spec,
            hierarchy,
        )
        data_source = TripleSource(
            config.input.data, config.input.compression, config.input.strictness, spec, hierarchy
        )
        with stage("model"):
            graph = build_hierarchy(ontology_source.stream(table), hierarchy, table)
        ontology_diagnostics = ontology_source.diagnostics
        with stage("stats"):
            membership = build_membership(
                data_source.scan(table, hierarchy.instance_of, workers), graph, hierarchy, table
            )
            stats = _count_predicates(config, data_source, table, membership, hierarchy)
        ingest = {"ontology_ingest": ontology_diagnostics, "data_ingest": data_source.diagnostics}
        if config.output.stats_out:
            with stage("stats"):
                snapshot = StatsSnapshot.capture(
                    table, graph, membership, stats, _ingest_counts(data_source.diagnostics)
                )
                _write_snapshot(snapshot, config.output.stats_out)

    with stage("metrics"):
        result = class_granularity(graph, membership, stats, config.metrics, table, workers)

    with stage("report"):
        settings = ReportSettings(
            tie_policy=config.metrics.tie_policy.value,
            empty_class_policy=config.metrics.empty_class_policy.value,
            predicate_definition_mode=config.metrics.resolve_mode(graph).value,
            adapter=spec.name,
            precision=config.output.precision,
        )
        provenance = Provenance(
            inputs=digests,
            config={"run": config.echo(), "adapter": spec.to_config(), "hierarchy": json.loads(hierarchy.json())},
            generated_at=(now or datetime.datetime.now(datetime.timezone.utc)).isoformat(timespec="seconds"),
        )
        report = build_report(
            config.label_or_default(),
            result,
            table,
            settings,
            _diagnostics(table, graph, membership.diagnostics, **ingest),
            provenance,
        )
    logger.info("Report %s: Class Granularity %s", report.label, report.class_granularity.decimal)
    return report


def class_detail(report: GranularityReport, class_iri: str) -> ClassReport:
    """Per-predicate breakdown of one non-root class."""
    for class_report in report.classes:
        if class_report.class_iri == class_iri:
            return class_report
    if class_iri in report.diagnostics.roots:
        raise ReportError(f"{class_iri} is a root class and has no IDPPA")
    raise ReportError(f"Unknown class {class_iri} in report {report.label}")


def _unique_labels(labels: Sequence[str]) -> List[str]:
    """Suffix repeated labels with their occurrence number.

    Examples:
        >>> _unique_labels(["dbpedia", "yago", "dbpedia"])
        ['dbpedia', 'yago', 'dbpedia (2)']
    """
    seen: Dict[str, int] = {}
    unique = []
    for label in labels:
        seen[label] = seen.get(label, 0) + 1
        unique.append(label if seen[label] == 1 else f"{label} ({seen[label]})")
    return unique


def compare(reports: Sequence[GranularityReport], force: bool = False) -> Comparison:
    """One row of dataset sizes and Class Granularity per report.

    Reports computed under different tie or empty-class policies are only compared when `force` is set, and the
    settings of every report are then echoed in a footnote.
    """
    if len(reports) < 2:
        raise ReportError(f"A comparison needs at least 2 reports, got {len(reports)}")

    labels = _unique_labels([report.label for report in reports])
    policies = {(report.settings.tie_policy, report.settings.empty_class_policy) for report in reports}
    footnotes = []
    if len(policies) > 1:
        configs = "; ".join(
            f"{label}: {report.settings.tie_policy}, {report.settings.empty_class_policy}, "
            f"{report.settings.predicate_definition_mode}"
            for label, report in zip(labels, reports)
        )
        if not force:
            raise ReportError(f"Reports use different metric policies ({configs}); use force to compare anyway")
        footnotes.append(f"Metric policies differ: {configs}")

    rows = [_report_row(report).copy(update={"label": label}) for label, report in zip(labels, reports)]
    return Comparison(rows=rows, footnotes=footnotes)


####################
# RENDERING        #
####################

SUMMARY_HEADER = [
    "Dataset",
    "Classes",
    "Predicates",
    "Instances",
    "Triples",
    "Avg. Predicates per Class",
    "Granularity",
]
CLASS_HEADER = ["Class", "Instances", "Distinct Predicates", "IDPPA", "IDPPA (exact)", "Included"]
DETAIL_HEADER = ["Predicate", "IPP", "Max Related IPP", "IDPP"]


def _summary_cells(row: ComparisonRow, precision: int) -> List[str]:
    return [
        row.label,
        str(row.classes),
        str(row.predicates),
        str(row.instances),
        str(row.triples),
        row.avg_predicates_per_class.render(precision),
        row.granularity.render(precision),
    ]


def _report_row(report: GranularityReport) -> ComparisonRow:
    return ComparisonRow(
        label=report.label,
        classes=report.companion.class_count,
        predicates=report.companion.predicate_count,
        instances=report.companion.instance_count,
        triples=report.companion.triple_count,
        avg_predicates_per_class=report.companion.avg_predicates_per_class,
        granularity=report.class_granularity,
    )


def _class_cells(class_report: ClassReport, precision: int) -> List[str]:
    return [
        class_report.class_iri,
        str(class_report.instance_count),
        str(class_report.n_dp),
        class_report.idppa.render(precision),
        str(class_report.idppa),
        "yes" if class_report.included else "no",
    ]


def _csv(*tables: List[List[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for position, table in enumerate(tables):
        if position:
            buffer.write("\n")
        writer.writerows(table)
    return buffer.getvalue()


def _markdown(rows: List[List[str]]) -> str:
    header, *body = rows
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join(" --- " for _ in header) + "|"]
    lines.extend("| " + " | ".join(cell.replace("|", "\\|") for cell in row) + " |" for row in body)
    return "\n".join(lines) + "\n"


def _plain(rows: List[List[str]]) -> str:
    widths = [max(len(row[column]) for row in rows) for column in range(len(rows[0]))]
    return "".join("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() + "\n" for row in rows)


def render_report(report: GranularityReport, output_format: Union[str, OutputFormat] = OutputFormat.JSON) -> str:
    """Render a report in one of the output formats."""
    output_format = OutputFormat(output_format)
    if output_format == OutputFormat.JSON:
        return report.to_json() + "\n"

    precision = report.settings.precision
    summary = [SUMMARY_HEADER, _summary_cells(_report_row(report), precision)]
    classes = [CLASS_HEADER] + [_class_cells(class_report, precision) for class_report in report.classes]
    if output_format == OutputFormat.CSV:
        return _csv(summary, classes)

    diagnostics = report.diagnostics
    notes = [
        f"Type assertions: {diagnostics.type_assertions}",
        f"Assertions to unknown classes: {diagnostics.unknown_class_assertions}",
        f"Dropped instances: {diagnostics.dropped_instances}",
        f"Cycle collapses: {len(diagnostics.cycle_collapses)}",
    ]
    if diagnostics.data_ingest is not None:
        notes.append(f"Malformed lines: {diagnostics.data_ingest.line_errors}")
    if diagnostics.virtual_root:
        notes.append(f"Virtual root: {diagnostics.virtual_root}")

    if output_format == OutputFormat.MARKDOWN:
        return (
            f"# Class Granularity: {report.label}\n\n"
            + _markdown(summary)
            + "\n## Classes\n\n"
            + _markdown(classes)
            + "\n## Diagnostics\n\n"
            + "".join(f"- {note}\n" for note in notes)
        )
    return (
        f"Class Granularity of {report.label}: {report.class_granularity.render(precision)}\n\n"
        + _plain(summary)
        + "\n"
        + _plain(classes)
        + "\n"
        + "".join(f"{note}\n" for note in notes)
    )


def render_class_detail(
    detail: ClassReport,
    output_format: Union[str, OutputFormat] = OutputFormat.PLAIN,
    precision: int = DEFAULT_PRECISION,
) -> str:
    """Render the per-predicate breakdown of one class."""
    output_format = OutputFormat(output_format)
    if output_format == OutputFormat.JSON:
        return detail.json(sort_keys=True, indent=2) + "\n"

    distinct = [DETAIL_HEADER] + [
        [item.predicate, str(item.ipp), str(item.max_related_ipp), item.idpp.render(precision)]
        for item in detail.distinct_predicates
    ]
    observed = [["Predicate", "IPP"]] + [
        [item.predicate, item.ipp.render(precision)] for item in detail.observed_predicates
    ]
    if output_format == OutputFormat.CSV:
        return _csv(distinct, observed)

    title = f"{detail.class_iri}: IDPPA {detail.idppa.render(precision)} ({detail.n_dp} distinct predicates)"
    if output_format == OutputFormat.MARKDOWN:
        return (
            f"# {title}\n\n## Distinct predicates\n\n"
            + _markdown(distinct)
            + "\n## Predicates in use\n\n"
            + _markdown(observed)
        )
    return f"{title}\n\n" + _plain(distinct) + "\n" + _plain(observed)


def render_comparison(
    comparison: Comparison,
    output_format: Union[str, OutputFormat] = OutputFormat.PLAIN,
    precision: int = DEFAULT_PRECISION,
) -> str:
    """Render a comparison table."""
    output_format = OutputFormat(output_format)
    if output_format == OutputFormat.JSON:
        return comparison.json(sort_keys=True, indent=2) + "\n"

    rows = [SUMMARY_HEADER] + [_summary_cells(row, precision) for row in comparison.rows]
    if output_format == OutputFormat.CSV:
        return _csv(rows)
    table = _markdown(rows) if output_format == OutputFormat.MARKDOWN else _plain(rows)
    return table + "".join(f"\n* {footnote}\n" for footnote in comparison.footnotes)
