"""Re-streamable triple sources over one or more dump files."""
import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import chain
from pathlib import Path
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar, Union

from pydantic import BaseModel, Extra

from class_granularity.adapter import AdapterSpec, apply_adapter
from class_granularity.data import InternTable, Triple
from class_granularity.ontology import HierarchyConfig
from class_granularity.parser import Compression, LineError, NTriplesParser, Strictness, open_dump
from class_granularity.rules import AdapterContext

logger = logging.getLogger(__name__)

MAX_REPORTED_LINE_ERRORS = 100

Folder = TypeVar("Folder")


class ReportedLineError(BaseModel, extra=Extra.forbid):
    """One malformed line, as kept in diagnostics."""

    source: str
    line_number: int
    message: str


class IngestDiagnostics(BaseModel, extra=Extra.forbid):
    """Line accounting of the last pass over a source.

    `lines == triples + skipped + line_errors` holds for every pass.
    """

    files: int = 0
    lines: int = 0
    triples: int = 0
    skipped: int = 0
    line_errors: int = 0
    adapter_dropped: int = 0
    adapter_emitted: int = 0
    first_line_errors: List[ReportedLineError] = []

    def add_parse(self, parser: NTriplesParser, errors: List[LineError]):
        """Account for one parsed file."""
        counters = parser.counters
        self.files += 1
        self.lines += counters.lines
        self.triples += counters.triples
        self.skipped += counters.skipped
        self.line_errors += counters.errors
        room = MAX_REPORTED_LINE_ERRORS - len(self.first_line_errors)
        self.first_line_errors.extend(
            ReportedLineError(source=parser.source, line_number=error.line_number, message=error.message)
            for error in errors[: max(room, 0)]
        )

    def add_adapter(self, context: Optional[AdapterContext]):
        """Account for the triples an adapter run dropped or synthesized."""
        if context is not None:
            self.adapter_dropped += sum(context.dropped.values())
            self.adapter_emitted += context.emitted


class TripleSource:
    """Dump files read with one compression, strictness and adapter, streamable any number of times.

    Each call to `stream`, `scan` or `fold` is one pass; `diagnostics` describes the latest pass.
    """

    def __init__(
        self,
        paths: Sequence[Union[str, Path]],
        compression: Union[str, Compression] = Compression.AUTO,
        strictness: Union[str, Strictness] = Strictness.STRICT,
        adapter: Optional[AdapterSpec] = None,
        hierarchy: Optional[HierarchyConfig] = None,
    ):
        """Describe the source; files are only opened when a pass starts."""
        self.paths = [Path(path) for path in paths]
        self.compression = Compression(compression)
        self.strictness = Strictness(strictness)
        self.adapter = adapter or AdapterSpec(name="identity")
        self.hierarchy = hierarchy or HierarchyConfig()
        self.diagnostics = IngestDiagnostics()

    def __repr__(self) -> str:
        """Short summary."""
        return f"TripleSource({len(self.paths)} files, adapter={self.adapter.name})"

    def _file_triples(self, path: Path, table: InternTable, diagnostics: IngestDiagnostics) -> Iterator[Triple]:
        """Parse one file, recording its line accounting once it is exhausted."""
        parser = NTriplesParser(table, self.strictness, source=str(path))
        errors: List[LineError] = []
        with open_dump(path, self.compression) as stream:
            for item in parser.parse(stream):
                if isinstance(item, LineError):
                    errors.append(item)
                else:
                    yield item
        diagnostics.add_parse(parser, errors)
        logger.debug("Parsed %s: %s", path, parser.counters)

    def _adapted(
        self, triples: Iterable[Triple], table: InternTable, diagnostics: IngestDiagnostics
    ) -> Iterator[Triple]:
        context = AdapterContext(table, self.hierarchy) if self.adapter.rules else None
        yield from apply_adapter(triples, self.adapter, table, self.hierarchy, context)
        diagnostics.add_adapter(context)

    def stream(self, table: InternTable) -> Iterator[Triple]:
        """One sequential pass over every file in order, adapter applied to the whole stream."""
        self.diagnostics = diagnostics = IngestDiagnostics()
        triples = chain.from_iterable(self._file_triples(path, table, diagnostics) for path in self.paths)
        yield from self._adapted(triples, table, diagnostics)
        logger.info("Read %s triples from %s files", diagnostics.triples, diagnostics.files)

    def _parallel(self, workers: int) -> bool:
        if workers > 1 and len(self.paths) > 1:
            if self.adapter.stateless:
                return True
            logger.info("Adapter %s keeps stream state, reading files sequentially", self.adapter.name)
        return False

    def scan(self, table: InternTable, predicates: Iterable[str], workers: int = 1) -> List[Triple]:
        """One pass collecting the adapted triples whose predicate is one of `predicates` (IRIs).

        With several workers each file is parsed into its own intern table and the tables are merged into
        `table` in file order, so ids do not depend on thread scheduling.
        """
        predicates = list(predicates)
        if not self._parallel(workers):
            wanted = frozenset(table.intern_iri(iri) for iri in predicates)
            return [triple for triple in self.stream(table) if triple.predicate in wanted]

        def scan_file(path: Path) -> Tuple[InternTable, List[Triple], IngestDiagnostics]:
            local = InternTable()
            diagnostics = IngestDiagnostics()
            wanted = frozenset(local.intern_iri(iri) for iri in predicates)
            triples = self._adapted(self._file_triples(path, local, diagnostics), local, diagnostics)
            return local, [triple for triple in triples if triple.predicate in wanted], diagnostics

        self.diagnostics = IngestDiagnostics()
        kept: List[Triple] = []
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for local, triples, diagnostics in executor.map(scan_file, self.paths):
                remap = table.merge(local)
                kept.extend(Triple(remap[s], remap[p], remap[o]) for s, p, o in triples)
                self._absorb(diagnostics)
        logger.info("Scanned %s files with %s workers, kept %s triples", len(self.paths), workers, len(kept))
        return kept

    def fold(
        self,
        table: InternTable,
        make_folder: Callable[[], Folder],
        consume: Callable[[Folder, Iterable[Triple]], Folder],
        merge: Callable[[Folder, Folder], Folder],
        workers: int = 1,
    ) -> Folder:
        """One pass feeding the adapted stream to accumulators, one per file when running in parallel.

        `table` must already hold every term of the files (a previous pass did that): workers only look terms up.
        Per-file accumulators are merged in file order.
        """
        if not self._parallel(workers):
            return consume(make_folder(), self.stream(table))

        def fold_file(path: Path) -> Tuple[Folder, IngestDiagnostics]:
            diagnostics = IngestDiagnostics()
            triples = self._adapted(self._file_triples(path, table, diagnostics), table, diagnostics)
            return consume(make_folder(), triples), diagnostics

        self.diagnostics = IngestDiagnostics()
        result: Optional[Folder] = None
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for folder, diagnostics in executor.map(fold_file, self.paths):
                result = folder if result is None else merge(result, folder)
                self._absorb(diagnostics)
        logger.info("Folded %s files with %s workers", len(self.paths), workers)
        return result  # type: ignore

    def _absorb(self, other: IngestDiagnostics):
        diagnostics = self.diagnostics
        for field in ("files", "lines", "triples", "skipped", "line_errors", "adapter_dropped", "adapter_emitted"):
            setattr(diagnostics, field, getattr(diagnostics, field) + getattr(other, field))
        room = MAX_REPORTED_LINE_ERRORS - len(diagnostics.first_line_errors)
        diagnostics.first_line_errors.extend(other.first_line_errors[: max(room, 0)])

