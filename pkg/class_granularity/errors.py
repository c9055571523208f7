"""Class Granularity exceptions."""


class GranularityError(Exception):
    """Base error for the library."""

    exit_code = 1

    def __init__(
        self, *args, related_exceptions=None, **kwargs,
    ):
        """Extend init to add related_exceptions coming from multiple related errors."""
        super().__init__(*args, **kwargs)
        self.related_exceptions = related_exceptions or []


class ConfigError(GranularityError):
    """Invalid run configuration."""

    exit_code = 2


class DumpError(GranularityError):
    """Error opening or decompressing a dump file."""

    exit_code = 3


class ParserError(GranularityError):
    """Malformed N-Triples line in strict mode."""

    exit_code = 3

    def __init__(self, *args, line_number=None, **kwargs):
        """Keep the offending line number."""
        super().__init__(*args, **kwargs)
        self.line_number = line_number


class AdapterError(GranularityError):
    """Error in the dataset Adapter."""

    exit_code = 3


class NonexistentAdapterError(AdapterError):
    """Nonexistent dataset Adapter."""


class ModelError(GranularityError):
    """Error in the ontology model."""

    exit_code = 4


class CycleError(ModelError):
    """Subclass cycle found under the reject policy."""

    def __init__(self, *args, cycle=None, **kwargs):
        """Keep the cycle as a list of class IRIs."""
        super().__init__(*args, **kwargs)
        self.cycle = cycle or []


class StatsError(GranularityError):
    """Error computing instance statistics."""

    exit_code = 5


class EmptyClassError(StatsError):
    """IPP requested for a class without instances."""


class MetricError(GranularityError):
    """Error computing metrics."""

    exit_code = 5


class ReportError(GranularityError):
    """Error building or rendering a report."""

    exit_code = 6


class StageError(GranularityError):
    """Error raised by one pipeline stage, keeping the stage name."""

    def __init__(self, stage: str, *args, **kwargs):
        """Store the stage that failed."""
        super().__init__(*args, **kwargs)
        self.stage = stage
        cause = self.related_exceptions[0] if self.related_exceptions else None
        self.exit_code = getattr(cause, "exit_code", 1)
