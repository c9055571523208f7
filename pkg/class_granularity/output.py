"""Result models: exact ratios and per-class / per-dataset metric results."""
import functools
from decimal import Decimal
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, Extra, StrictInt, validator

from class_granularity.constants import DEFAULT_PRECISION
from class_granularity.data import TermId


def render_decimal(value: Fraction, precision: int = DEFAULT_PRECISION) -> str:
    """Render a rational with round-half-even at a fixed number of places, using integer arithmetic only.

    Examples:
        >>> render_decimal(Fraction(7, 8))
        '0.8750'
        >>> render_decimal(Fraction(1, 8), 2), render_decimal(Fraction(3, 8), 2)
        ('0.12', '0.38')
        >>> render_decimal(Fraction(13, 24))
        '0.5417'
    """
    quotient, remainder = divmod(value.numerator * 10 ** precision, value.denominator)
    if 2 * remainder > value.denominator or (2 * remainder == value.denominator and quotient % 2):
        quotient += 1
    return f"{Decimal(quotient).scaleb(-precision):.{precision}f}"


@functools.total_ordering
class Ratio(BaseModel, extra=Extra.forbid):
    """Exact non-negative ratio.

    The numerator and denominator are kept as counted (2/2 stays 2/2); equality and ordering compare the rational
    values, so 2/2 == 1/1. `decimal` is only a rendering and never takes part in comparisons.

    Examples:
        >>> Ratio(numerator=2, denominator=5) < Ratio(numerator=1, denominator=2)
        True
        >>> Ratio(numerator=2, denominator=2) == Ratio(numerator=1, denominator=1)
        True
        >>> Ratio(numerator=1, denominator=0)
        Traceback (most recent call last):
        ...
        pydantic.error_wrappers.ValidationError: 1 validation error for Ratio
        denominator
          Denominator must be positive (type=value_error)
    """

    numerator: StrictInt
    denominator: StrictInt
    decimal: Optional[str] = None

    # pylint: disable=no-self-argument,no-self-use
    @validator("numerator")
    def validate_numerator(cls, value):
        """Validate non-negative numerator."""
        if value < 0:
            raise ValueError("Numerator must be non-negative")
        return value

    @validator("denominator")
    def validate_denominator(cls, value):
        """Validate positive denominator."""
        if value <= 0:
            raise ValueError("Denominator must be positive")
        return value

    @classmethod
    def of(cls, numerator: int, denominator: int) -> "Ratio":
        """Shortcut constructor."""
        return cls(numerator=numerator, denominator=denominator)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Ratio":
        """Build a reduced ratio from a Fraction."""
        return cls(numerator=value.numerator, denominator=value.denominator)

    @classmethod
    def zero(cls) -> "Ratio":
        """Exactly 0."""
        return cls(numerator=0, denominator=1)

    @property
    def value(self) -> Fraction:
        """Exact rational value."""
        return Fraction(self.numerator, self.denominator)

    def render(self, precision: int = DEFAULT_PRECISION) -> str:
        """Decimal rendering, round-half-even."""
        return render_decimal(self.value, precision)

    def rendered(self, precision: int = DEFAULT_PRECISION) -> "Ratio":
        """Copy carrying its decimal rendering, for serialization."""
        return self.copy(update={"decimal": self.render(precision)})

    def __eq__(self, other) -> bool:
        """Compare rational values."""
        if isinstance(other, Ratio):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        """Order by rational value."""
        if isinstance(other, Ratio):
            return self.value < other.value
        if isinstance(other, (int, Fraction)):
            return self.value < other
        return NotImplemented

    def __hash__(self) -> int:
        """Hash the rational value."""
        return hash(self.value)

    def __str__(self) -> str:
        """Compact num/den form."""
        return f"{self.numerator}/{self.denominator}"


class PredicateResult(BaseModel, extra=Extra.forbid):
    """IDPP evaluation of one distinct predicate."""

    predicate: TermId
    ipp: Ratio
    max_related_ipp: Ratio
    idpp: Ratio


class ObservedPredicate(BaseModel, extra=Extra.forbid):
    """IPP of one predicate in use by the instances of a class."""

    predicate: TermId
    ipp: Ratio


class ClassResult(BaseModel, extra=Extra.forbid):
    """IDPPA of one non-root class.

    Attributes:
        n_dp: number of distinct predicates.
        per_predicate: IDPP detail of each distinct predicate, sorted by predicate IRI.
        observed: every predicate used by the class's instances, sorted by predicate IRI.
        empty: the class has no instances.
        included: whether the class counts towards Class Granularity (False only when empty classes are excluded).
    """

    class_id: TermId
    n_dp: int
    per_predicate: List[PredicateResult] = []
    observed: List[ObservedPredicate] = []
    idppa: Ratio
    instance_count: int = 0
    empty: bool = False
    included: bool = True


class CompanionStats(BaseModel, extra=Extra.forbid):
    """Baseline schema metrics and basic dataset counts."""

    attribute_richness: Ratio
    inheritance_richness: Ratio
    class_count: int
    predicate_count: int
    instance_count: int
    triple_count: int
    avg_predicates_per_class: Ratio


class DatasetResult(BaseModel, extra=Extra.forbid):
    """Dataset-level Class Granularity."""

    class_granularity: Ratio
    n_classes: int
    class_results: List[ClassResult]
    companion: CompanionStats
