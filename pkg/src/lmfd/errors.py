"""Exception and warning types shared across the package."""

from __future__ import annotations


class LmfdError(Exception):
    """Base class for all errors raised by this package."""


class MissingValue(LmfdError):
    """A CSV cell was empty or could not be parsed as a finite number."""

    def __init__(self, row: int, column: str, cell: str):
        self.row = row
        self.column = column
        self.cell = cell
        super().__init__(
            f"missing or unparseable value {cell!r} at row {row}, column {column!r}"
        )


class NonMonotonicIndex(LmfdError):
    """The time index is not strictly increasing."""


class DuplicateColumn(LmfdError):
    """A sensor name appears more than once in the header."""


class EmptyResult(LmfdError):
    """Fewer than two sensors survived filtering, so no pairs can be formed."""

    def __init__(self, threshold: float, kept: list[str]):
        self.threshold = threshold
        self.kept = kept
        super().__init__(
            f"only {len(kept)} sensor(s) have |rho| <= {threshold}; "
            "at least 2 are needed to form pairs"
        )


class NonFiniteInput(LmfdError):
    """An input series contains NaN or infinite values."""


class LengthMismatch(LmfdError):
    """Two series that must be aligned have different lengths."""


class ValueOutOfBounds(LmfdError):
    """A constant value lies outside its slot's bounds."""


class SpanOutOfRange(ValueOutOfBounds):
    """An EWMA span lies outside [1, n-1] for the series length n."""


class IncompleteBinding(LmfdError):
    """A structure references a sensor role or constant slot with no bound value."""


class EquationSyntaxError(LmfdError):
    """The equation text is not well formed."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class UnknownFunction(LmfdError):
    """The equation calls a function other than sigmoid, exp, or ewma."""


class NotInGrammar(LmfdError):
    """The equation is well formed but outside the canonical search language."""


class TooFewSensors(LmfdError):
    """Candidate enumeration needs at least two sensors."""


class ConstantSeriesWarning(UserWarning):
    """A constant column (zero standard deviation) was excluded."""
