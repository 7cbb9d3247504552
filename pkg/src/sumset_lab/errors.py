"""Exception hierarchy shared by every module."""


class SumsetLabError(Exception):
    """Base class for all library errors."""


class DomainError(SumsetLabError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class RangeError(SumsetLabError, ValueError):
    """A query exceeds the range covered by a precomputed table."""


class ExactOverflowError(SumsetLabError, OverflowError):
    """An exact integer result would exceed the supported width."""


class CapacityError(SumsetLabError, ValueError):
    """A combinatorial enumeration would exceed its size cap."""


class PreconditionError(SumsetLabError, ValueError):
    """A structural precondition on the inputs does not hold."""


class DescriptorParseError(SumsetLabError, ValueError):
    """A set descriptor could not be parsed.

    ``position`` is the 0-based character offset where parsing failed.
    """

    def __init__(self, message, text, position):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position
