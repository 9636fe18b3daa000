"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`GenrelError`,
so callers (the CLI, the Monte Carlo harness) can catch one type and still
report the originating error name.
"""


class GenrelError(Exception):
    """Base class for all package errors."""

    @property
    def name(self):
        return type(self).__name__


# data model
class EmptyDataset(GenrelError, ValueError):
    pass


class RaggedRows(GenrelError, ValueError):
    pass


class NoTraitObserved(GenrelError, ValueError):
    def __init__(self, row):
        super().__init__(f"row {row} has neither y nor z observed")
        self.row = row


class NonFiniteValue(GenrelError, ValueError):
    def __init__(self, row, column):
        super().__init__(f"non-finite value at row {row}, column {column!r}")
        self.row = row
        self.column = column


class TooFewObservations(GenrelError, ValueError):
    pass


class MismatchedPlan(GenrelError, ValueError):
    pass


# links
class NonFiniteInput(GenrelError, ValueError):
    pass


# learners
class DegenerateResponse(GenrelError, ValueError):
    pass


class TooFewRows(GenrelError, ValueError):
    pass


class SingularSystem(GenrelError, ArithmeticError):
    pass


class NonFiniteLoss(GenrelError, ArithmeticError):
    pass


class DimensionMismatch(GenrelError, ValueError):
    pass


# estimators
class OutOfRange(GenrelError, ValueError):
    pass


class FoldLeakage(GenrelError, ValueError):
    pass


class EmptyFold(GenrelError, ValueError):
    pass


class DegenerateVariance(GenrelError, ArithmeticError):
    pass


class NonPositiveGeneticVariance(GenrelError, ArithmeticError):
    pass


# simulation
class BadSpec(GenrelError, ValueError):
    pass


class AllReplicationsFailed(GenrelError, RuntimeError):
    pass


# io / cli
class HeaderMismatch(GenrelError, ValueError):
    pass


class InconsistentIndicator(GenrelError, ValueError):
    def __init__(self, row, column):
        super().__init__(f"row {row}: {column}=1 but the trait cell is empty")
        self.row = row
        self.column = column


class NonNumericCell(GenrelError, ValueError):
    def __init__(self, row, column, text):
        super().__init__(f"row {row}, column {column!r}: cannot parse {text!r}")
        self.row = row
        self.column = column


class SerializationInvariant(GenrelError, ValueError):
    pass


class ConfigError(GenrelError, ValueError):
    """Malformed or unknown configuration; treated as a usage error."""


class IoError(GenrelError, OSError):
    pass
