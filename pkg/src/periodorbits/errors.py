"""Exception hierarchy shared by the library and the CLI."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ResourceError(RuntimeError):
    """Request refused because it exceeds the supported computational budget."""


class DegeneracyError(DomainError):
    """Numeric orbit points too close to be ranked reliably."""


class PartialLadderError(RuntimeError):
    """A cascade could not be continued; ``found`` holds the prefix located so far."""

    def __init__(self, message, found):
        super().__init__(message)
        self.found = list(found)


class PrecisionFloorError(ArithmeticError):
    """A computed quantity fell below what binary64 can resolve."""


class NotRenormalizableError(DomainError):
    """The doubling operator's rescaling condition failed."""


class CoverageError(DomainError):
    """Scan records do not cover what a verification needs."""
