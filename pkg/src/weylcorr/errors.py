"""Exception hierarchy shared by every module."""


class WeylCorrError(Exception):
    """Base class for all errors raised by this package."""


class SizeError(WeylCorrError, ValueError):
    """An enumeration cap would be exceeded."""


class DomainError(WeylCorrError, ValueError):
    """Arguments live on incompatible ground sets or are out of range."""


class UnsupportedError(WeylCorrError, NotImplementedError):
    """The operation is not available for this family of groups."""


class PreconditionError(WeylCorrError, ValueError):
    pass


class InvariantError(WeylCorrError, ValueError):
    """A value would violate its type invariant (e.g. dependent frame lines)."""


class StructuralError(WeylCorrError, RuntimeError):
    """A map fails to respect the combinatorial structure it is checked against."""


class ParseError(WeylCorrError, ValueError):
    pass
