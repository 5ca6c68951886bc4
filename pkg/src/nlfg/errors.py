"""Exception hierarchy shared by every module of the package."""


class NlfgError(Exception):
    """Base class for all errors raised by this package."""


class SpecificationError(NlfgError, ValueError):
    """Invalid parameters, mismatched fields or malformed input."""


class NotPrimitiveError(SpecificationError):
    """A polynomial or register failed a primitivity audit."""


class BoundExceededError(NlfgError):
    """A desk-scale computational bound would be exceeded."""


class CertificationError(BoundExceededError):
    """Primitivity cannot be certified because factoring is too expensive."""


class ConsistencyError(NlfgError, ArithmeticError):
    """An internal arithmetic identity failed (e.g. an inexact division)."""
