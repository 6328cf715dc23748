"""Exception types shared across the package."""


class UsageError(ValueError):
    """An operation was called with incompatible or malformed arguments."""


class InvertError(ArithmeticError):
    """Inversion requested for an element whose constant term is not invertible."""


class DomainError(ValueError):
    """A numeric argument lies outside the admissible domain (e.g. Im(tau) <= 0)."""


class SymmetryError(ValueError):
    """A polynomial expected to be symmetric in a root family is not."""
