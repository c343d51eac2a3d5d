"""Exception hierarchy shared by every module.

Each class carries the process exit code the CLI maps it to.
"""


class NearfieldError(Exception):
    exit_code = 1


class InputError(NearfieldError, ValueError):
    """Malformed or missing user input (flags, files, potential samples)."""

    exit_code = 2


class DomainError(NearfieldError, ValueError):
    """Argument outside the mathematical domain of an operation."""

    exit_code = 3


class NumericalError(NearfieldError, ArithmeticError):
    """A computation failed or produced an untrustworthy result."""

    exit_code = 4


class UnitarityError(NumericalError):
    """|D/C| drifted away from 1 for a real potential."""


class CapacityError(NearfieldError):
    """Requested order exceeds the configured hard cap."""

    exit_code = 5


class TruncationWarning(UserWarning):
    """A partial-wave sum was cut below its admissible truncation order."""
