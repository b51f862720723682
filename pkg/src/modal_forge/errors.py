"""Exception hierarchy shared across the toolkit.

The CLI maps these onto process exit codes: InvalidInputError -> 2,
DataError -> 3, NumericalError -> 4.
"""


class ModalForgeError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(ModalForgeError, ValueError):
    """Bad parameter, configuration, or argument supplied by the caller."""


class DataError(ModalForgeError, ValueError):
    """Malformed, missing, or inconsistent external data (files, records)."""


class NumericalError(ModalForgeError, ArithmeticError):
    """Numerical failure: divergence or non-finite values during computation."""


class CheckpointError(InvalidInputError):
    """Model checkpoint is structurally incompatible or unreadable."""
