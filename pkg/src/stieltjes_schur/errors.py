"""Exception types shared across the package."""


class SchurError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(SchurError, ValueError):
    """Operand shapes are incompatible."""


class IndexRangeError(SchurError, IndexError):
    """An index violates the bound under which an object is defined."""


class SequenceTooShortError(SchurError, ValueError):
    """A transform needs more terms than the sequence provides."""


class NonRealAlphaError(SchurError, ValueError):
    """A class test was requested for a non-real interval endpoint."""


class NotInClassError(SchurError, ValueError):
    """A sequence fails a class precondition; ``witness`` says why."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnknownNameError(SchurError, KeyError):
    """An unknown class name, catalog key, or transform kind."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class BudgetExhaustedError(SchurError, RuntimeError):
    """Rejection sampling gave up."""


class ValidationError(SchurError, ValueError):
    """A serialized document does not match the expected schema."""
