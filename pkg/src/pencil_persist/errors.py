"""Exception hierarchy.

The CLI maps these onto exit codes: :class:`ValidationError` -> 3,
:class:`NumericalError` -> 4, :class:`InternalInconsistency` -> 2.
"""


class PencilPersistError(Exception):
    """Base class for all package errors."""


class ValidationError(PencilPersistError, ValueError):
    """Input rejected before any numerics ran."""


class NotHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class NotPositiveDefinite(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class E0InSpectrum(ValidationError):
    """The Birman-Schwinger energy is (numerically) an eigenvalue of H0."""


class UnknownInstance(ValidationError):
    pass


class NumericalError(PencilPersistError, ArithmeticError):
    pass


class NoConvergence(NumericalError):
    pass


class Singular(NumericalError):
    pass


class SearchExhausted(NumericalError):
    """Randomized construction ran out of retries."""


class InternalInconsistency(PencilPersistError, AssertionError):
    """A check that holds in exact arithmetic failed: this is a bug."""
