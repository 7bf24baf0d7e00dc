"""Exception types raised across the package."""


class QciError(Exception):
    """Base class for all package errors."""


class SizeError(QciError, ValueError):
    """Register size or basis index outside the supported range."""


class ValidationError(QciError, ValueError):
    """Input fails a structural or numerical check."""


class ArgumentError(QciError, ValueError):
    pass


class DomainError(QciError, ValueError):
    pass


class KindError(QciError, TypeError):
    """Measurement outcome of the wrong kind for the interpretation."""


class ShapeError(QciError, ValueError):
    pass


class CorruptionError(QciError, LookupError):
    """An assignment table is missing a row it must contain."""


class NotFoundError(QciError, LookupError):
    pass


class InsufficientDataError(QciError, ValueError):
    pass


class PreconditionError(QciError, ValueError):
    pass


class NonlinearBoundaryError(ValidationError):
    """Boundary specification failed the linearity check."""


class WorthinessError(QciError, ValueError):
    """Boundary specification needs too many run-time parameters.

    Raised when the parameter count grows faster than linearly in the
    number of qubits, at which point simulating on a quantum register
    cannot beat a classical model.
    """
