# errors.py
"""Exception hierarchy shared by every package under src/."""


class NdsysError(Exception):
    """Base class for all toolkit errors."""


class InputError(NdsysError, ValueError):
    """A file could not be read, parsed or validated against its schema."""


class ArityError(NdsysError, ValueError):
    """A point of C^N and an N-tuple disagree on N."""


class RangeError(NdsysError, ArithmeticError):
    """An exact integer or a table size left its admissible range."""


class ShapeError(NdsysError, ValueError):
    """Matrix shapes do not chain or do not match the declared dimensions."""


class DomainError(NdsysError, ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(NdsysError):
    """A documented precondition (conservativity, commutation, Gram match) fails."""


class SingularityError(NdsysError, ArithmeticError):
    """I - zA is numerically singular at the requested point."""

    def __init__(self, message: str, smallest_singular_value: float):
        super().__init__(f"{message} (smallest singular value {smallest_singular_value:.3e})")
        self.smallest_singular_value = smallest_singular_value


class DivergenceError(NdsysError, ArithmeticError):
    """The Neumann series in zA does not converge."""

    def __init__(self, message: str, pencil_norm: float):
        super().__init__(f"{message} (||zA|| = {pencil_norm:.6f})")
        self.pencil_norm = pencil_norm


class RankAmbiguityError(NdsysError):
    """Singular values fall in the dead zone between rank and noise."""

    def __init__(self, message: str, singular_values):
        super().__init__(message)
        self.singular_values = list(singular_values)


class VerificationError(NdsysError):
    """A computed object failed the check of its defining identities."""

    def __init__(self, message: str, residuals: dict | None = None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class RealizationError(VerificationError):
    """The assembled colligation failed its verification."""
