"""Exception hierarchy shared by the library and the command line."""


class HodgeError(Exception):
    """Base class for every error raised by bundlehodge."""


class InvalidInputError(HodgeError, ValueError):
    """User-facing input problem (CLI exit code 2)."""


class DomainError(InvalidInputError):
    """Genus or rank outside the supported range."""


class CoprimalityError(InvalidInputError):
    """Rank and degree share a common factor."""


class CapMismatchError(HodgeError, ValueError):
    """Two series with different truncation caps were combined."""


class NonUnitError(HodgeError, ZeroDivisionError):
    """Division by a series whose constant term is not +1 or -1."""


class TruncationError(HodgeError, IndexError):
    """A coefficient above the truncation cap was requested; its value is unknown."""


class ConsistencyError(HodgeError, ArithmeticError):
    """A mathematical self-check failed (CLI exit code 3).

    ``invariant`` names the violated identity so callers can report it.
    """

    def __init__(self, invariant, detail=""):
        self.invariant = invariant
        self.detail = detail
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)
