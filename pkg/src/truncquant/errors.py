"""Exception hierarchy.

Caller mistakes subclass ``ValueError``; conditions that can only arise from
an internal arithmetic bug subclass ``ArithmeticError``.
"""


class TruncQuantError(Exception):
    """Base class for every error raised by this package."""


class InputError(TruncQuantError, ValueError):
    pass


class EmptyMeasureError(InputError):
    pass


class NonpositiveAtomError(InputError):
    pass


class MassDeviationError(InputError):
    def __init__(self, mass, tol=1e-6):
        self.mass = mass
        super().__init__(f"total mass {mass!r} deviates from 1 by more than {tol:g}")


class NonpositiveArgumentError(InputError):
    pass


class InvalidQuantileLevelError(InputError):
    def __init__(self, c, interval="(0, 1)"):
        self.c = c
        super().__init__(f"quantile level c={c!r} is outside {interval}")


class NonpositiveToleranceError(InputError):
    pass


class MomentInconsistencyError(InputError):
    pass


class InvalidOrderError(InputError):
    pass


class SchemaError(InputError):
    """Malformed input file or config; ``where`` locates the offending field."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class LogConvexityViolation(TruncQuantError, ArithmeticError):
    pass


class AttainmentError(TruncQuantError, ArithmeticError):
    pass
