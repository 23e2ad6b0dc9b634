"""Exception hierarchy shared by every module."""


class AlgebraError(Exception):
    """Base class for all errors raised by tracefac."""


class ZeroInverse(AlgebraError, ZeroDivisionError):
    pass


class NotAUnit(AlgebraError, ZeroDivisionError):
    """Inversion of a non-unit in a ring that is not a division ring."""


class RingMismatch(AlgebraError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class NotSquare(AlgebraError):
    pass


class NotInvertible(AlgebraError):
    pass


class NotSingular(AlgebraError):
    pass


class CentralInput(AlgebraError):
    pass


class NotNilpotent(AlgebraError):
    pass


class NotUnipotent(AlgebraError):
    pass


class NotUnitriangular(AlgebraError):
    pass


class BadPivot(AlgebraError):
    pass


class DivisionByZeroPoly(AlgebraError, ZeroDivisionError):
    pass


class NoWitnessFound(AlgebraError):
    """A bounded search gave up. This is not a proof that no witness exists."""


class NotOverSubfield(AlgebraError):
    pass


class SmallCenter(AlgebraError):
    pass


class ArityMismatch(AlgebraError):
    pass


class FieldComponent(AlgebraError):
    pass


class SearchExhausted(AlgebraError):
    pass


class BudgetExceeded(AlgebraError):
    pass


class ParseError(AlgebraError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class NotTraceless(AlgebraError, ValueError):
    pass
