"""Exception hierarchy shared by every module of the package."""


class SwapAlgError(Exception):
    """Base class for all errors raised by swapalg."""


class DuplicatePoint(SwapAlgError, ValueError):
    pass


class UnknownPoint(SwapAlgError, KeyError):
    def __str__(self):
        # KeyError quotes its argument; keep the message readable
        return str(self.args[0]) if self.args else "unknown point"


class PointSetMismatch(SwapAlgError, ValueError):
    pass


class DivisionByZero(SwapAlgError, ZeroDivisionError):
    pass


class BadSpec(SwapAlgError, ValueError):
    pass


class BadModel(SwapAlgError, ValueError):
    pass


class UnsupportedRank(SwapAlgError, ValueError):
    pass


class DenominatorVanishesInZn(SwapAlgError, ZeroDivisionError):
    pass


class IllegalCrossFraction(SwapAlgError, ValueError):
    pass


class InsufficientPoints(SwapAlgError, ValueError):
    pass


class UnsupportedSize(SwapAlgError, ValueError):
    pass


class NotADiagonal(SwapAlgError, ValueError):
    pass


class DegenerateFlags(SwapAlgError, ValueError):
    pass


class UnknownSuite(SwapAlgError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown suite"


class BadParams(SwapAlgError, ValueError):
    pass


class ParseError(SwapAlgError, ValueError):
    """Syntax error in an expression, with 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
