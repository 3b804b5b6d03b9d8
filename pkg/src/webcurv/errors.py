"""Exception hierarchy shared by every module."""


class WebCurvatureError(Exception):
    """Base class for all errors raised by webcurv."""


class InputError(WebCurvatureError):
    """Malformed or invalid user input (CLI exit code 2)."""


class ParseError(InputError):
    pass


class DegreeError(InputError):
    pass


class CoefficientCountError(InputError):
    pass


class DuplicateSlopes(InputError):
    pass


class WrongDegree(InputError):
    pass


class NoValidPivotRow(InputError):
    """No row of B can be deleted to leave an invertible square matrix."""


class DivisionByZero(WebCurvatureError, ZeroDivisionError):
    pass


class SingularMatrix(WebCurvatureError):
    pass


class DimensionMismatch(WebCurvatureError, ValueError):
    pass


class PointError(WebCurvatureError):
    """A pointwise evaluation failed (CLI exit code 3)."""


class PoleAtPoint(PointError):
    def __init__(self, message: str, index: tuple[int, int] | None = None):
        super().__init__(message)
        self.index = index


class JetDivisionByZero(PointError, SingularMatrix):
    """A required leading jet coefficient vanishes at the base point."""
