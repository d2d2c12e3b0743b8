"""Exception hierarchy shared by every module of the package."""


class CurveImageError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 5


class DegenerateInput(CurveImageError, ValueError):
    exit_code = 2


class DegenerateConstant(CurveImageError, ValueError):
    """Raised when a map is constant where a nonconstant one is required.

    ``value`` optionally carries the singleton image.
    """

    exit_code = 4

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class DomainViolation(CurveImageError, ValueError):
    exit_code = 3


class WrongDimension(CurveImageError, ValueError):
    exit_code = 4


class WrongArity(CurveImageError, ValueError):
    exit_code = 4


class NotAPolynomialImage(CurveImageError, ValueError):
    exit_code = 4


class NotSingleRealBranchAtInfinity(CurveImageError, ValueError):
    exit_code = 4


class NotOnCurve(CurveImageError, ValueError):
    exit_code = 4


class NotInSubfield(CurveImageError, ArithmeticError):
    exit_code = 5


class GenericityFailure(CurveImageError, RuntimeError):
    exit_code = 5


class InternalContradiction(CurveImageError, RuntimeError):
    exit_code = 5
