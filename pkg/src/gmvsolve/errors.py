"""Exception hierarchy shared by every module.

Each class carries an ``exit_code`` that the CLI returns when the error
escapes a command.
"""


class GmvError(Exception):
    exit_code = 3


class FieldError(GmvError):
    exit_code = 4


class InvalidModulus(FieldError, ValueError):
    pass


class CompositeModulus(FieldError, ValueError):
    pass


class FieldMismatch(FieldError, ValueError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class PolynomialError(GmvError):
    exit_code = 5


class MissingVariable(PolynomialError, KeyError):
    pass


class NotUnivariate(PolynomialError, ValueError):
    pass


class ZeroPolynomial(PolynomialError, ValueError):
    pass


class ZeroModulus(PolynomialError, ValueError):
    pass


class BothZero(PolynomialError, ValueError):
    pass


class InexactDivision(PolynomialError, ArithmeticError):
    pass


class ResultantError(GmvError):
    exit_code = 6


class NotLinear(ResultantError, ValueError):
    pass


class TrivialDense(ResultantError, ValueError):
    pass


class ZeroDegree(ResultantError, ValueError):
    pass


class BadShape(ResultantError, ValueError):
    pass


class SystemError_(GmvError):
    """Base for failures tied to a particular GMV instance."""

    exit_code = 7


class DegenerateLeadingCoefficient(SystemError_):
    pass


class DegenerateSystem(SystemError_):
    pass


class EmptyIdeal(SystemError_):
    pass


class OracleTooLarge(SystemError_):
    exit_code = 8


class BadN(GmvError, ValueError):
    exit_code = 2


class CacheIntegrity(GmvError):
    exit_code = 9


class RootFindingError(GmvError):
    exit_code = 10


class DegreeAnomaly(UserWarning):
    """An observed degree differs from the generic closed-form prediction."""


class DegeneratePlan(GmvError, ValueError):
    exit_code = 11
