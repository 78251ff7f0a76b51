"""Exception types shared by all cdu modules."""


class CduError(Exception):
    """Base class for all library errors."""


# -- field construction --------------------------------------------------

class NotPrime(CduError):
    def __init__(self, p):
        super().__init__(f"{p} is not prime")
        self.p = p


class DegreeMismatch(CduError):
    pass


class ReducibleModulus(CduError):
    pass


class IncompatibleTower(CduError):
    pass


class BadSubfieldDegree(CduError):
    pass


class CapExceeded(CduError):
    pass


# -- parsing -------------------------------------------------------------

class ParseError(CduError):
    """Syntax error in a polynomial or element expression.

    Carries the 0-based character position of the offending token.
    """

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class CoefficientNotInField(CduError):
    pass


# -- classification ------------------------------------------------------

class NotQuadratic(CduError):
    pass


class OddCharacteristic(CduError):
    pass


# -- constructions -------------------------------------------------------

class InvalidParams(CduError):
    pass


class PreconditionFailed(CduError):
    """A builder hypothesis failed; .report holds the itemized validation."""

    def __init__(self, report):
        failed = [item.name for item in report.items if not item.passed]
        super().__init__(f"precondition(s) failed: {', '.join(failed)}")
        self.report = report


class BadSubfield(CduError):
    pass


class BadExponent(CduError):
    pass


class GNotJStable(CduError):
    pass


class BadB(CduError):
    pass


class EvenN(CduError):
    pass


class PhiNot2to1(CduError):
    pass


class PhiNotJPermuting(CduError):
    pass


# -- monomial analysis ---------------------------------------------------

class ZeroC(CduError):
    pass


class BadC(CduError):
    pass


class COne(CduError):
    pass


# -- cli -----------------------------------------------------------------

class ConfigError(CduError):
    pass


# -- warnings ------------------------------------------------------------

class FieldTooSmallWarning(UserWarning):
    """Search field may not contain all points the analysis is after."""
