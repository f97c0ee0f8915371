"""Exception types shared across the package."""


class QheckeError(Exception):
    pass


class InvalidRootDatum(QheckeError):
    pass


class NonCanonicalizable(QheckeError):
    pass


class UnsuitableData(QheckeError):
    pass


class DivisionByZeroDenominator(QheckeError):
    pass


class InternalDivisibilityFailure(QheckeError):
    """A division that is guaranteed exact failed; indicates an arithmetic bug."""


class NonIntegralResult(QheckeError):
    """An operator applied to a polynomial produced a non-polynomial component."""


class NotInSpan(QheckeError):
    pass


class NonPolynomialCoefficient(QheckeError):
    pass


class ExtractionStuck(QheckeError):
    pass


class ZeroWeight(QheckeError):
    pass


class ZeroEulerClass(QheckeError):
    pass


class ParseError(QheckeError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownIndex(QheckeError):
    pass


class UnsupportedDimension(QheckeError):
    pass
