"""Exception hierarchy. Every error raised by the package derives from ``KPeaksError``."""


class KPeaksError(Exception):
    """Base class for package errors."""


class EmptyInput(KPeaksError, ValueError):
    pass


class NotABijection(KPeaksError, ValueError):
    pass


class ValueOutOfRange(KPeaksError, ValueError):
    pass


class EmptySequence(KPeaksError, ValueError):
    pass


class DomainError(KPeaksError, ValueError):
    pass


class DegenerateDenominator(DomainError):
    pass


class TooLarge(KPeaksError, ValueError):
    pass


class Overflow(KPeaksError, ArithmeticError):
    pass


class InvalidSelector(KPeaksError, ValueError):
    pass


class TooFewSamples(KPeaksError, ValueError):
    pass


class DegenerateScale(KPeaksError, ValueError):
    pass
