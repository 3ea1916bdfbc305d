"""Exception hierarchy shared by all tfext modules."""


class TfextError(Exception):
    """Base class for every error raised on bad mathematical input."""


class DimensionMismatch(TfextError, ValueError):
    pass


class SingularMatrix(TfextError, ArithmeticError):
    pass


class NotFullRank(TfextError, ValueError):
    pass


class NotSublattice(TfextError, ValueError):
    pass


class NotPrime(TfextError, ValueError):
    pass


class NotMember(TfextError, ValueError):
    pass


class InvalidTowerMap(TfextError, ValueError):
    pass


class Incompatible(TfextError, ValueError):
    pass


class IndexOutOfRange(TfextError, IndexError):
    pass


class PrecisionExhausted(TfextError, ArithmeticError):
    pass


class BadDenominator(TfextError, ValueError):
    pass


class InvalidCocycle(TfextError, ValueError):
    pass


class BadHomomorphism(TfextError, ValueError):
    pass


class MalformedInput(TfextError, ValueError):
    pass
