"""Exception hierarchy shared by all pgcode modules."""


class PgcodeError(Exception):
    """Base class for every error raised by this package."""


class NotPrime(PgcodeError):
    pass


class Reducible(PgcodeError):
    pass


class TooLarge(PgcodeError):
    pass


class DivisionByZero(PgcodeError):
    pass


class DimensionOutOfRange(PgcodeError):
    pass


class BadDimensions(PgcodeError):
    pass


class NotDisjoint(PgcodeError):
    pass


class IndexMismatch(PgcodeError):
    pass


class FrameMismatch(PgcodeError):
    pass


class NotInCode(PgcodeError):
    pass


class NotSquare(PgcodeError):
    pass


class PrimeField(PgcodeError):
    pass


class Impossible(PgcodeError):
    pass


class EmptySet(PgcodeError):
    pass


class UnknownTask(PgcodeError):
    pass


class BadConfig(PgcodeError):
    pass
