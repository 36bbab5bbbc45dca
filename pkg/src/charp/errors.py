"""Exception hierarchy; the CLI maps each class to an exit code."""


class CharpError(Exception):
    exit_code = 1


class SpecError(CharpError, ValueError):
    """Malformed tower description or out-of-scope generator rule."""

    exit_code = 2


class ParseError(SpecError):
    """Syntax error in an expression, with the byte offset of the problem."""

    def __init__(self, message: str, offset: int | None = None, source: str | None = None):
        self.offset = offset
        self.source = source
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


class BoundExceeded(CharpError):
    """No annihilator was found within the requested search bound."""

    exit_code = 3

    def __init__(self, message: str, j_max: int | None = None, theoretical: int | None = None):
        self.j_max = j_max
        self.theoretical = theoretical
        if theoretical is not None:
            message = f"{message} (theoretical bound: K^p-dimension {theoretical})"
        super().__init__(message)


class MissingBase(CharpError):
    """The operation needs a generator X with dX = 1."""

    exit_code = 4


class Unsupported(CharpError):
    exit_code = 4


class PreconditionViolated(CharpError, ValueError):
    exit_code = 2


class VerificationFailed(CharpError):
    """A computed certificate did not verify; signals an internal bug."""

    exit_code = 5


class NonConstantMinPoly(VerificationFailed):
    pass


class NoRootWithinBound(CharpError):
    exit_code = 3


class NoTransferFound(CharpError):
    exit_code = 5


class GenericityFailure(CharpError):
    """The transferred solution vanished: the input solution was not generic."""

    exit_code = 5


class ZeroDivisorSplit(CharpError, ZeroDivisionError):
    """A non-invertible element was met modulo a reducible modulus."""

    def __init__(self, factor, cofactor):
        self.factor = factor
        self.cofactor = cofactor
        super().__init__("zero divisor found; the modulus splits")
