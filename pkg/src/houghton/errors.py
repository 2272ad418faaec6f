"""Exception hierarchy shared by every module of the package."""


class HoughtonError(ValueError):
    """Base class for all errors raised by this package."""


class NonZeroTranslationSum(HoughtonError):
    pass


class NotBijective(HoughtonError):
    pass


class BadPoint(HoughtonError):
    pass


class MismatchedN(HoughtonError):
    pass


class InfiniteSupport(HoughtonError):
    pass


class TvecMismatch(HoughtonError):
    pass


class BadIndex(HoughtonError):
    pass


class BadSpec(HoughtonError):
    pass


class BadN(HoughtonError):
    pass


class OddV(HoughtonError):
    pass


class UnboundLabel(HoughtonError):
    pass


class BadWord(HoughtonError):
    pass


class PreconditionViolated(HoughtonError):
    pass


class InvalidInput(HoughtonError):
    pass


class NotEven(HoughtonError):
    pass


class SupportOutsideOmega(HoughtonError):
    pass


class BadParams(HoughtonError):
    pass


class InternalCheckFailed(RuntimeError):
    """A recovery step failed its own postcondition.

    This indicates a bug (or a false mathematical assumption), never bad
    user input, so it deliberately does not derive from HoughtonError.
    """
