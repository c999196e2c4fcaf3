"""Exception hierarchy. Every domain error derives from :class:`EndoQError`."""


class EndoQError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class ParseError(EndoQError, ValueError):
    """Malformed textual input (CLI exit code 2)."""


class EmptyGap(EndoQError):
    pass


class EmptyInterval(EndoQError):
    pass


class TypeMismatch(EndoQError):
    pass


class NotBijective(EndoQError):
    pass


class NotOrderPreserving(EndoQError, ValueError):
    pass


class ClosedGap(EndoQError):
    def __init__(self, witness):
        super().__init__(f"closed gap {witness}")
        self.witness = witness


class EmptySet(EndoQError):
    pass


class NotIdempotent(EndoQError):
    pass


class NotInImage(EndoQError):
    pass


class MaxElement(EndoQError):
    pass


class BadGamma(EndoQError):
    pass


class FiniteImage(EndoQError):
    pass


class InfiniteImage(EndoQError):
    pass


class BadParams(EndoQError):
    pass


class BadSplit(EndoQError):
    pass


class TooLarge(EndoQError):
    pass


class NotAutomorphism(EndoQError):
    pass


class IsoFixedSetUnsupported(EndoQError):
    pass


class NotCommuting(EndoQError):
    pass


class InvalidCode(EndoQError):
    pass


class NotOrdered(EndoQError):
    pass
