"""Exception hierarchy shared by all modules."""


class ArcGraphError(Exception):
    """Base class for every error raised by the package."""


class InputError(ArcGraphError):
    """Malformed or invalid user input (CLI exit code 2)."""


class DomainError(ArcGraphError):
    """A well-formed request that has no answer (CLI exit code 3)."""


class MalformedInput(InputError):
    pass


class EdgeDegree(InputError):
    pass


class NonNegativeChi(InputError):
    pass


class NotFlippable(DomainError):
    pass


class Unrealizable(DomainError):
    pass


class EdgeParallelAmbiguity(DomainError):
    pass


class NotAnArc(DomainError):
    pass


class SameClass(DomainError):
    pass


class NotMinimalPosition(DomainError):
    pass


class IndexOutOfRange(DomainError):
    pass


class LemmaViolated(ArcGraphError):
    """Raised by test oracles when a proven statement fails on an instance."""


class SeedTooLarge(DomainError):
    pass


class Disconnected(DomainError):
    pass


class Uncertified(DomainError):
    pass


class NotGrowing(DomainError):
    pass


class LimitsCoincide(DomainError):
    pass
