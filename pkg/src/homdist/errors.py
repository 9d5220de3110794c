"""Exception hierarchy shared by every module."""


class HomdistError(Exception):
    pass


class CycleError(HomdistError):
    """The reflexive-transitive closure of the given relations is not antisymmetric."""


class UnknownElement(HomdistError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class Mismatch(HomdistError, ValueError):
    """Maps or spaces that were expected to agree (domain, codomain, ...) do not."""


class NotOrderPreserving(Mismatch):
    pass


class NotSimplicial(Mismatch):
    pass


class NotConnected(HomdistError, ValueError):
    pass


class DegreeOutOfRange(HomdistError, IndexError):
    pass


class SizeCap(HomdistError):
    pass


class BudgetExceeded(HomdistError):
    """Raised only where a tri-state result cannot be returned instead."""
