"""Exception hierarchy shared across the package."""


class RsdkitError(Exception):
    """Base class for all rsdkit errors."""


class DimensionMismatch(RsdkitError):
    pass


class FieldMismatch(RsdkitError):
    pass


class InvalidParameters(RsdkitError):
    pass


class Singular(RsdkitError):
    pass


class RankDeficient(RsdkitError):
    pass


class NoSuchSubgroup(RsdkitError):
    pass


class ZeroScale(RsdkitError):
    pass


class NotSubgroup(RsdkitError):
    pass


class BadZPrime(RsdkitError):
    pass


class ContextMismatch(RsdkitError):
    pass


class EntryOutsideE(RsdkitError):
    pass


class ZTooSmall(RsdkitError):
    pass


class ListCapExceeded(RsdkitError):
    """An ISD candidate list exceeded the configured size cap."""


class NotSystematic(RsdkitError):
    pass


class DimensionTooLarge(RsdkitError):
    """Lattice dimension exceeds the configured enumeration ceiling."""


class OutputCapExceeded(RsdkitError):
    """Enumeration produced more vectors than the configured cap."""


class TooFar(RsdkitError):
    pass


class NotInLattice(RsdkitError):
    pass


class NoParticularSolution(RsdkitError):
    pass


class BadAssignment(RsdkitError):
    pass


class ZeroSyndrome(RsdkitError):
    pass


class NonIntegerCenter(RsdkitError):
    pass
