"""Exception hierarchy shared by all modules."""


class FourStateError(Exception):
    """Base class for every error raised by this package."""


class InputError(FourStateError, ValueError):
    """Malformed textual or structured input."""


# exact linear algebra
class SingularMatrix(FourStateError):
    pass


class NonSquare(FourStateError):
    pass


# polynomials
class DegreeZero(FourStateError):
    pass


class BothZero(FourStateError):
    pass


class DegreeTooLow(FourStateError):
    pass


class DegreeTooHigh(FourStateError):
    pass


# operator / wave cone
class PreconditionUnverified(FourStateError):
    """A certificate the operation depends on does not hold."""


class DependentBasis(FourStateError):
    pass


# T4 and verification pipeline
class SingularSystem(FourStateError):
    pass


class SingularInterpolation(FourStateError):
    pass


class SingularDependency(FourStateError):
    """The implicit function theorem cannot be applied (dependent block is singular)."""


# laminates
class NotAWaveDirection(FourStateError):
    pass


class IllegalSplit(FourStateError):
    pass


class UnknownLeaf(FourStateError):
    pass


class InfeasibleFractions(FourStateError):
    pass
