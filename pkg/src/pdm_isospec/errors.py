"""Exception hierarchy shared by all modules."""


class IsospecError(Exception):
    """Base class for every error raised by this package."""


# special functions
class NonConvergence(IsospecError):
    pass


class PoleAtC(IsospecError):
    pass


class PoleAtNonPositiveInteger(IsospecError):
    pass


# model
class UnphysicalParameters(IsospecError):
    pass


class NonRealPotential(IsospecError):
    pass


class SecondBranchPole(IsospecError):
    pass


class MuAboveGround(IsospecError):
    pass


# intertwiners
class SeedHasNode(IsospecError):
    pass


class WronskianNode(IsospecError):
    pass


class NonRealEta(IsospecError):
    pass


class EqualFactorizationEnergies(IsospecError):
    """C2 = 0: the confluent second-order transform is not supported."""


class Inconclusive(IsospecError):
    """Quadrature could not decide between normalizable and divergent."""


class NonMonotoneZ(IsospecError):
    pass


# numerics
class NonPositiveMass(IsospecError):
    pass


class NonFiniteSample(IsospecError):
    pass


class BoxTooLarge(IsospecError):
    pass


class UnconvergedInput(IsospecError):
    pass
