"""Exception hierarchy. Everything derives from ValueError so callers that
only care about bad input can catch that."""


class K3StabError(ValueError):
    pass


class NonSpherical(K3StabError):
    """A vector that was required to satisfy v^2 = -2 does not."""


class NonSphericalReflection(NonSpherical):
    pass


class NotIsotropic(K3StabError):
    pass


class NotPrimitive(K3StabError):
    pass


class BadVectors(K3StabError):
    pass


class BadVector(BadVectors):
    pass


class WindowEmpty(K3StabError):
    pass


class CoincidentPoints(K3StabError):
    pass


class NotAnIsometry(K3StabError):
    pass


class OrientationReversed(K3StabError):
    pass


class NotMoebius(K3StabError):
    """The normalized image of exp(z) is not a degree-one rational function."""


class RankZero(K3StabError):
    """Rank-zero image of a point class; the induced map is a translation."""


class NegativeRankProduct(K3StabError):
    pass


class NonSquareRankProduct(K3StabError):
    pass


class DegenerateProportional(K3StabError):
    pass


class NotTypeII(K3StabError):
    pass
