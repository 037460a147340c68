"""Exception hierarchy. Everything raised on bad input derives from K3ModuliError."""


class K3ModuliError(ValueError):
    pass


# lattice
class InvalidGenus(K3ModuliError):
    pass


class NonSphericalReflector(K3ModuliError):
    pass


class NonPrimitiveVector(K3ModuliError):
    pass


class ZeroVector(K3ModuliError):
    pass


class NonIntegralPairing(K3ModuliError):
    pass


class NotInPerp(K3ModuliError):
    pass


class OddSquare(K3ModuliError):
    pass


class SquareBelowMinusTwo(K3ModuliError):
    pass


# cones
class ZeroClass(K3ModuliError):
    pass


class BelowThreshold(K3ModuliError):
    pass


class InvalidParameters(K3ModuliError):
    pass


class NoSolution(K3ModuliError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


# moduli
class InvalidIndex(K3ModuliError):
    pass


# autoequivalence calculus
class ExprSyntaxError(K3ModuliError):
    def __init__(self, message, position, expected=()):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.expected = tuple(expected)


class UnknownAtom(K3ModuliError):
    def __init__(self, name, position):
        super().__init__(f"unknown atom {name!r} at position {position}")
        self.name = name
        self.position = position


class ExprTypeError(K3ModuliError):
    pass


class EndpointMismatch(K3ModuliError):
    pass
