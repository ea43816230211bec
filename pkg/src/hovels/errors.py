"""Exception types raised across the library."""


class HovelError(Exception):
    """Base class; the CLI maps these to the input-error exit code."""


class NotGCM(HovelError):
    pass


class NotSymmetrizable(HovelError):
    pass


class NotReal(HovelError):
    pass


class NotSpherical(HovelError):
    pass


class NotProjectable(HovelError):
    pass


class RootBoundTooSmall(HovelError):
    pass


class NotTangentFacet(HovelError):
    pass


class BadPrime(HovelError):
    pass


class IdentityElement(HovelError):
    pass


class NotTorus(HovelError):
    pass


class ZeroParameter(HovelError):
    pass


class UnsupportedLetter(HovelError):
    pass


class NonterminatingRewrite(HovelError):
    pass


class NeitherSpherical(HovelError):
    pass


class NotGrignotant(HovelError):
    pass


class InconsistentCocycle(HovelError):
    pass


class NotDiagramAutomorphism(HovelError):
    pass


class NotInUa(HovelError):
    pass


class RadiusTooLarge(HovelError):
    pass


class InputError(HovelError):
    pass
