"""Exception hierarchy.

Mathematical failure (a constant that vanishes, a bound that does not hold)
is reported as data on certificates. Exceptions are reserved for malformed
input and for operations whose preconditions make the result meaningless.
"""


class SaddleCertError(Exception):
    """Base class for all errors raised by the package."""


class GramNotSPD(SaddleCertError):
    pass


class DimensionMismatch(SaddleCertError, ValueError):
    pass


class NonPositiveCoefficient(SaddleCertError, ValueError):
    pass


class DegenerateConstants(SaddleCertError, ValueError):
    pass


class ForwardMinorationFails(SaddleCertError):
    pass


class SingularSystem(SaddleCertError):
    pass


class SingularFineSystem(SingularSystem):
    pass


class UncertifiedCoarseSystem(SaddleCertError):
    pass


class ConformityError(SaddleCertError):
    """Embeddings do not preserve inner products or forms."""


class InfeasibleDims(SaddleCertError, ValueError):
    pass


class UnsupportedProfile(SaddleCertError, ValueError):
    pass


class ManifestError(SaddleCertError):
    """Unreadable, inconsistent or incomplete manifest / matrix files."""
