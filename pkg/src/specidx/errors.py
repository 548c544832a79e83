"""Exception hierarchy for specidx.

Every numerical failure raised by the library derives from
:class:`SpecIdxError`, so callers (and the command line) can separate
numerical trouble from programming errors.
"""


class SpecIdxError(Exception):
    """Base class for all library errors."""


class ConfigError(SpecIdxError):
    """Invalid run configuration."""


class DegenerateBasis(SpecIdxError):
    """Basis vectors handed to ``make_projection`` are (numerically) dependent."""


class NotFredholm(SpecIdxError):
    """Eigenvalues of P - Q sit in the ambiguous band next to +1 or -1.

    The partially built certificate is kept on ``certificate``.
    """

    def __init__(self, msg, certificate=None):
        super().__init__(msg)
        self.certificate = certificate


class EigenvalueAtThreshold(SpecIdxError):
    """Counting threshold coincides with an eigenvalue."""


class SupportExceedsBox(SpecIdxError):
    """Potential support does not fit inside the finite-difference box."""


class SingularShift(SpecIdxError):
    """Spectral parameter z lies (numerically) on the spectrum."""


class BadQuadrature(SpecIdxError):
    """Too few quadrature nodes requested."""


class BoxTooSmall(SpecIdxError):
    """Boundary-sensitivity probe failed: result moves when the box doubles."""


class ThetaDegenerate(SpecIdxError):
    """cot(theta/2) blows up: theta too close to 0 or 2*pi."""


class DivergentBound(SpecIdxError):
    """The Hilbert-Schmidt double integral does not converge."""


class OdeFailure(SpecIdxError):
    """Adaptive ODE integration failed."""


class UnitarityViolation(SpecIdxError):
    """Computed scattering matrix is not unitary to tolerance."""


class UnderResolved(SpecIdxError):
    """Eigenphase branches move too far between consecutive energies."""

    def __init__(self, msg, npoints=None):
        super().__init__(msg)
        self.npoints = npoints


class OutOfRange(SpecIdxError):
    """Argument outside the domain of a closed-form expression."""
