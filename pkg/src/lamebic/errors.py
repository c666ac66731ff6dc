"""Exception hierarchy shared by all modules."""


class LamebicError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LamebicError, ValueError):
    """Argument outside the mathematical domain (e.g. elliptic parameter)."""


class GridError(LamebicError, ValueError):
    """Invalid grid or mismatched grids."""


class UnsupportedError(LamebicError, ValueError):
    """Requested Lamé order j is not implemented."""


class NoSeedError(LamebicError):
    """No band-edge state vanishes at the origin."""


class ParameterError(LamebicError, ValueError):
    """Deformation parameter outside the allowed range."""


class BoundaryConditionError(LamebicError, ValueError):
    """Seed state does not vanish at the origin."""


class SingularDeformationError(LamebicError):
    """``I + lambda`` is not strictly positive somewhere on the grid."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class InconsistentInputError(LamebicError):
    """A state fails the Schrodinger residual check it is required to pass."""


class InconclusiveError(LamebicError):
    """Domain too short to classify square-integrability."""


class AccuracyError(LamebicError):
    """Integrator step too large for the requested energy range."""
