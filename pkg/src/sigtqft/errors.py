"""Exception hierarchy shared by every module of the package."""


class SigError(Exception):
    """Base class for all package errors."""


class InvalidInput(SigError, ValueError):
    """Arguments violate an operation's preconditions (bad p, q, colors...)."""


class ExpansionExhausted(SigError):
    """A finite continued fraction was asked for more terms than it has."""


class InsufficientDepth(SigError):
    """A continued-fraction-backed quantity could not be decided or bounded."""


class CertificationError(SigError):
    """A floating evaluation could not be certified as an integer."""

    def __init__(self, message, best_residual=None, bits=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.bits = bits


class TrackingError(SigError):
    """Continuous-argument tracking failed to keep phase steps small."""


class ContractFailure(SigError):
    """A sweep or cross-method check found a violated identity."""
