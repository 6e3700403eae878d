"""Exception types raised across the package."""


class MeridianError(Exception):
    """Base class for all errors raised by :mod:`meridian`."""


class DegenerateInterval(MeridianError, ValueError):
    pass


class MissingDerivative(MeridianError, ValueError):
    pass


class InvalidExponent(MeridianError, ValueError):
    pass


class NonFiniteCoefficient(MeridianError, ValueError):
    pass


class SingularSystem(MeridianError, ArithmeticError):
    """The discrete homogeneous problem has a (near-)nontrivial kernel."""


class MaxPrincipleInapplicable(MeridianError, ValueError):
    pass


class NotAPoissonSolution(MeridianError, ValueError):
    pass


class LedgerMismatch(MeridianError, ValueError):
    pass


class MuTooLarge(MeridianError, ValueError):
    pass


class NoValidMu(MeridianError, ValueError):
    pass


class NoSolution(MeridianError, ValueError):
    """No catenoid spans the given rings."""


class NonPositiveProfile(MeridianError, ValueError):
    pass


class Unstable(MeridianError):
    """No positive solution of the Jacobi equation exists on the interval."""


class CertificateInvalid(MeridianError, ValueError):
    pass


class BoundaryDataTooLarge(MeridianError, ValueError):
    pass


class NotContracting(MeridianError):
    pass


class BetaZero(MeridianError, ValueError):
    pass


class Condition414Violated(MeridianError, ValueError):
    """The mean-curvature operator does not obey the maximum principle."""


class EpsilonTooLarge(MeridianError, ValueError):
    pass


class NoConvergence(MeridianError):
    def __init__(self, message, residuals=None, stage=None):
        super().__init__(message)
        self.residuals = residuals
        self.stage = stage
