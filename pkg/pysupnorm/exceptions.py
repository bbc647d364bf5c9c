"""
Exceptions raised by pysupnorm routines
"""


class IterationError(Exception):
    """
    The procedure has run out of iterations without finding a result
    """

    pass


class PreconditionError(ValueError):
    """
    Raised when the arguments to a routine violate its hypotheses
    (non-positive heights, non-unimodular matrices, weights below 5, ...)
    """

    pass


class ConfigurationError(ValueError):
    """
    Raised when a run configuration is invalid
    """

    pass


class TruncationError(ArithmeticError):
    """
    Raised when a truncated series or enumeration cannot certify that its
    dropped tail is below the requested tolerance.

    :ivar bound: the tail bound that was achieved
    :ivar radius: completeness radius (displacement) reached, if applicable
    """

    def __init__(self, message, bound=None, radius=None):
        ArithmeticError.__init__(self, message)
        self.bound = bound
        self.radius = radius


class AccuracyError(ArithmeticError):
    """
    Raised when a quadrature error estimate exceeds its tolerance

    :ivar estimate: the a-posteriori error estimate
    :ivar tol: the tolerance that was requested
    """

    def __init__(self, message, estimate=None, tol=None):
        ArithmeticError.__init__(self, message)
        self.estimate = estimate
        self.tol = tol


class InconsistencyError(ArithmeticError):
    """
    Raised when Jacobi form coefficients do not depend only on the
    discriminant and the residue class of r
    """

    pass


class ConstructionError(Exception):
    """
    Raised when a built-in form fails its self-validation
    """

    pass


class FileFormatError(Exception):
    """
    Error raised when a problem is encountered parsing a file
    """

    pass
