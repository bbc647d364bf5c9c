"""
Geometry of the upper half-plane: points, unimodular matrices and their
Moebius action, the displacement function, hyperbolic distance and
reduction to the standard fundamental domain of SL2(Z).
"""

import math
import logging

import numpy as np

from pysupnorm.common import parse_complex
from pysupnorm.exceptions import PreconditionError, IterationError

logger = logging.getLogger(__name__)

REDUCTION_TOL = 1e-12
REDUCTION_MAXITER = 10000


class UpperHalfPoint(object):
    """
    A point tau = xi + i*eta of the upper half-plane

    :ivar xi: real part
    :ivar eta: imaginary part, always positive
    """
    __slots__ = ['xi', 'eta']

    def __init__(self, xi, eta):
        xi, eta = float(xi), float(eta)
        if not (math.isfinite(xi) and math.isfinite(eta)):
            raise PreconditionError('Non-finite point: {}, {}'.format(xi, eta))
        if eta <= 0:
            raise PreconditionError('Point not in the upper half-plane: '
                                    'eta = {}'.format(eta))
        self.xi = xi
        self.eta = eta

    @classmethod
    def from_complex(cls, z):
        "Builds a point from a complex number"
        z = complex(z)
        return cls(z.real, z.imag)

    @classmethod
    def parse(cls, text):
        "Builds a point from a literal like '0.5+1.2i'"
        return cls.from_complex(parse_complex(text))

    def as_complex(self):
        return complex(self.xi, self.eta)

    def __eq__(self, other):
        if not isinstance(other, UpperHalfPoint):
            return NotImplemented
        return self.xi == other.xi and self.eta == other.eta

    def __hash__(self):
        return hash((self.xi, self.eta))

    def __repr__(self):
        return 'UpperHalfPoint({!r}, {!r})'.format(self.xi, self.eta)


class GroupElement(object):
    """
    An integer matrix (a b; c d) of determinant one.

    Equality is equality of matrices; use canonical() to compare the
    projective classes {g, -g}.
    """
    __slots__ = ['a', 'b', 'c', 'd']

    def __init__(self, a, b, c, d):
        a, b, c, d = int(a), int(b), int(c), int(d)
        if a * d - b * c != 1:
            raise PreconditionError('Determinant of ({}, {}, {}, {}) '
                                    'is not 1'.format(a, b, c, d))
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def S(cls):
        "The inversion tau -> -1/tau"
        return cls(0, -1, 1, 0)

    @classmethod
    def T(cls, n=1):
        "Translation tau -> tau + n"
        return cls(1, n, 0, 1)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other):
        a, b, c, d = self.as_tuple()
        e, f, g, h = other.as_tuple()
        return GroupElement(a * e + b * g, a * f + b * h,
                            c * e + d * g, c * f + d * h)

    def __neg__(self):
        return GroupElement(-self.a, -self.b, -self.c, -self.d)

    def inverse(self):
        return GroupElement(self.d, -self.b, -self.c, self.a)

    @property
    def trace(self):
        return self.a + self.d

    def is_central(self):
        "True for +/- identity"
        return self.b == 0 and self.c == 0 and self.a == self.d

    def is_elliptic(self):
        return abs(self.trace) < 2

    def is_parabolic(self):
        return abs(self.trace) == 2 and not self.is_central()

    def canonical(self):
        """
        Representative of the class {g, -g} with c > 0, or c = 0 and d > 0

        :rtype: GroupElement
        """
        if self.c < 0 or (self.c == 0 and self.d < 0):
            return -self
        return self

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __lt__(self, other):
        return self.as_tuple() < other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return 'GroupElement({}, {}, {}, {})'.format(*self.as_tuple())


class DomainTruncation(object):
    """
    The truncation height Y splitting the fundamental domain into the
    compact part F_Y (eta <= Y) and the cusp neighborhood (eta >= Y)
    """
    __slots__ = ['Y']

    def __init__(self, Y):
        Y = float(Y)
        if not Y > 0:
            raise PreconditionError('Truncation height must be positive')
        self.Y = Y

    def contains(self, tau, tol=REDUCTION_TOL):
        "True if tau lies in the truncated fundamental domain F_Y"
        return is_reduced(tau, tol) and tau.eta <= self.Y

    def as_dict(self):
        return {'Y': self.Y}


def mobius_apply(g, tau):
    """
    Applies g to tau by fractional linear transformation

    :type g: GroupElement
    :type tau: UpperHalfPoint
    :rtype: UpperHalfPoint
    """
    a, b, c, d = g.as_tuple()
    xi, eta = tau.xi, tau.eta
    norm2 = xi * xi + eta * eta
    denom = (c * xi + d) ** 2 + (c * eta) ** 2
    re = (a * c * norm2 + (a * d + b * c) * xi + b * d) / denom
    return UpperHalfPoint(re, eta / denom)


def automorphy_modulus(g, tau):
    "|c*tau + d|"
    return math.hypot(g.c * tau.xi + g.d, g.c * tau.eta)


def displacement(tau, tau2):
    """
    The displacement sigma(tau, tau2) = |tau - conj(tau2)|^2 / (4 eta eta2),
    which equals cosh(dist/2)**2

    :rtype: float
    """
    dx = tau.xi - tau2.xi
    dy = tau.eta - tau2.eta
    return 1.0 + (dx * dx + dy * dy) / (4.0 * tau.eta * tau2.eta)


def displacement_array(xi, eta, xi2, eta2):
    "Vectorized displacement over numpy arrays of coordinates"
    xi, eta = np.asarray(xi, dtype=float), np.asarray(eta, dtype=float)
    xi2, eta2 = np.asarray(xi2, dtype=float), np.asarray(eta2, dtype=float)
    return 1.0 + ((xi - xi2) ** 2 + (eta - eta2) ** 2) / (4.0 * eta * eta2)


def sigma_to_distance(sigma):
    "Hyperbolic distance for a displacement value (array friendly)"
    excess = np.maximum(np.asarray(sigma, dtype=float) - 1.0, 0.0)
    return 2.0 * np.arcsinh(np.sqrt(excess))


def distance_to_sigma(rho):
    "Displacement value at hyperbolic distance rho"
    return np.cosh(0.5 * np.asarray(rho, dtype=float)) ** 2


def hyp_distance(tau, tau2):
    """
    Hyperbolic distance 2*arccosh(sqrt(sigma)), evaluated through arcsinh
    so small distances keep full relative accuracy

    :rtype: float
    """
    dx = tau.xi - tau2.xi
    dy = tau.eta - tau2.eta
    excess = (dx * dx + dy * dy) / (4.0 * tau.eta * tau2.eta)
    return 2.0 * math.asinh(math.sqrt(excess))


def is_reduced(tau, tol=REDUCTION_TOL):
    "True if tau lies in {|xi| <= 1/2, |tau| >= 1} up to tol"
    return (abs(tau.xi) <= 0.5 + tol and
            tau.xi * tau.xi + tau.eta * tau.eta >= 1.0 - tol)


def reduce_to_fundamental_domain(tau, tol=REDUCTION_TOL,
                                 maxiter=REDUCTION_MAXITER):
    """
    Moves tau into the standard fundamental domain of SL2(Z).

    Alternates translation by the nearest integer and the inversion
    tau -> -1/tau. Points already inside (up to tol) are returned unchanged
    with the identity, so the reduction is idempotent. Boundary ties are not
    canonicalized.

    :param tau: point to reduce
    :param tol: boundary tolerance
    :param maxiter: iteration cap
    :type tau: UpperHalfPoint
    :returns: reduced point and g with g.tau equal to it
    :rtype: tuple (UpperHalfPoint, GroupElement)
    """
    if not (math.isfinite(tau.xi) and math.isfinite(tau.eta)):
        raise PreconditionError('Cannot reduce a non-finite point')

    g = GroupElement.identity()
    z = tau.as_complex()
    for _ in range(maxiter):
        if abs(z.real) > 0.5 + tol:
            n = math.floor(z.real + 0.5)
            z = z - n
            g = GroupElement.T(-n) * g
        elif abs(z) ** 2 < 1.0 - tol:
            z = -1.0 / z
            g = GroupElement.S() * g
        else:
            break
    else:
        raise IterationError('Reduction of {!r} did not finish in {} '
                             'iterations'.format(tau, maxiter))

    if g == GroupElement.identity():
        return tau, g

    reduced = mobius_apply(g, tau)
    logger.debug('Reduced %r to %r by %r', tau, reduced, g)
    return reduced, g


def in_cusp_neighborhood(tau, trunc):
    """
    Membership in the cusp neighborhood {eta >= Y} of a reduced point
    (one cusp at infinity, identity scaling matrix). Closed at eta = Y.

    :type tau: UpperHalfPoint
    :type trunc: DomainTruncation
    :rtype: bool
    """
    return tau.eta >= trunc.Y
