"Misc math functions"

import logging

import numpy as np
from scipy import integrate

from pysupnorm.exceptions import AccuracyError

logger = logging.getLogger(__name__)

LOG2 = np.log(2.0)


def log_cosh(x):
    "log(cosh(x)) without overflow"
    x = np.abs(np.asarray(x, dtype=float))
    return x + np.log1p(np.exp(-2.0 * x)) - LOG2


def log_sinh(x):
    "log(sinh(x)) for x > 0 without overflow"
    x = np.asarray(x, dtype=float)
    small = x < 1e-3
    with np.errstate(divide='ignore', invalid='ignore'):
        big = x + np.log1p(-np.exp(-2.0 * x)) - LOG2
        direct = np.log(np.sinh(np.where(small, x, 1.0)))
    return np.where(small, direct, big)


def sech_power(x, k):
    "cosh(x)**(-k), computed in log space"
    return np.exp(-k * log_cosh(x))


def sinh_shift_integral(k, delta, shift, tol=1e-12):
    """
    Evaluates the integral of sinh(rho + shift) * cosh(rho/2)**(-k) over
    rho in [delta, infinity) by adaptive quadrature.

    This is the tail shape shared by the counting inequality, the imported
    integral bound and the Bergman tail majorant.

    :param k: exponent, must exceed 2 for convergence
    :param delta: lower limit
    :param shift: nonnegative shift inside sinh
    :param tol: absolute tolerance
    :rtype: float
    """

    def integrand(rho):
        arg = rho + shift
        if arg <= 0:
            return 0.0
        return float(np.exp(log_sinh(arg) - k * log_cosh(0.5 * rho)))

    value, abserr = integrate.quad(integrand, delta, np.inf,
                                   epsabs=tol, epsrel=tol, limit=400)
    if abserr > max(1e3 * tol, 1e-8 * abs(value)):
        raise AccuracyError('Tail integral did not converge '
                            '(k={}, delta={})'.format(k, delta),
                            estimate=abserr, tol=tol)
    logger.debug('sinh_shift_integral k=%s delta=%s shift=%s -> %r (+/- %g)',
                 k, delta, shift, value, abserr)
    return value


def least_squares_slope(x, y):
    """
    Slope of the least-squares line through (x, y)

    :rtype: float
    """
    slope, _ = np.polyfit(np.asarray(x, dtype=float),
                          np.asarray(y, dtype=float), 1)
    return float(slope)
