"""
Truncated q-expansions of modular objects, their evaluation with tail
certificates, pointwise Petersson norms, Petersson inner products by
quadrature and sup-norm search over the fundamental domain.
"""

import math
import cmath
import logging
from fractions import Fraction
from functools import partial, lru_cache
from numbers import Number, Rational

import numpy as np

from pysupnorm.common import lcm, as_fraction, chunks
from pysupnorm.exceptions import PreconditionError, TruncationError
from pysupnorm.hyperbolic import (UpperHalfPoint, mobius_apply,
                                  automorphy_modulus,
                                  reduce_to_fundamental_domain)
from pysupnorm.numerics.quadrature import PeterssonQuadrature, CHUNK_SIZE
from pysupnorm.numerics.search import SearchConfig, grid_then_refine

logger = logging.getLogger(__name__)

ONE_DIMENSIONAL_WEIGHTS = (12, 16, 18, 20, 22, 26)
DEFAULT_TRUNC = 60
DEFAULT_ETA_MIN = 0.5
TWO_PI_I = 2j * math.pi


def _tidy(coef):
    "Integral Fractions become ints; exact zero is kept as 0"
    if isinstance(coef, Fraction) and coef.denominator == 1:
        return int(coef.numerator)
    return coef


class QSeries(object):
    """
    A truncated expansion sum a_e q^e with exponents e = num/denom.

    Exponents at or above trunc_order are unknown and never stored.
    Coefficients stay exact (int or Fraction) as long as the arithmetic
    allows and become floats or complex after inexact scaling.

    :ivar denom: exponent denominator
    :ivar coeffs: dict numerator -> coefficient
    :ivar trunc_order: truncation order (Fraction)
    :ivar weight: weight of the modular object
    :ivar level: level of the modular object
    """
    __slots__ = ['denom', 'coeffs', 'trunc_order', 'weight', 'level']

    def __init__(self, coeffs, denom=1, trunc_order=DEFAULT_TRUNC, weight=0,
                 level=1):
        denom = int(denom)
        if denom < 1:
            raise PreconditionError('Exponent denominator must be positive')
        if int(level) < 1:
            raise PreconditionError('Level must be positive')
        trunc_order = as_fraction(trunc_order)
        limit = trunc_order * denom

        self.denom = denom
        self.trunc_order = trunc_order
        self.weight = weight
        self.level = int(level)
        self.coeffs = {int(n): _tidy(c) for n, c in coeffs.items()
                       if c != 0 and n < limit}

    def __repr__(self):
        lead = ', '.join('{}: {}'.format(Fraction(n, self.denom), self[n])
                         for n in self.numerators()[:3])
        return 'QSeries(weight={}, denom={}, trunc={}, {{{}...}})'.format(
            self.weight, self.denom, self.trunc_order, lead)

    def __getitem__(self, numerator):
        return self.coeffs.get(numerator, 0)

    def __len__(self):
        return len(self.coeffs)

    def numerators(self):
        "Stored exponent numerators, ascending"
        return sorted(self.coeffs)

    def coefficient(self, exponent):
        "Coefficient of q^exponent (0 if not stored)"
        e = as_fraction(exponent) * self.denom
        if e.denominator != 1:
            return 0
        return self[int(e)]

    def valuation(self):
        "Least exponent with a nonzero coefficient, None for the zero series"
        if not self.coeffs:
            return None
        return Fraction(min(self.coeffs), self.denom)

    def is_zero(self):
        return not self.coeffs

    def _lifted(self, denom):
        "Coefficients re-expressed over a multiple of the denominator"
        factor = denom // self.denom
        return {n * factor: c for n, c in self.coeffs.items()}

    def _like(self, coeffs, denom=None, trunc_order=None, weight=None,
              level=None):
        return QSeries(coeffs,
                       self.denom if denom is None else denom,
                       self.trunc_order if trunc_order is None
                       else trunc_order,
                       self.weight if weight is None else weight,
                       self.level if level is None else level)

    def _coerce(self, other):
        if isinstance(other, QSeries):
            return other
        if isinstance(other, Number):
            return QSeries({0: other}, 1, self.trunc_order, self.weight,
                           self.level)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        denom = lcm(self.denom, other.denom)
        merged = self._lifted(denom)
        for n, c in other._lifted(denom).items():
            merged[n] = merged.get(n, 0) + c
        return self._like(merged, denom,
                          min(self.trunc_order, other.trunc_order),
                          level=lcm(self.level, other.level))

    __radd__ = __add__

    def __neg__(self):
        return self._like({n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return self._like({n: c * other for n, c in self.coeffs.items()})
        if not isinstance(other, QSeries):
            return NotImplemented

        denom = lcm(self.denom, other.denom)
        trunc = min(self.trunc_order, other.trunc_order)
        limit = trunc * denom
        left, right = self._lifted(denom), other._lifted(denom)
        product = {}
        for n1, c1 in left.items():
            for n2, c2 in right.items():
                n = n1 + n2
                if n < limit:
                    product[n] = product.get(n, 0) + c1 * c2
        return QSeries(product, denom, trunc, self.weight + other.weight,
                       lcm(self.level, other.level))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        if scalar == 0:
            raise ZeroDivisionError('Division of a series by zero')
        if isinstance(scalar, Rational):
            exact = {}
            for n, c in self.coeffs.items():
                if isinstance(c, Rational):
                    exact[n] = Fraction(c) / scalar
                else:
                    exact[n] = c / float(scalar)
            return self._like(exact)
        return self._like({n: c / scalar for n, c in self.coeffs.items()})

    def __pow__(self, power):
        power = int(power)
        if power < 0:
            raise PreconditionError('Only nonnegative powers are supported')
        result = QSeries({0: 1}, 1, self.trunc_order, 0, self.level)
        base = self
        while power:
            if power & 1:
                result = result * base
            power >>= 1
            if power:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        denom = lcm(self.denom, other.denom)
        return (self.trunc_order == other.trunc_order and
                self._lifted(denom) == other._lifted(denom))

    __hash__ = None

    def with_weight(self, weight, level=None):
        "Same coefficients, relabelled weight (and level)"
        return self._like(dict(self.coeffs), weight=weight, level=level)

    def arrays(self):
        """
        Exponents and coefficients as numpy arrays, ascending

        :returns: (exponents float array, coefficients complex array)
        """
        nums = self.numerators()
        exps = np.array([n / self.denom for n in nums], dtype=float)
        coefs = np.array([complex(self.coeffs[n]) for n in nums],
                         dtype=complex)
        return exps, coefs

    def evaluate(self, tau):
        """
        Vectorized evaluation of the truncated sum (no tail certificate)

        :param tau: complex scalar or array
        :rtype: complex or ndarray
        """
        scalar = np.isscalar(tau)
        tau = np.atleast_1d(np.asarray(tau, dtype=complex)).ravel()
        exps, coefs = self.arrays()
        out = np.zeros(len(tau), dtype=complex)
        if len(exps):
            for start, stop in chunks(len(tau), CHUNK_SIZE):
                phases = np.exp(TWO_PI_I * np.outer(tau[start:stop], exps))
                out[start:stop] = phases @ coefs
        return complex(out[0]) if scalar else out

    def growth(self, alpha=None):
        """
        Coefficient growth cap (C, alpha) with |a_e| <= C e^alpha on the
        stored coefficients; alpha defaults to max(weight, 1)

        :rtype: tuple
        """
        if alpha is None:
            alpha = max(float(self.weight), 1.0)
        ratios = [abs(complex(c)) / (n / self.denom) ** alpha
                  for n, c in self.coeffs.items() if n > 0]
        return (max(ratios) if ratios else 0.0), alpha


class EvalResult(object):
    """
    A value with its truncation certificate

    :ivar value: truncated sum
    :ivar tail: upper bound for the dropped tail
    :ivar flagged: True when the tail exceeded the tolerance
    """
    __slots__ = ['value', 'tail', 'flagged']

    def __init__(self, value, tail, flagged=False):
        self.value = value
        self.tail = tail
        self.flagged = flagged

    def __repr__(self):
        return 'EvalResult({!r}, tail={:g}{})'.format(
            self.value, self.tail, ', flagged' if self.flagged else '')


def tail_bound(f, eta, growth=None):
    """
    Geometric majorant for the dropped tail of f at height eta, assuming
    |a_e| <= C e^alpha beyond the truncation

    :param growth: (C, alpha); fitted from the stored coefficients if None
    :rtype: float
    """
    C, alpha = f.growth() if growth is None else growth
    if C == 0:
        return 0.0
    e0 = float(f.trunc_order)
    step = 1.0 / f.denom
    ratio = (1.0 + step / e0) ** alpha * math.exp(-2.0 * math.pi * eta * step)
    if ratio >= 1.0:
        return math.inf
    first = C * e0 ** alpha * math.exp(-2.0 * math.pi * eta * e0)
    return first / (1.0 - ratio)


def eval_qseries(f, tau, tol=1e-12, eta_min=DEFAULT_ETA_MIN, growth=None,
                 raise_on_tail=True):
    """
    Evaluates f at tau with a certificate for the truncation error

    :type f: QSeries
    :type tau: UpperHalfPoint
    :param tol: largest acceptable tail bound
    :param eta_min: lowest height accepted
    :param growth: coefficient growth cap (C, alpha)
    :param raise_on_tail: raise TruncationError instead of flagging
    :rtype: EvalResult
    """
    if tau.eta < eta_min:
        raise PreconditionError('Height {} below eta_min = {}'
                                .format(tau.eta, eta_min))
    value = f.evaluate(tau.as_complex())
    tail = tail_bound(f, tau.eta, growth)
    flagged = tail > tol
    if flagged:
        if raise_on_tail:
            raise TruncationError('Tail bound {:g} exceeds tolerance {:g} at '
                                  '{!r}'.format(tail, tol, tau), bound=tail)
        logger.warning('Tail bound %g exceeds tolerance %g at %r',
                       tail, tol, tau)
    return EvalResult(value, tail, flagged)


def _sigma_table(power, nmax):
    "Divisor power sums sigma_power(n) for n = 0..nmax"
    table = [0] * (nmax + 1)
    for d in range(1, nmax + 1):
        dp = d ** power
        for multiple in range(d, nmax + 1, d):
            table[multiple] += dp
    return table


@lru_cache(maxsize=None)
def bernoulli(n):
    "Bernoulli number B_n (B_1 = -1/2) as an exact Fraction"
    values = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum(math.comb(m + 1, j) * values[j] for j in range(m))
        values.append(-acc / (m + 1))
    return values[n]


def _integral_orders(trunc):
    "Number of integer exponents below trunc"
    return int(math.ceil(as_fraction(trunc)))


def eisenstein_series(k, trunc=DEFAULT_TRUNC):
    """
    Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n

    :param k: even weight, at least 4
    :param trunc: truncation order, at least 1
    :rtype: QSeries
    """
    if k < 4 or k % 2:
        raise PreconditionError('Unsupported Eisenstein weight: {}'.format(k))
    if as_fraction(trunc) < 1:
        raise PreconditionError('Truncation order must be at least 1')
    nmax = _integral_orders(trunc) - 1
    factor = _tidy(Fraction(-2 * k) / bernoulli(k))
    sigmas = _sigma_table(k - 1, nmax)
    coeffs = {n: factor * sigmas[n] for n in range(1, nmax + 1)}
    coeffs[0] = 1
    return QSeries(coeffs, 1, trunc, k, 1)


def delta_series(trunc=DEFAULT_TRUNC):
    """
    The discriminant (E_4^3 - E_6^2)/1728, computed exactly

    :rtype: QSeries
    """
    if as_fraction(trunc) < 2:
        raise PreconditionError('Truncation order must be at least 2')
    e4 = eisenstein_series(4, trunc)
    e6 = eisenstein_series(6, trunc)
    return (e4 ** 3 - e6 ** 2) / 1728


def _euler_product(nmax):
    "Coefficients of prod (1 - q^n) through q^nmax (pentagonal numbers)"
    coeffs = [0] * (nmax + 1)
    coeffs[0] = 1
    j = 1
    while True:
        p1 = j * (3 * j - 1) // 2
        p2 = j * (3 * j + 1) // 2
        if p1 > nmax:
            break
        sign = -1 if j % 2 else 1
        coeffs[p1] += sign
        if p2 <= nmax:
            coeffs[p2] += sign
        j += 1
    return coeffs


def _poly_mul(p1, p2, nmax):
    out = [0] * (nmax + 1)
    for i, a in enumerate(p1):
        if a:
            for j, b in enumerate(p2[:nmax + 1 - i]):
                out[i + j] += a * b
    return out


def eta_power(r, trunc=DEFAULT_TRUNC):
    """
    eta^r = q^(r/24) prod (1 - q^n)^r with exponent denominator 24

    :param r: positive integer power
    :rtype: QSeries
    """
    if r < 1:
        raise PreconditionError('eta power must be positive')
    trunc = as_fraction(trunc)
    nmax = int(math.ceil(trunc - Fraction(r, 24))) - 1
    if nmax < 0:
        return QSeries({}, 24, trunc, Fraction(r, 2), 1)

    base = _euler_product(nmax)
    result = [1] + [0] * nmax
    power = r
    while power:
        if power & 1:
            result = _poly_mul(result, base, nmax)
        power >>= 1
        if power:
            base = _poly_mul(base, base, nmax)
    coeffs = {r + 24 * j: c for j, c in enumerate(result)}
    return QSeries(coeffs, 24, trunc, Fraction(r, 2), 1)


def cusp_form(k, trunc=DEFAULT_TRUNC):
    """
    Basis element Delta * E_{k-12} of the one-dimensional cusp form spaces
    of weight k in (12, 16, 18, 20, 22, 26)

    :rtype: QSeries
    """
    if k not in ONE_DIMENSIONAL_WEIGHTS:
        raise PreconditionError('No one-dimensional cusp space in weight {}'
                                .format(k))
    delta = delta_series(trunc)
    if k == 12:
        return delta
    return delta * eisenstein_series(k - 12, trunc)


def petersson_norm_point(f, k, tau, **eval_kwargs):
    """
    Squared pointwise Petersson norm |f(tau)|^2 eta^k

    :type f: QSeries
    :param k: weight
    :type tau: UpperHalfPoint
    :rtype: float
    """
    res = eval_qseries(f, tau, **eval_kwargs)
    return abs(res.value) ** 2 * tau.eta ** k


def eval_modular(f, k, tau, **eval_kwargs):
    """
    Evaluates a level one form of integral weight k anywhere in the upper
    half-plane. Below eta_min the point is first reduced to the fundamental
    domain by g, and f(tau) = (c tau + d)^(-k) f(g tau).

    :type f: QSeries
    :type tau: UpperHalfPoint
    :rtype: EvalResult
    """
    if tau.eta >= eval_kwargs.get('eta_min', DEFAULT_ETA_MIN):
        return eval_qseries(f, tau, **eval_kwargs)
    if f.level != 1 or k != int(k):
        raise PreconditionError('Reduction needs a level one form of '
                                'integral weight')
    reduced, g = reduce_to_fundamental_domain(tau)
    res = eval_qseries(f, reduced, **eval_kwargs)
    factor = (g.c * tau.as_complex() + g.d) ** -int(k)
    return EvalResult(res.value * factor, res.tail * abs(factor),
                      res.flagged)


def modularity_defect(f, k, g, tau, **eval_kwargs):
    """
    Relative deviation of |f(g tau)| from |c tau + d|^k |f(tau)|. Points
    below eta_min are evaluated through reduction (see eval_modular).

    :rtype: float
    """
    moved = mobius_apply(g, tau)
    lhs = abs(eval_modular(f, k, moved, **eval_kwargs).value)
    rhs = (automorphy_modulus(g, tau) ** k *
           abs(eval_modular(f, k, tau, **eval_kwargs).value))
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


def _inner_integrand(f, g, k, xi, eta):
    tau = xi + 1j * eta
    fv = f.evaluate(tau)
    gv = fv if g is f else g.evaluate(tau)
    return fv * np.conj(gv) * eta ** k


def petersson_inner(f, g, k, quad=None, njobs=1):
    """
    Petersson inner product of two cusp forms of weight k for SL2(Z) by
    quadrature over the truncated fundamental domain

    :type f: QSeries
    :type g: QSeries
    :type quad: PeterssonQuadrature
    :returns: (value, error estimate)
    """
    if quad is None:
        quad = PeterssonQuadrature()
    if f.is_zero() or g.is_zero():
        return 0j, 0.0
    integrand = partial(_inner_integrand, f, g, k)
    return quad.integrate(integrand, njobs=njobs)


def petersson_norm(f, k, quad=None, njobs=1):
    "<f, f> as a real number"
    value, _ = petersson_inner(f, f, k, quad, njobs)
    return value.real


def normalize(f, k, quad=None, njobs=1):
    """
    Scales f to Petersson norm one

    :rtype: QSeries
    """
    norm = petersson_norm(f, k, quad, njobs)
    if norm <= 0:
        raise PreconditionError('Cannot normalize the zero form')
    return f * (1.0 / math.sqrt(norm))


def domain_coordinates(points, height):
    """
    Maps (xi, s) in [-1/2, 1/2] x [0, 1] to the fundamental domain below
    height: eta = a(xi) (height/a(xi))^s with a(xi) = sqrt(1 - xi^2)

    :returns: (xi, eta) arrays
    """
    xi = points[:, 0]
    low = np.sqrt(1.0 - xi * xi)
    return xi, low * (height / low) ** points[:, 1]


def _weighted_norm(f, exponent, height, points):
    xi, eta = domain_coordinates(points, height)
    return np.abs(f.evaluate(xi + 1j * eta)) ** 2 * eta ** exponent


def search_height(k, policy):
    "Height cap of the sup-norm searches"
    if policy.height is not None:
        return policy.height
    return max(2.0, k / (2.0 * math.pi))


def supnorm_search(f, k, policy=None, extra_weight=0.0, **eval_kwargs):
    """
    Best-found maximum of |f|^2 eta^(k + extra_weight) over the fundamental
    domain below the search height. A lower bound for the true sup, up to
    the truncation error. The argmax is re-evaluated with eval_qseries and
    its tail t gives the error (2|f| t + t^2) eta^(k + extra_weight) of the
    reported value.

    :type f: QSeries
    :type policy: SearchConfig
    :param eval_kwargs: passed to eval_qseries at the argmax
    :raises TruncationError: the tail at the argmax exceeds its tolerance
    :returns: (sup value, argmax, error bound)
    :rtype: tuple (float, UpperHalfPoint, float)
    """
    if policy is None:
        policy = SearchConfig()
    height = search_height(k, policy)
    objective = partial(_weighted_norm, f, k + extra_weight, height)
    _, point = grid_then_refine(objective, policy.grid, [-0.5, 0.0],
                                [0.5, 1.0], policy.restarts,
                                policy.min_step, policy.max_evals)
    xi, eta = domain_coordinates(point[None, :], height)
    argmax = UpperHalfPoint(xi[0], eta[0])
    res = eval_qseries(f, argmax, **eval_kwargs)
    weight = eta[0] ** (k + extra_weight)
    size = abs(res.value)
    error = (2.0 * size * res.tail + res.tail * res.tail) * weight
    return float(size * size * weight), argmax, float(error)


def aux_weight_profile(k, eta, valuation=1):
    "The profile eta^(k+1/2) exp(-4 pi valuation eta)"
    eta = np.asarray(eta, dtype=float)
    return np.exp((k + 0.5) * np.log(eta) - 4.0 * math.pi * valuation * eta)


def aux_weight_profile_max(k, valuation=1):
    """
    Maximizer and maximum of eta^(k+1/2) exp(-4 pi valuation eta)

    :param k: weight, positive
    :param valuation: q-order of the form at the cusp (1 by default)
    :returns: (eta0, max value) with eta0 = (k + 1/2)/(4 pi valuation)
    """
    if not k > 0:
        raise PreconditionError('Weight must be positive')
    if not valuation > 0:
        raise PreconditionError('Valuation must be positive')
    eta0 = (k + 0.5) / (4.0 * math.pi * valuation)
    return eta0, float(aux_weight_profile(k, eta0, valuation))
