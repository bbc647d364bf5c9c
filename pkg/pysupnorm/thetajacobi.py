"""
Jacobi theta functions theta_{mu,m}, the theta decomposition of Jacobi cusp
forms, pointwise Petersson norms on H x C, the two forms of the Petersson
inner product and the sup-norm search over F x E_tau.

All norms are computed with "damped" thetas, theta * exp(-2 pi m y^2/eta),
whose terms never exceed one in modulus.
"""

import math
import logging
from fractions import Fraction
from functools import partial

import numpy as np

from pysupnorm.common import chunks, parse_complex
from pysupnorm.exceptions import (PreconditionError, TruncationError,
                                  InconsistencyError, ConstructionError)
from pysupnorm.hyperbolic import UpperHalfPoint
from pysupnorm.numerics.quadrature import (JacobiQuadrature,
                                           PeterssonQuadrature, CHUNK_SIZE)
from pysupnorm.numerics.search import SearchConfig, grid_then_refine
from pysupnorm.qseries import (QSeries, EvalResult, eval_qseries, eta_power,
                               domain_coordinates, search_height)

logger = logging.getLogger(__name__)

THETA_TOL = 1e-15
THETA_MAX_TERMS = 10 ** 6
DISCRIMINANT_TOL = 1e-10
JACOBI_SEARCH_GRID = (12, 12, 12, 12)
TWO_PI = 2.0 * math.pi

# Validation points for the built-in form: (tau, z)
VALIDATION_POINTS = [(0.1 + 1.1j, 0.3 + 0.2j),
                     (-0.3 + 1.0j, 0.6 + 0.7j),
                     (0.45 + 0.95j, -0.2 + 0.4j),
                     (0.2 + 1.4j, 0.1 + 1.1j)]


class JacobiPoint(object):
    """
    A point (tau, z) of H x C

    :ivar tau: UpperHalfPoint
    :ivar z: complex
    """
    __slots__ = ['tau', 'z']

    def __init__(self, tau, z):
        if not isinstance(tau, UpperHalfPoint):
            tau = UpperHalfPoint.from_complex(tau)
        self.tau = tau
        self.z = complex(z)

    @classmethod
    def parse(cls, tau_text, z_text):
        return cls(UpperHalfPoint.parse(tau_text), parse_complex(z_text))

    @property
    def x(self):
        return self.z.real

    @property
    def y(self):
        return self.z.imag

    def __eq__(self, other):
        if not isinstance(other, JacobiPoint):
            return NotImplemented
        return self.tau == other.tau and self.z == other.z

    def __hash__(self):
        return hash((self.tau, self.z))

    def __repr__(self):
        return 'JacobiPoint({!r}, {!r})'.format(self.tau, self.z)


def _check_index(mu, m):
    if int(m) < 1:
        raise PreconditionError('Index must be at least 1')
    if not 0 <= int(mu) < 2 * m:
        raise PreconditionError('mu must lie in 0..{}'.format(2 * m - 1))


def _log_tail(m, eta, W):
    "log of the two-sided Gaussian majorant beyond distance W"
    a = TWO_PI * m * eta
    return (math.log(2.0) - a * W * W) - np.log1p(-np.exp(-2.0 * a * W))


def theta_window(m, eta, tol=THETA_TOL):
    """
    Half-width W of the summation window in u = n - mu/2m around the
    Gaussian centre -y/eta, and the damped tail majorant at each point.

    The damped terms exp(-2 pi m eta (u - c)^2) beyond |u - c| > W sum to at
    most 2 exp(-2 pi m eta W^2) / (1 - exp(-4 pi m eta W)).

    :returns: (W, tail array)
    """
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if np.any(eta <= 0):
        raise PreconditionError('theta needs eta > 0')
    if not tol > 0:
        raise PreconditionError('Tolerance must be positive')
    log_tol = math.log(tol)
    eta_min = float(eta.min())
    W = max(1.0, math.sqrt(max(0.0, math.log(2.0) - log_tol) /
                           (TWO_PI * m * eta_min)))
    while (_log_tail(m, eta_min, W) > log_tol and
           2 * W <= THETA_MAX_TERMS):
        W += 0.5
    if 2 * W > THETA_MAX_TERMS:
        raise TruncationError('Theta window of {:g} terms exceeds the term '
                              'cap'.format(2 * W),
                              bound=math.exp(_log_tail(m, eta_min, W)))
    return W, np.exp(_log_tail(m, eta, W))


def theta_array(mu, m, tau, z, tol=THETA_TOL, damped=False):
    """
    Vectorized theta_{mu,m}(tau, z) = sum_n q^{m (n - mu/2m)^2}
    zeta^{2mn - mu} over broadcast arrays of tau and z.

    :param damped: multiply by exp(-2 pi m y^2 / eta)
    :rtype: ndarray
    """
    _check_index(mu, m)
    tau, z = np.broadcast_arrays(np.asarray(tau, dtype=complex),
                                 np.asarray(z, dtype=complex))
    shape = tau.shape
    tau, z = tau.ravel(), z.ravel()
    eta = tau.imag
    W, _ = theta_window(m, eta, tol)

    shift = mu / (2.0 * m)
    count = int(math.ceil(2 * W)) + 2
    offsets = np.arange(count)
    out = np.empty(len(tau), dtype=complex)
    for start, stop in chunks(len(tau), CHUNK_SIZE):
        t, zz = tau[start:stop, None], z[start:stop, None]
        centre = -zz.imag / t.imag
        n = np.floor(centre + shift - W) + offsets
        u = n - shift
        expo = TWO_PI * 1j * m * (t * u * u + 2.0 * zz * u)
        if damped:
            expo = expo - TWO_PI * m * zz.imag ** 2 / t.imag
        out[start:stop] = np.exp(expo).sum(axis=1)
    return out.reshape(shape)


def theta_eval(mu, m, p, tol=THETA_TOL):
    """
    theta_{mu,m}(tau, z) with a certificate for the dropped terms.

    The tolerance applies to the damped sum; the undamped tail bound is
    reported.

    :type p: JacobiPoint
    :rtype: EvalResult
    """
    _, tail = theta_window(m, p.tau.eta, tol)
    value = theta_array(mu, m, p.tau.as_complex(), p.z, tol)
    peak = math.exp(TWO_PI * m * p.y ** 2 / p.tau.eta)
    return EvalResult(complex(value), float(tail[0]) * peak)


def theta_pet_norm(mu, m, p, tol=THETA_TOL):
    """
    Squared Petersson norm |theta_{mu,m}|^2 eta^(1/2) exp(-4 pi m y^2/eta)

    :type p: JacobiPoint
    :rtype: float
    """
    value = theta_array(mu, m, p.tau.as_complex(), p.z, tol, damped=True)
    return float(abs(value) ** 2 * math.sqrt(p.tau.eta))


def theta_norm_sum(m, tau, z, tol=THETA_TOL):
    "Vectorized sum over mu of the squared theta norms"
    eta = np.asarray(tau, dtype=complex).imag
    total = 0.0
    for mu in range(2 * m):
        total = total + np.abs(theta_array(mu, m, tau, z, tol, True)) ** 2
    return total * np.sqrt(eta)


def theta_sum_bound_check(m, p):
    """
    Compares sum_mu ||theta_{mu,m}||^2 with 2m eta^(1/2) (1 + 1/sqrt(2m eta))^2

    :returns: (lhs, rhs, margin)
    """
    lhs = float(theta_norm_sum(m, p.tau.as_complex(), p.z))
    eta = p.tau.eta
    rhs = 2 * m * math.sqrt(eta) * (1.0 + 1.0 / math.sqrt(2 * m * eta)) ** 2
    return lhs, rhs, rhs - lhs


class ThetaComponentVector(object):
    """
    The 2m theta components h_0..h_{2m-1} of a Jacobi form of index m

    :ivar m: index
    :ivar components: list of QSeries
    """
    __slots__ = ['m', 'components']

    def __init__(self, m, components):
        components = list(components)
        if len(components) != 2 * m:
            raise PreconditionError('Index {} needs {} components, got {}'
                                    .format(m, 2 * m, len(components)))
        for h in components:
            val = h.valuation()
            if val is not None and val <= 0:
                raise PreconditionError('Theta components must vanish at '
                                        'the cusp')
        self.m = int(m)
        self.components = components

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, mu):
        return self.components[mu]

    def __mul__(self, scalar):
        return ThetaComponentVector(self.m, [h * scalar
                                             for h in self.components])

    __rmul__ = __mul__

    def __repr__(self):
        return 'ThetaComponentVector(m={}, terms={})'.format(
            self.m, [len(h) for h in self.components])

    @property
    def weight(self):
        return self.components[0].weight

    def is_zero(self):
        return all(h.is_zero() for h in self.components)

    def evaluate(self, tau):
        """
        All components at tau

        :returns: array of shape (2m,) + shape of tau
        """
        tau = np.asarray(tau, dtype=complex)
        flat = tau.ravel()
        return np.stack([h.evaluate(flat).reshape(tau.shape)
                         for h in self.components])

    def norm_sum(self, tau, extra_weight=0.0):
        "sum_mu |h_mu|^2 eta^(weight + extra_weight), vectorized"
        tau = np.asarray(tau, dtype=complex)
        values = self.evaluate(tau)
        power = float(self.weight) + extra_weight
        return (np.abs(values) ** 2).sum(axis=0) * tau.imag ** power


def assemble_array(hvec, tau, z, damped=True):
    """
    sum_mu h_mu(tau) theta_{mu,m}(tau, z), vectorized. The components are
    evaluated on tau alone and broadcast against z.

    :rtype: ndarray
    """
    tau = np.asarray(tau, dtype=complex)
    hvals = hvec.evaluate(tau)
    total = 0.0
    for mu in range(2 * hvec.m):
        total = total + hvals[mu] * theta_array(mu, hvec.m, tau, z,
                                                damped=damped)
    return np.broadcast_to(total, np.broadcast(tau, np.asarray(z)).shape)


def assemble_jacobi(hvec, p, **eval_kwargs):
    """
    phi(tau, z) = sum_mu h_mu(tau) theta_{mu,m}(tau, z), with certified
    evaluation of the components

    :type hvec: ThetaComponentVector
    :type p: JacobiPoint
    :rtype: complex
    """
    total = 0j
    for mu, h in enumerate(hvec):
        if h.is_zero():
            continue
        hval = eval_qseries(h, p.tau, **eval_kwargs).value
        total += hval * theta_eval(mu, hvec.m, p).value
    return total


class JacobiFormCoeffs(object):
    """
    Fourier coefficients c(n, r) of a Jacobi cusp form, complete for
    n <= trunc_n

    :ivar weight: weight k
    :ivar index: index m
    :ivar trunc_n: largest n with complete coefficients
    :ivar coeffs: dict (n, r) -> coefficient
    """
    __slots__ = ['weight', 'index', 'trunc_n', 'coeffs', '_hvec']

    def __init__(self, weight, index, trunc_n, coeffs):
        if int(index) < 1:
            raise PreconditionError('Index must be at least 1')
        self.weight = weight
        self.index = int(index)
        self.trunc_n = int(trunc_n)
        self.coeffs = {}
        m = self.index
        for (n, r), c in coeffs.items():
            if c == 0 or n > self.trunc_n:
                continue
            if 4 * m * n - r * r <= 0:
                raise PreconditionError('Coefficient c({}, {}) outside the '
                                        'cusp form support'.format(n, r))
            self.coeffs[(int(n), int(r))] = c
        self._hvec = None

    def __repr__(self):
        return 'JacobiFormCoeffs(k={}, m={}, trunc_n={}, {} terms)'.format(
            self.weight, self.index, self.trunc_n, len(self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, key):
        return self.coeffs.get(key, 0)

    def keys(self):
        "Stored (n, r), lexicographically sorted"
        return sorted(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def __mul__(self, other):
        if not isinstance(other, JacobiFormCoeffs):
            return JacobiFormCoeffs(self.weight, self.index, self.trunc_n,
                                    {key: c * other for key, c
                                     in self.coeffs.items()})
        trunc = min(self.trunc_n, other.trunc_n)
        product = {}
        for (n1, r1), c1 in self.coeffs.items():
            for (n2, r2), c2 in other.coeffs.items():
                if n1 + n2 <= trunc:
                    key = (n1 + n2, r1 + r2)
                    product[key] = product.get(key, 0) + c1 * c2
        return JacobiFormCoeffs(self.weight + other.weight,
                                self.index + other.index, trunc, product)

    __rmul__ = __mul__

    def __pow__(self, power):
        power = int(power)
        if power < 1:
            raise PreconditionError('Powers of Jacobi forms start at 1')
        result = self
        for _ in range(power - 1):
            result = result * self
        return result

    def discriminant_defect(self):
        """
        Largest disagreement between coefficients sharing the discriminant
        4mn - r^2 and the class of r mod 2m

        :rtype: float
        """
        m = self.index
        seen = {}
        worst = 0.0
        for (n, r), c in self.coeffs.items():
            key = (4 * m * n - r * r, r % (2 * m))
            if key in seen:
                ref = seen[key]
                scale = max(1.0, abs(complex(ref)))
                worst = max(worst, abs(complex(c) - complex(ref)) / scale)
            else:
                seen[key] = c
        return worst

    def evaluate(self, tau, z, damped=False):
        """
        Direct sum of c(n, r) q^n zeta^r over broadcast arrays. With damped
        each term carries exp(-2 pi m y^2/eta), which keeps it below 1.
        """
        tau, z = np.broadcast_arrays(np.asarray(tau, dtype=complex),
                                     np.asarray(z, dtype=complex))
        shape = tau.shape
        tau, z = tau.ravel(), z.ravel()
        keys = self.keys()
        ns = np.array([n for n, _ in keys], dtype=float)
        rs = np.array([r for _, r in keys], dtype=float)
        cs = np.array([complex(self.coeffs[k]) for k in keys], dtype=complex)
        out = np.zeros(len(tau), dtype=complex)
        if keys:
            for start, stop in chunks(len(tau), CHUNK_SIZE):
                expo = TWO_PI * 1j * (np.outer(tau[start:stop], ns) +
                                      np.outer(z[start:stop], rs))
                if damped:
                    y = z[start:stop].imag
                    expo -= (TWO_PI * self.index * y * y /
                             tau[start:stop].imag)[:, None]
                out[start:stop] = np.exp(expo) @ cs
        return out.reshape(shape)

    def theta_components(self):
        "Cached theta decomposition"
        if self._hvec is None:
            self._hvec = extract_h_mu(self)
        return self._hvec


def residue_representative(mu, m):
    "The r with r = -mu mod 2m and |r| minimal (r = m for mu = m)"
    r = (-mu) % (2 * m)
    return r - 2 * m if r > m else r


def extract_h_mu(phi, tol=DISCRIMINANT_TOL):
    """
    Sorts the coefficients c(n, r) by discriminant into the theta components:
    h_mu collects c(n, r) with r = -mu mod 2m at exponent (4mn - r^2)/(4m).
    h_mu is complete below (4m trunc_n - r_mu^2 + 1)/(4m), r_mu the
    smallest representative of its class.

    :type phi: JacobiFormCoeffs
    :raises InconsistencyError: coefficients depend on more than the
        discriminant and the class of r
    :rtype: ThetaComponentVector
    """
    m = phi.index
    sorted_coeffs = [dict() for _ in range(2 * m)]
    for (n, r), c in sorted(phi.coeffs.items()):
        mu = (-r) % (2 * m)
        disc = 4 * m * n - r * r
        bucket = sorted_coeffs[mu]
        if disc in bucket:
            ref = bucket[disc]
            scale = max(1.0, abs(complex(ref)))
            if abs(complex(c) - complex(ref)) > tol * scale:
                raise InconsistencyError(
                    'c({}, {}) = {} differs from {} at discriminant {}'
                    .format(n, r, c, ref, disc))
        else:
            bucket[disc] = c

    weight = phi.weight - Fraction(1, 2)
    components = []
    for mu in range(2 * m):
        rc = residue_representative(mu, m)
        trunc = Fraction(4 * m * phi.trunc_n - rc * rc + 1, 4 * m)
        components.append(QSeries(sorted_coeffs[mu], 4 * m, trunc, weight))
    return ThetaComponentVector(m, components)


def theta_odd_square_terms(nmax):
    """
    Terms of theta_1(tau, z)^2 with theta_1 = sum_n (-1)^n q^{(2n+1)^2/8}
    zeta^{(2n+1)/2}, as (q exponent in 1/24 units, r, coefficient) with the
    q exponent at most nmax

    :rtype: dict
    """
    terms = {}
    bound = int(math.isqrt(8 * nmax)) + 1
    odd = [a for a in range(-bound, bound + 1) if a % 2]
    for a in odd:
        for b in odd:
            e24 = 3 * (a * a + b * b)
            if e24 > 24 * nmax:
                continue
            sign = (-1) ** (((a - 1) // 2 + (b - 1) // 2) % 2)
            key = (e24, (a + b) // 2)
            terms[key] = terms.get(key, 0) + sign
    return terms


def _validation_norms(hvec, k, m, tau, z):
    "Norms at (tau, z) and at its images under S, T and the lattice"
    tau_s, z_s = -1.0 / tau, z / tau
    points = [(tau, z), (tau_s, z_s), (tau + 1, z)]
    for lam in (-1, 0, 1):
        for mu in (-1, 0, 1):
            points.append((tau, z + lam * tau + mu))
    taus = np.array([t for t, _ in points])
    zs = np.array([w for _, w in points])
    return jacobi_norm_array(hvec, k, taus, zs)


def validate_jacobi_form(phi, points=VALIDATION_POINTS, tol=1e-8):
    """
    Checks cusp support, discriminant dependence and invariance of the
    pointwise norm under S, T and the lattice action

    :raises ConstructionError: on any failure
    """
    m = phi.index
    for n, r in phi.keys():
        if 4 * m * n - r * r <= 0:
            raise ConstructionError('Support violated at ({}, {})'
                                    .format(n, r))
    defect = phi.discriminant_defect()
    if defect > DISCRIMINANT_TOL:
        raise ConstructionError('Discriminant dependence violated: {:g}'
                                .format(defect))
    hvec = phi.theta_components()
    for tau, z in points:
        norms = _validation_norms(hvec, phi.weight, m, tau, z)
        spread = np.max(np.abs(norms - norms[0])) / norms[0]
        logger.debug('Invariance spread %g at tau=%r z=%r', spread, tau, z)
        if not spread < tol:
            raise ConstructionError('Norm not invariant at tau={}, z={}: '
                                    'relative spread {:g}'
                                    .format(tau, z, spread))


def phi_10_1(trunc=16, validate=True):
    """
    The Jacobi cusp form eta^18 theta_1^2 of weight 10 and index 1, scaled
    so that its first coefficient is 1

    :param trunc: largest n of the complete coefficients, at least 3
    :rtype: JacobiFormCoeffs
    """
    if trunc < 3:
        raise PreconditionError('phi_10_1 needs trunc >= 3')
    eta18 = eta_power(18, trunc + 1)
    theta_sq = theta_odd_square_terms(trunc)

    coeffs = {}
    for num, ec in eta18.coeffs.items():
        for (e24, r), tc in theta_sq.items():
            total = num + e24
            if total % 24:
                raise ConstructionError('Non-integral q exponent {}/24'
                                        .format(total))
            n = total // 24
            if n <= trunc:
                coeffs[(n, r)] = coeffs.get((n, r), 0) + ec * tc

    phi = JacobiFormCoeffs(10, 1, trunc, coeffs)
    first = phi.keys()[0]
    lead = phi[first]
    if lead != 1:
        phi = phi * Fraction(1, lead)
    if validate:
        validate_jacobi_form(phi)
    return phi


def _as_components(phi):
    if isinstance(phi, ThetaComponentVector):
        return phi
    if isinstance(phi, JacobiFormCoeffs):
        return phi.theta_components()
    return None


def jacobi_norm_array(hvec, k, tau, z):
    "|phi|^2 eta^k exp(-4 pi m y^2/eta) from the theta decomposition"
    tau = np.asarray(tau, dtype=complex)
    values = assemble_array(hvec, tau, z, damped=True)
    return np.abs(values) ** 2 * tau.imag ** k


def jacobi_pet_norm(phi, k, m, p):
    """
    Squared pointwise Petersson norm |phi|^2 eta^k exp(-4 pi m y^2 / eta).

    :param phi: ThetaComponentVector, JacobiFormCoeffs or a callable
        phi(tau, z) on complex numbers
    :type p: JacobiPoint
    :rtype: float
    """
    hvec = _as_components(phi)
    tau, eta, y = p.tau.as_complex(), p.tau.eta, p.y
    if hvec is not None:
        if hvec.m != m:
            raise PreconditionError('Index mismatch: {} != {}'
                                    .format(hvec.m, m))
        return float(jacobi_norm_array(hvec, k, tau, p.z))
    value = complex(phi(tau, p.z))
    if value == 0:
        return 0.0
    return math.exp(2.0 * math.log(abs(value)) + k * math.log(eta) -
                    2.0 * TWO_PI * m * y * y / eta)


def _check_pair(h1, h2, m):
    if h1.m != m or h2.m != m:
        raise PreconditionError('Index mismatch')
    if h1.weight != h2.weight:
        raise PreconditionError('Weight mismatch: {} != {}'
                                .format(h1.weight, h2.weight))


def _damped_values(phi, tau, z):
    "phi exp(-2 pi m y^2/eta), from c(n, r) when phi carries them"
    if isinstance(phi, JacobiFormCoeffs):
        return phi.evaluate(tau, z, damped=True)
    return assemble_array(phi, tau, z)


def _jacobi_4d_integrand(phi1, phi2, k, x, v, xi, eta, block=64):
    out = np.empty(len(xi), dtype=complex)
    for start, stop in chunks(len(xi), block):
        tau = (xi[start:stop] + 1j * eta[start:stop])[:, None]
        z = x[None, :] + 1j * v[None, :] * tau.imag
        f1 = _damped_values(phi1, tau, z)
        f2 = f1 if phi2 is phi1 else _damped_values(phi2, tau, z)
        out[start:stop] = ((f1 * np.conj(f2)).mean(axis=1) *
                           tau[:, 0].imag ** k)
    return out


def jacobi_inner_4d(phi1, phi2, k, m, quad=None, njobs=1):
    """
    Petersson inner product as a 4-dimensional integral of
    phi1 conj(phi2) eta^k exp(-4 pi m y^2/eta) over F x E_tau against
    dxi deta dx dy / eta^3. A JacobiFormCoeffs is summed from its own
    Fourier coefficients; a ThetaComponentVector is assembled from its
    components.

    :type quad: JacobiQuadrature
    :returns: (value, error estimate)
    """
    if quad is None:
        quad = JacobiQuadrature()
    h1, h2 = _as_components(phi1), _as_components(phi2)
    _check_pair(h1, h2, m)
    if h1.is_zero() or h2.is_zero():
        return 0j, 0.0
    if not isinstance(phi1, JacobiFormCoeffs):
        phi1 = h1
    if not isinstance(phi2, JacobiFormCoeffs):
        phi2 = h2
    x, v = quad.z_nodes()
    integrand = partial(_jacobi_4d_integrand, phi1, phi2, k, x, v)
    return quad.tau_rule.integrate(integrand, njobs=njobs)


def _theta_route_integrand(h1, h2, k, m, xi, eta):
    tau = xi + 1j * eta
    v1 = h1.evaluate(tau)
    v2 = v1 if h2 is h1 else h2.evaluate(tau)
    total = (v1 * np.conj(v2)).sum(axis=0)
    return total * eta ** (k - 0.5) / math.sqrt(4 * m)


def jacobi_inner_theta(h1, h2, k, m, quad=None, njobs=1):
    """
    Petersson inner product through the theta decomposition,
    (4m)^(-1/2) int_F sum_mu h1_mu conj(h2_mu) eta^(k - 1/2) dxi deta/eta^2

    :param quad: JacobiQuadrature (its tau rule is used) or
        PeterssonQuadrature
    :returns: (value, error estimate)
    """
    if quad is None:
        quad = JacobiQuadrature()
    rule = quad.tau_rule if isinstance(quad, JacobiQuadrature) else quad
    h1, h2 = _as_components(h1), _as_components(h2)
    _check_pair(h1, h2, m)
    if h1.is_zero() or h2.is_zero():
        return 0j, 0.0
    integrand = partial(_theta_route_integrand, h1, h2, k, m)
    return rule.integrate(integrand, njobs=njobs)


def normalize_jacobi(phi, k, m, quad=None, njobs=1):
    """
    Scales phi to <phi, phi> = 1 (theta route)

    :returns: an object of the same type as phi
    """
    value, _ = jacobi_inner_theta(phi, phi, k, m, quad, njobs)
    if not value.real > 0:
        raise PreconditionError('Cannot normalize the zero form')
    return phi * (1.0 / math.sqrt(value.real))


def jacobi_coordinates(points, height):
    """
    Maps search coordinates (xi, s, x, v) to (tau, z) with tau in the
    fundamental domain below height and z = x + i v eta

    :returns: (tau, z) complex arrays
    """
    xi, eta = domain_coordinates(points[:, :2], height)
    tau = xi + 1j * eta
    return tau, points[:, 2] + 1j * points[:, 3] * eta


def canonical_cell_point(tau, z):
    """
    Moves z into the half cell y <= eta/2 using z -> tau + 1 - z, which
    leaves the norm unchanged; x is reduced mod 1

    :rtype: JacobiPoint
    """
    tau = complex(tau)
    v = z.imag / tau.imag
    if v > 0.5:
        z = tau + 1 - z
    z = complex(z.real % 1.0, z.imag)
    return JacobiPoint(UpperHalfPoint.from_complex(tau), z)


def _jacobi_objective(hvec, k, height, points):
    tau, z = jacobi_coordinates(points, height)
    return jacobi_norm_array(hvec, k, tau, z)


def jacobi_supnorm_search(phi, k, m, policy=None):
    """
    Best-found maximum of the pointwise norm over F x E_tau below the search
    height; a lower bound for the sup.

    :param phi: ThetaComponentVector or JacobiFormCoeffs
    :type policy: SearchConfig
    :returns: (sup, argmax JacobiPoint)
    """
    if policy is None:
        policy = SearchConfig(grid=JACOBI_SEARCH_GRID)
    hvec = _as_components(phi)
    if hvec.m != m:
        raise PreconditionError('Index mismatch')
    grid = policy.grid if len(policy.grid) == 4 else policy.grid * 2
    height = search_height(k, policy)
    objective = partial(_jacobi_objective, hvec, k, height)
    best, point = grid_then_refine(objective, grid, [-0.5, 0.0, 0.0, 0.0],
                                   [0.5, 1.0, 1.0, 1.0], policy.restarts,
                                   policy.min_step, policy.max_evals)
    tau, z = jacobi_coordinates(point[None, :], height)
    logger.debug('Jacobi sup %r at tau=%r z=%r', best, tau[0], z[0])
    return float(best), canonical_cell_point(tau[0], z[0])


def cauchy_schwarz_chain_check(hvec, k, m, p):
    """
    Compares ||phi||^2 with (sum_mu ||h_mu||^2) (sum_mu ||theta_mu||^2)

    :returns: (lhs, rhs, margin)
    """
    if hvec.m != m:
        raise PreconditionError('Index mismatch')
    tau = p.tau.as_complex()
    lhs = float(jacobi_norm_array(hvec, k, tau, p.z))
    h_part = float(hvec.norm_sum(tau, extra_weight=k - 0.5 -
                                 float(hvec.weight)))
    rhs = h_part * float(theta_norm_sum(m, tau, p.z))
    return lhs, rhs, rhs - lhs
