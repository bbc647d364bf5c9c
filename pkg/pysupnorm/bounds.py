"""
Explicit bound constants, the diagonal Bergman kernel series and
measured-versus-bound reports.
"""

import math
import logging
import multiprocessing

import numpy as np
from scipy.special import gammaln

from pysupnorm.common import compensated_sum, config_digest
from pysupnorm.exceptions import PreconditionError, TruncationError
from pysupnorm.hyperbolic import (UpperHalfPoint, mobius_apply,
                                  reduce_to_fundamental_domain)
from pysupnorm.arithmetic import (EnumerationBudget, enumerate_displacements,
                                  orbit_tail_majorant, sl2z_group_data,
                                  index_gamma01)
from pysupnorm.numerics.mathfuncs import (sech_power, sinh_shift_integral,
                                          least_squares_slope)
from pysupnorm.qseries import (cusp_form, normalize, petersson_norm,
                               petersson_norm_point, supnorm_search,
                               ONE_DIMENSIONAL_WEIGHTS)
from pysupnorm.thetajacobi import (jacobi_inner_theta, jacobi_supnorm_search,
                                   _as_components)

logger = logging.getLogger(__name__)

MIN_WEIGHT = 5
NORMALIZATION_TOL = 1e-5
THETA_CONSTANT = 2.0 * math.sqrt(2.0) + (4.0 / 3.0) ** 0.25
BOUND_NAMES = ('prop3', 'thm4', 'cor5', 'thm6')


def _check_weight(k):
    if not k >= MIN_WEIGHT:
        raise PreconditionError('Weight must be at least {}, got {}'
                                .format(MIN_WEIGHT, k))


class BoundReport(object):
    """
    A measured quantity against an explicit bound

    :ivar name: which bound
    :ivar k: weight
    :ivar m: index (0 when inapplicable)
    :ivar lhs: measured value
    :ivar rhs: bound
    :ivar config_digest: digest of the parameters that produced lhs
    :ivar notes: free-form remarks, not serialized
    """
    __slots__ = ['name', 'k', 'm', 'lhs', 'rhs', 'config_digest', 'notes']

    def __init__(self, name, k, m, lhs, rhs, config_digest='', notes=''):
        self.name = name
        self.k = k
        self.m = int(m)
        self.lhs = float(lhs)
        self.rhs = float(rhs)
        self.config_digest = config_digest
        self.notes = notes

    @property
    def margin(self):
        return self.rhs - self.lhs

    def sort_key(self):
        return (self.name, self.k, self.m)

    def as_dict(self):
        return {'name': self.name, 'k': self.k, 'm': self.m,
                'lhs': self.lhs, 'rhs': self.rhs, 'margin': self.margin,
                'config_digest': self.config_digest}

    def __repr__(self):
        return 'BoundReport({}, k={}, m={}, lhs={:g}, rhs={:g})'.format(
            self.name, self.k, self.m, self.lhs, self.rhs)


class BergmanConfig(object):
    """
    Settings for the diagonal Bergman series

    :ivar k: weight, at least 5
    :ivar budget: initial EnumerationBudget (by displacement)
    :ivar tail_tol: largest accepted tail bound
    """
    __slots__ = ['k', 'budget', 'tail_tol']

    def __init__(self, k, budget=None, tail_tol=1e-6):
        _check_weight(k)
        if not tail_tol > 0:
            raise PreconditionError('tail_tol must be positive')
        if budget is None:
            budget = EnumerationBudget(max_displacement=4.0)
        if budget.max_displacement is None:
            raise PreconditionError('Bergman series needs a displacement '
                                    'budget')
        self.k = k
        self.budget = budget
        self.tail_tol = float(tail_tol)

    def as_dict(self):
        return {'k': self.k, 'budget': self.budget.as_dict(),
                'tail_tol': self.tail_tol}


def _bergman_terms(k, tau, elements):
    "(2i eta / w)^k with w = (tau - g conj(tau)) (c conj(tau) + d)"
    mats = np.array([g.as_tuple() for g in elements], dtype=float)
    a, b, c, d = mats.T
    xi, eta = tau.xi, tau.eta
    w = (c * (xi * xi + eta * eta) - b + (d - a) * xi +
         1j * (a + d) * eta)
    return (2j * eta / w) ** int(k)


def bergman_diag_series(tau, cfg):
    """
    The diagonal Bergman kernel ||B_k(tau, tau)||_Pet for SL2(Z) as the
    series (k-1)/(4 pi) sum (2i eta / w)^k over +/- classes, w as in
    _bergman_terms. The radius doubles until the orbit tail majorant is
    below cfg.tail_tol.

    :type tau: UpperHalfPoint
    :type cfg: BergmanConfig
    :returns: (value, tail bound)
    """
    k = cfg.k
    if k != int(k):
        raise PreconditionError('The Bergman series needs integral weight')
    if int(k) % 2:
        return 0.0, 0.0
    tau, _ = reduce_to_fundamental_domain(tau)
    scale = (k - 1) / (4.0 * math.pi)

    budget = cfg.budget
    radius = float(budget.max_displacement)
    while True:
        try:
            enum = enumerate_displacements(
                tau, EnumerationBudget(max_displacement=radius,
                                       entry_cap=budget.entry_cap))
        except TruncationError as e:
            raise TruncationError('Bergman tail could not reach {:g} before '
                                  'the entry cap'.format(cfg.tail_tol),
                                  bound=None, radius=e.radius)
        tail = 0.5 * scale * orbit_tail_majorant(k, enum)
        logger.debug('Bergman series at %r: radius %g, %d elements, tail %g',
                     tau, radius, len(enum), tail)
        if tail <= cfg.tail_tol:
            break
        radius *= 2.0

    reps = [g for g in enum.elements if g.canonical() == g]
    value = scale * compensated_sum(_bergman_terms(k, tau, reps))
    if abs(value.imag) > max(tail, 1e-12 * abs(value)):
        logger.warning('Bergman series has imaginary part %g', value.imag)
    return value.real, tail


def bergman_oracle(k, tau, quad=None, trunc=60, njobs=1):
    """
    ||f(tau)||^2 / <f, f> for the basis form f of a one-dimensional cusp
    space, which equals the diagonal Bergman kernel

    :rtype: float
    """
    if k not in ONE_DIMENSIONAL_WEIGHTS:
        raise PreconditionError('Weight {} has no one-dimensional cusp '
                                'space'.format(k))
    f = cusp_form(k, trunc)
    return (petersson_norm_point(f, k, tau) /
            petersson_norm(f, k, quad, njobs))


def gamma_ratio(k):
    "Gamma((k-1)/2) / Gamma(k/2) via log-Gamma"
    if not k > 1:
        raise PreconditionError('gamma_ratio needs k > 1')
    return math.exp(gammaln(0.5 * (k - 1)) - gammaln(0.5 * k))


def prop1_rhs(k, r_gamma):
    """
    (k-1)/(2 pi) + 3(k-1)/pi cosh^-(k-4)(r/4) (1 + sinh^-2(r/4))

    :param k: weight, at least 5
    :param r_gamma: injectivity radius, positive
    :rtype: float
    """
    _check_weight(k)
    if not r_gamma > 0:
        raise PreconditionError('Injectivity radius must be positive')
    q = r_gamma / 4.0
    decay = float(sech_power(q, k - 4))
    return ((k - 1) / (2.0 * math.pi) +
            3.0 * (k - 1) / math.pi * decay * (1.0 + math.sinh(q) ** -2))


def prop1_eqn4_check(k, delta, r_gamma):
    """
    The integral sinh^-2(r/4) int_delta^inf sinh(rho + r/2) cosh^-k(rho/2)
    against its closed-form majorant

    :returns: (lhs, rhs, margin)
    """
    _check_weight(k)
    if delta < 0 or not r_gamma > 0:
        raise PreconditionError('Need delta >= 0 and r > 0')
    inv_s2 = math.sinh(r_gamma / 4.0) ** -2
    lhs = inv_s2 * sinh_shift_integral(k, delta, r_gamma / 2.0)
    half = 0.5 * delta
    rhs = (4.0 / (k - 2) * float(sech_power(half, k - 2)) * (2.0 + inv_s2) +
           8.0 / (k - 4) * float(sech_power(half, k - 4)) * inv_s2)
    return lhs, rhs, rhs - lhs


def elliptic_term(k, group):
    "(k-1)/(4 pi) sum (m_j - 1)"
    return (k - 1) / (4.0 * math.pi) * sum(m - 1 for m in group.elliptic_orders)


def cusp_term(k, group, tau):
    "2(k-1)/sqrt(pi) Gamma ratio sum Im(sigma_j^-1 tau)"
    heights = [mobius_apply(s.inverse(), tau).eta for s in group.cusp_scalings]
    if not heights:
        return 0.0
    return (2.0 * (k - 1) / math.sqrt(math.pi) * gamma_ratio(k) *
            math.fsum(heights))


def prop3_rhs(k, group, tau):
    """
    prop1_rhs plus the elliptic and cusp contributions

    :type group: GroupData
    :type tau: UpperHalfPoint
    :rtype: float
    """
    return (prop1_rhs(k, group.injectivity_radius) + elliptic_term(k, group) +
            cusp_term(k, group, tau))


def _translate_window(k, tau, tau2, tol):
    "Translations n with the remaining terms below tol relative"
    spread = math.sqrt(4.0 * tau.eta * tau2.eta)
    N = int(math.ceil(1.0 + abs(tau.xi - tau2.xi) +
                      spread * tol ** (-1.0 / k)))
    if N > 10 ** 6:
        raise TruncationError('Translation sum needs {} terms'.format(N))
    return N


def prop3_eqn5_check(k, tau, tau2, tol=1e-17):
    """
    (k-1)/(2 pi) sum_{n != 0} cosh^-k(dist(tau, tau2 + n)/2) against
    (k-1)/sqrt(pi) Gamma ratio (4 eta eta2)^(k/2) / (eta + eta2)^(k-1)

    :returns: (lhs, rhs, margin)
    """
    _check_weight(k)
    N = _translate_window(k, tau, tau2, tol)
    n = np.concatenate([np.arange(-N, 0), np.arange(1, N + 1)])
    dx = tau.xi - tau2.xi - n
    dy = tau.eta - tau2.eta
    sigma = 1.0 + (dx * dx + dy * dy) / (4.0 * tau.eta * tau2.eta)
    lhs = (k - 1) / (2.0 * math.pi) * compensated_sum(sigma ** (-0.5 * k))

    eta, eta2 = tau.eta, tau2.eta
    log_rhs = (math.log((k - 1) / math.sqrt(math.pi)) +
               math.log(gamma_ratio(k)) +
               0.5 * k * math.log(4.0 * eta * eta2) -
               (k - 1) * math.log(eta + eta2))
    rhs = math.exp(log_rhs)
    return lhs, rhs, rhs - lhs


def boundary_height(k, argmax_eta=None):
    "max(k/(4 pi), argmax_eta)"
    height = k / (4.0 * math.pi)
    if argmax_eta is not None:
        height = max(height, argmax_eta)
    return height


def prop3_report(k, measured, argmax_eta, group=None, digest=''):
    "Measured ||f(tau)||^2 at height argmax_eta against prop3_rhs there"
    if group is None:
        group = sl2z_group_data()
    rhs = prop3_rhs(k, group, UpperHalfPoint(0.0, argmax_eta))
    return BoundReport('prop3', k, 0, measured, rhs, digest)


def thm4_report(k, measured_sup, argmax_eta=None, group=None, digest=''):
    """
    sup ||B_k|| (or the sup of a normalized form) against prop3_rhs at the
    boundary height max(k/(4 pi), argmax_eta)

    :rtype: BoundReport
    """
    if group is None:
        group = sl2z_group_data()
    height = boundary_height(k, argmax_eta)
    rhs = prop3_rhs(k, group, UpperHalfPoint(0.0, height))
    return BoundReport('thm4', k, 0, measured_sup, rhs, digest,
                       'height {:g}'.format(height))


def cor5_report(k, measured_sup, argmax_eta=None, group=None, digest=''):
    "Same constant as thm4_report, applied to one normalized cusp form"
    report = thm4_report(k, measured_sup, argmax_eta, group, digest)
    report.name = 'cor5'
    return report


def thm6_report(k, measured_sup, Y=2.0, C_ell=None, C_par=None,
                argmax_eta=None, group=None, digest=''):
    """
    Bound for normalized forms on finite index subgroups of SL2(Z):
    prop1_rhs(k, r_Y) + (k-1) C_ell + k^(3/2) C_par with r_Y the injectivity
    radius over F_Y. By default C_ell = sum(m_j - 1)/(4 pi) and
    C_par = 2(k-1) Gamma ratio H #cusps / (sqrt(pi) k^(3/2)) with H the
    larger of Y and the boundary height.

    :rtype: BoundReport
    """
    _check_weight(k)
    if group is None:
        group = sl2z_group_data(Y)
    height = max(Y, boundary_height(k, argmax_eta))
    if C_ell is None:
        C_ell = sum(m - 1 for m in group.elliptic_orders) / (4.0 * math.pi)
    if C_par is None:
        C_par = (2.0 * (k - 1) * gamma_ratio(k) * height * group.num_cusps /
                 (math.sqrt(math.pi) * k ** 1.5))
    rhs = (prop1_rhs(k, group.injectivity_radius) + (k - 1) * C_ell +
           k ** 1.5 * C_par)
    case = 'Y > k/(4 pi)' if Y > k / (4.0 * math.pi) else 'Y <= k/(4 pi)'
    return BoundReport('thm6', k, 0, measured_sup, rhs, digest, case)


def auxlem_profile_height(k, valuation=1):
    "Y = max(1, (k + 1/2)/(4 pi valuation))"
    return max(1.0, (k + 0.5) / (4.0 * math.pi * valuation))


def auxlem_rhs(k, mass=1.0, valuation=1, group=None):
    """
    Bound for sup ||f||^2 eta^(1/2) over the fundamental domain:
    mass * P(Y) * Y^(1/2) with P = prop3_rhs and Y = auxlem_profile_height

    :param mass: sum of the L2 norms of the forms in the aggregate
    :param valuation: q-order of the forms at the cusp
    """
    _check_weight(k)
    if group is None:
        group = sl2z_group_data()
    Y = auxlem_profile_height(k, valuation)
    return mass * prop3_rhs(k, group, UpperHalfPoint(0.0, Y)) * math.sqrt(Y)


def auxlem_constant(k, valuation=1, group=None):
    "The constant C of the C k^2 bound at weight k"
    return auxlem_rhs(k, 1.0, valuation, group) / k ** 2


def auxlem_report(k, measured, mass=1.0, valuation=1, m=0, group=None,
                  digest=''):
    """
    Measured sup ||h||^2 eta^(1/2) against auxlem_rhs

    :rtype: BoundReport
    """
    rhs = auxlem_rhs(k, mass, valuation, group)
    return BoundReport('auxlem', k, m, measured, rhs, digest)


def jacobi_mass(m):
    "sum_mu ||h_mu||^2 over F_{Gamma_{0,1}(4m)} for a normalized form"
    return math.sqrt(4.0 * m) * index_gamma01(m)


def component_sups(hvec, policy=None):
    """
    sup ||h_mu||^2 eta^(1/2) and sup ||h_mu||^2 for each component

    :returns: (list, list)
    """
    weight = float(hvec.weight)
    with_root, plain = [], []
    for h in hvec:
        if h.is_zero():
            with_root.append(0.0)
            plain.append(0.0)
            continue
        sup, _, error = supnorm_search(h, weight, policy, 0.5)
        with_root.append(sup + error)
        sup, _, error = supnorm_search(h, weight, policy)
        plain.append(sup + error)
    return with_root, plain


def thm11_rhs(m, with_root, plain):
    "2m sum sup(||h||^2 eta^(1/2)) + (2 sqrt 2 + (4/3)^(1/4)) m^(1/2) sum sup"
    return (2.0 * m * math.fsum(with_root) +
            THETA_CONSTANT * math.sqrt(m) * math.fsum(plain))


def thm11_report(phi, k, m, quad=None, policy=None, jacobi_policy=None,
                 njobs=1, digest=''):
    """
    Sup of a normalized Jacobi cusp form against the Cauchy-Schwarz chain
    with the explicit theta constant

    :param phi: JacobiFormCoeffs or ThetaComponentVector with <phi, phi> = 1
    :raises PreconditionError: when phi is not normalized
    :rtype: BoundReport
    """
    hvec = _as_components(phi)
    if hvec is None or hvec.is_zero():
        raise PreconditionError('thm11 needs a nonzero Jacobi form')
    norm, _ = jacobi_inner_theta(hvec, hvec, k, m, quad, njobs)
    if abs(norm.real - 1.0) > NORMALIZATION_TOL:
        raise PreconditionError('Jacobi form is not normalized: <phi, phi> '
                                '= {!r}'.format(norm.real))
    measured, point = jacobi_supnorm_search(hvec, k, m, jacobi_policy)
    with_root, plain = component_sups(hvec, policy)
    rhs = thm11_rhs(m, with_root, plain)
    logger.info('thm11 k=%s m=%s: sup %g at %r, bound %g', k, m, measured,
                point, rhs)
    return BoundReport('thm11', k, m, measured, rhs, digest,
                       'mass {:g}'.format(jacobi_mass(m)))


def scaling_slope(ks, sups):
    "Least-squares slope of log(sup) against log(k)"
    return least_squares_slope(np.log(np.asarray(ks, dtype=float)),
                               np.log(np.asarray(sups, dtype=float)))


def cusp_form_report(k, bound='prop3', quad=None, policy=None, group=None,
                     trunc=60):
    """
    Normalizes the basis form of weight k, searches its sup and reports it
    against the chosen bound

    :param bound: one of 'prop3', 'thm4', 'cor5', 'thm6'
    :rtype: BoundReport
    """
    if bound not in BOUND_NAMES:
        raise PreconditionError('Unknown bound: {}'.format(bound))
    f = normalize(cusp_form(k, trunc), k, quad)
    measured, point, _ = supnorm_search(f, k, policy)
    digest = config_digest(quad, policy, {'trunc': trunc, 'bound': bound})
    if bound == 'prop3':
        return prop3_report(k, measured, point.eta, group, digest)
    if bound == 'thm4':
        return thm4_report(k, measured, point.eta, group, digest)
    if bound == 'cor5':
        return cor5_report(k, measured, point.eta, group, digest)
    return thm6_report(k, measured, argmax_eta=point.eta, group=group,
                       digest=digest)


def sweep_reports(func, items, njobs=1):
    """
    Runs func over items, serially or in a worker pool, and returns the
    reports sorted by (name, k, m)

    :param func: picklable callable returning a BoundReport
    :rtype: list of BoundReport
    """
    njobs = int(njobs)
    if njobs == 1:
        reports = list(map(func, items))
    elif njobs > 1:
        with multiprocessing.Pool(processes=njobs) as pool:
            reports = list(pool.imap(func, items))
    else:
        raise ValueError('Bad value for njobs: {}'.format(njobs))
    return sorted(reports, key=BoundReport.sort_key)
