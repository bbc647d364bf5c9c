"""
Command-line front end. Every command writes one table (CSV or JSON) and
returns an exit status: 0 success, 1 a bound or oracle check failed (or
the Jacobi form data failed validation), 2 invalid configuration, 3 a
numerical certificate could not be met.
"""

import sys
import math
import logging
import argparse
from functools import partial, lru_cache

import numpy as np
import pandas as pd

from pysupnorm import __version__
from pysupnorm.common import config_digest, format_complex, parse_complex
from pysupnorm.exceptions import (ConfigurationError, PreconditionError,
                                  TruncationError, AccuracyError,
                                  IterationError, ConstructionError,
                                  InconsistencyError)
from pysupnorm.hyperbolic import (UpperHalfPoint, reduce_to_fundamental_domain,
                                  hyp_distance, displacement, mobius_apply)
from pysupnorm.arithmetic import (sl2z_group_data, counting_inequality_check,
                                  index_gamma01, index_gamma01_phi_m,
                                  coset_count_bruteforce)
from pysupnorm.qseries import ONE_DIMENSIONAL_WEIGHTS, DEFAULT_TRUNC
from pysupnorm.qseries import (cusp_form, normalize, supnorm_search,
                               modularity_defect)
from pysupnorm.thetajacobi import (JacobiPoint, theta_eval, theta_pet_norm,
                                   theta_sum_bound_check, theta_norm_sum,
                                   phi_10_1, jacobi_inner_4d, jacobi_pet_norm,
                                   jacobi_inner_theta, normalize_jacobi,
                                   cauchy_schwarz_chain_check)
from pysupnorm.numerics.quadrature import (PeterssonQuadrature,
                                           JacobiQuadrature)
from pysupnorm.numerics.search import SearchConfig
from pysupnorm.bounds import (BergmanConfig, BOUND_NAMES, bergman_diag_series,
                              bergman_oracle, cusp_form_report, thm11_report,
                              prop1_eqn4_check, prop3_eqn5_check,
                              scaling_slope, sweep_reports, auxlem_report)
from pysupnorm.io.base import artifact_path
from pysupnorm.io.reports import write_table, reports_frame, FORMATS
from pysupnorm.rand import generator, random_points, random_domain_points
from pysupnorm.rand import random_jacobi_points, random_bounded_element

logger = logging.getLogger(__name__)

COMMANDS = ('reduce', 'theta-norm', 'bergman-diag', 'supnorm',
            'jacobi-supnorm', 'bounds-table', 'scaling', 'verify')
EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3
MARGIN_TOL = 1e-10
ORACLE_RTOL = 1e-3
TWO_ROUTE_RTOL = 1e-5
SLOPE_LIMIT = 1.5 + 0.2
SAMPLE_WEIGHTS = (5, 8, 12, 20)
AUXLEM_WEIGHTS = (12, 20)
MODULARITY_RTOL = 1e-9
JACOBI_INVARIANCE_RTOL = 1e-8
DISPLACEMENT_RTOL = 1e-10
JACOBI_TRUNC = 16
VERIFY_COLUMNS = ['check', 'case', 'lhs', 'rhs', 'margin', 'passed']


class RunConfig(object):
    """
    Validated settings of one CLI run

    :ivar command: one of COMMANDS
    :ivar weight: weight k
    :ivar index: Jacobi index m
    :ivar trunc: q-expansion truncation
    :ivar tol: tail tolerance for series certificates
    :ivar grid: search grid
    :ivar quad_grid: Petersson quadrature grid
    :ivar quad_tol: quadrature tolerance
    :ivar output_format: 'csv' or 'json'
    :ivar output_path: explicit output file, or None
    :ivar seed: seed for sampled points
    :ivar threads: worker processes
    """
    __slots__ = ['command', 'weight', 'index', 'trunc', 'tol', 'grid',
                 'quad_grid', 'quad_tol', 'output_format', 'output_path',
                 'seed', 'threads', 'tau', 'z', 'weights', 'indices',
                 'bound']

    def __init__(self, command, weight=12, index=1, trunc=DEFAULT_TRUNC,
                 tol=1e-6, grid=(48, 48), quad_grid=(400, 400),
                 quad_tol=1e-6, output_format='csv', output_path=None,
                 seed=7, threads=1, tau='i', z='0',
                 weights=ONE_DIMENSIONAL_WEIGHTS, indices=(1,),
                 bound='prop3'):
        if command not in COMMANDS:
            raise ConfigurationError('Unknown command: {}'.format(command))
        if not tol > 0:
            raise ConfigurationError('--tol must be positive')
        if not quad_tol > 0:
            raise ConfigurationError('--quad-tol must be positive')
        if trunc < 8:
            raise ConfigurationError('--trunc must be at least 8')
        grid, quad_grid = tuple(grid), tuple(quad_grid)
        if len(grid) not in (2, 4) or min(grid) < 4:
            raise ConfigurationError('--grid needs 2 or 4 sizes, each >= 4')
        if len(quad_grid) != 2 or min(quad_grid) < 4:
            raise ConfigurationError('--quad-grid needs two sizes >= 4')
        if output_format not in FORMATS:
            raise ConfigurationError('--format must be one of {}'
                                     .format(', '.join(FORMATS)))
        if threads < 1:
            raise ConfigurationError('--threads must be at least 1')
        if weight < 5:
            raise ConfigurationError('--weight must be at least 5')
        if index < 1 or any(m < 1 for m in indices):
            raise ConfigurationError('Jacobi indices must be at least 1')
        if bound not in BOUND_NAMES:
            raise ConfigurationError('--bound must be one of {}'
                                     .format(', '.join(BOUND_NAMES)))
        bad = [k for k in weights if k not in ONE_DIMENSIONAL_WEIGHTS]
        if command == 'supnorm' and weight not in ONE_DIMENSIONAL_WEIGHTS:
            bad.append(weight)
        if bad:
            raise ConfigurationError(
                'Weights {} have no one-dimensional cusp space; choose from '
                '{}'.format(bad, ONE_DIMENSIONAL_WEIGHTS))
        try:
            tau = UpperHalfPoint.parse(tau) if isinstance(tau, str) else tau
            z = parse_complex(z) if isinstance(z, str) else complex(z)
        except ValueError as e:
            raise ConfigurationError('Bad point literal: {}'.format(e))

        self.command = command
        self.weight = weight
        self.index = int(index)
        self.trunc = int(trunc)
        self.tol = float(tol)
        self.grid = grid
        self.quad_grid = quad_grid
        self.quad_tol = float(quad_tol)
        self.output_format = output_format
        self.output_path = output_path
        self.seed = int(seed)
        self.threads = int(threads)
        self.tau = tau
        self.z = z
        self.weights = tuple(weights)
        self.indices = tuple(int(m) for m in indices)
        self.bound = bound

    def as_dict(self):
        return {'command': self.command, 'weight': self.weight,
                'index': self.index, 'trunc': self.trunc, 'tol': self.tol,
                'grid': list(self.grid), 'quad_grid': list(self.quad_grid),
                'quad_tol': self.quad_tol, 'seed': self.seed,
                'tau': format_complex(self.tau.as_complex()),
                'z': format_complex(self.z), 'weights': list(self.weights),
                'indices': list(self.indices), 'bound': self.bound}

    def quadrature(self):
        return PeterssonQuadrature(12.0, self.quad_grid, tol=self.quad_tol)

    def jacobi_quadrature(self):
        return JacobiQuadrature()

    def search_policy(self):
        return SearchConfig(grid=self.grid[:2])

    def jacobi_policy(self):
        if len(self.grid) == 4:
            return SearchConfig(grid=self.grid)
        return None

    def digest(self):
        return config_digest(self)


def _frame(rows, columns):
    return pd.DataFrame.from_records(rows, columns=columns)


def run_reduce(cfg):
    reduced, g = reduce_to_fundamental_domain(cfg.tau)
    row = [format_complex(cfg.tau.as_complex()), reduced.xi, reduced.eta,
           g.a, g.b, g.c, g.d]
    columns = ['tau', 'reduced_xi', 'reduced_eta', 'a', 'b', 'c', 'd']
    return _frame([row], columns), EXIT_OK


def run_theta_norm(cfg):
    m = cfg.index
    p = JacobiPoint(cfg.tau, cfg.z)
    rows = []
    for mu in range(2 * m):
        res = theta_eval(mu, m, p, tol=min(cfg.tol, 1e-15))
        rows.append([mu, res.value.real, res.value.imag, res.tail,
                     theta_pet_norm(mu, m, p)])
    lhs, rhs, margin = theta_sum_bound_check(m, p)
    logger.info('Theta norm sum %r against bound %r', lhs, rhs)
    status = EXIT_OK if margin >= -MARGIN_TOL else EXIT_FAILED
    columns = ['mu', 'theta_re', 'theta_im', 'tail', 'pet_norm']
    return _frame(rows, columns), status


def run_bergman_diag(cfg):
    k = cfg.weight
    value, tail = bergman_diag_series(cfg.tau, BergmanConfig(k,
                                                            tail_tol=cfg.tol))
    oracle, deviation = float('nan'), float('nan')
    status = EXIT_OK
    if k in ONE_DIMENSIONAL_WEIGHTS:
        oracle = bergman_oracle(k, cfg.tau, cfg.quadrature(), cfg.trunc,
                                cfg.threads)
        deviation = abs(value - oracle)
        if deviation > tail + ORACLE_RTOL * oracle:
            status = EXIT_FAILED
    row = [k, format_complex(cfg.tau.as_complex()), value, tail, oracle,
           deviation, cfg.digest()]
    columns = ['k', 'tau', 'value', 'tail', 'oracle', 'deviation',
               'config_digest']
    return _frame([row], columns), status


def run_supnorm(cfg):
    report = cusp_form_report(cfg.weight, cfg.bound, cfg.quadrature(),
                              cfg.search_policy(), trunc=cfg.trunc)
    status = EXIT_OK if report.margin >= -MARGIN_TOL else EXIT_FAILED
    return reports_frame([report]), status


def jacobi_power_report(m, jacobi_quad=None, policy=None, jacobi_policy=None):
    """
    thm11 report for the normalized m-th power of phi_10_1 (weight 10m,
    index m)
    """
    phi = phi_10_1(JACOBI_TRUNC)
    if m > 1:
        phi = phi ** m
    k = phi.weight
    hvec = normalize_jacobi(phi.theta_components(), k, m, jacobi_quad)
    digest = config_digest(jacobi_quad, policy, jacobi_policy,
                           {'trunc_n': JACOBI_TRUNC, 'm': m})
    return thm11_report(hvec, k, m, jacobi_quad, policy, jacobi_policy,
                        digest=digest)


def run_jacobi_supnorm(cfg):
    report = jacobi_power_report(cfg.index, cfg.jacobi_quadrature(),
                                 cfg.search_policy(), cfg.jacobi_policy())
    status = EXIT_OK if report.margin >= -MARGIN_TOL else EXIT_FAILED
    return reports_frame([report]), status


def _weight_reports(cfg, bound):
    func = partial(cusp_form_report, bound=bound, quad=cfg.quadrature(),
                   policy=cfg.search_policy(), trunc=cfg.trunc)
    return sweep_reports(func, cfg.weights, cfg.threads)


def run_bounds_table(cfg):
    reports = _weight_reports(cfg, cfg.bound)
    failed = [r for r in reports if r.margin < -MARGIN_TOL]
    for r in failed:
        logger.error('Bound %s violated at k=%s: margin %g', r.name, r.k,
                     r.margin)
    return reports_frame(reports), EXIT_FAILED if failed else EXIT_OK


def run_scaling(cfg):
    rows = []
    status = EXIT_OK
    if cfg.weights:
        reports = _weight_reports(cfg, 'prop3')
        rows.extend(['weight', r.k, 0, r.lhs, r.rhs, r.config_digest]
                    for r in reports)
        if len(reports) > 1:
            slope = scaling_slope([r.k for r in reports],
                                  [r.lhs for r in reports])
            logger.info('Sup-norm scaling slope in k: %.4f', slope)
            if slope > SLOPE_LIMIT:
                status = EXIT_FAILED
    if cfg.indices:
        func = partial(jacobi_power_report,
                       jacobi_quad=cfg.jacobi_quadrature(),
                       policy=cfg.search_policy(),
                       jacobi_policy=cfg.jacobi_policy())
        reports = sweep_reports(func, cfg.indices, cfg.threads)
        rows.extend(['index', r.k, r.m, r.lhs, r.rhs, r.config_digest]
                    for r in reports)
    columns = ['family', 'k', 'm', 'measured_sup', 'bound', 'config_digest']
    return _frame(rows, columns), status


def _row(check, case, lhs, rhs, margin=None):
    if margin is None:
        margin = rhs - lhs
    return [check, case, lhs, rhs, margin, bool(margin >= -MARGIN_TOL)]


def _verify_reduction(cfg, rng):
    rows = []
    for tau in random_points(20, rng):
        once, _ = reduce_to_fundamental_domain(tau)
        twice, _ = reduce_to_fundamental_domain(once)
        drift = hyp_distance(once, twice)
        rows.append(_row('reduce', repr(tau), drift, 1e-12))
    return rows


def _verify_invariance(cfg, rng):
    rows = []
    tau = UpperHalfPoint(0.0, 1.7)
    elements = [random_bounded_element(rng) for _ in range(50)]
    for k in ONE_DIMENSIONAL_WEIGHTS:
        f = cusp_form(k, cfg.trunc)
        worst = max(modularity_defect(f, k, g, tau) for g in elements)
        rows.append(_row('modularity', 'k={} worst of 50 at 1.7i'.format(k),
                         worst, MODULARITY_RTOL))

    hvec = phi_10_1(JACOBI_TRUNC).theta_components()
    worst = 0.0
    for t, z in random_jacobi_points(10, rng, 1.3):
        t = t.as_complex()
        norm = jacobi_pet_norm(hvec, 10, 1, JacobiPoint(t, z))
        images = [JacobiPoint(-1.0 / t, z / t), JacobiPoint(t + 1.0, z)]
        images.extend(JacobiPoint(t, z + lam * t + mu)
                      for lam in (-1, 0, 1) for mu in (-1, 0, 1))
        for p in images:
            moved = jacobi_pet_norm(hvec, 10, 1, p)
            worst = max(worst, abs(moved - norm) / norm)
    rows.append(_row('jacobi_invariance', 'phi_10_1 worst of 10', worst,
                     JACOBI_INVARIANCE_RTOL))

    taus = random_domain_points(40, rng, 3.0)
    worst = 0.0
    for t1, t2 in zip(taus[::2], taus[1::2]):
        g = random_bounded_element(rng)
        base = displacement(t1, t2)
        moved = displacement(mobius_apply(g, t1), mobius_apply(g, t2))
        worst = max(worst, abs(moved - base) / base)
    rows.append(_row('displacement_invariance', 'worst of 20 pairs', worst,
                     DISPLACEMENT_RTOL))
    return rows


def _radius_ladder(r):
    "(k, delta) over the weights 5, 8, 12, 20 and delta in r/2, r, 2r"
    return [(k, delta) for k in SAMPLE_WEIGHTS
            for delta in (r / 2.0, r, 2.0 * r)]


def _verify_counting(cfg, rng):
    group = sl2z_group_data()
    ladder = _radius_ladder(group.injectivity_radius)
    taus = random_domain_points(2 * len(ladder), rng, 3.0)
    rows = []
    for i, (k, delta) in enumerate(ladder):
        for tau in taus[2 * i:2 * i + 2]:
            lhs, rhs, margin = counting_inequality_check(k, tau, delta,
                                                         group)
            rows.append(_row('counting', 'k={} {!r} delta={:g}'
                             .format(k, tau, delta), lhs, rhs, margin))
    return rows


def _verify_index(cfg, rng):
    rows = []
    for m in range(1, 7):
        count = coset_count_bruteforce(m)
        formula = index_gamma01(m)
        rows.append(_row('index_gamma01', 'm={} phi(m) variant={}'
                         .format(m, index_gamma01_phi_m(m)), count, formula,
                         -abs(count - formula)))
    return rows


def _verify_integral_bounds(cfg, rng):
    rows = []
    samples = [(k, delta, r)
               for r in (sl2z_group_data().injectivity_radius, math.log(3.0))
               for k, delta in _radius_ladder(r)]
    for k, delta, r in samples:
        lhs, rhs, margin = prop1_eqn4_check(k, delta, r)
        rows.append(_row('prop1_eqn4', 'k={} delta={:g} r={:g}'
                         .format(k, delta, r), lhs, rhs, margin))
    tau = UpperHalfPoint(0.0, 12 / (4.0 * math.pi))
    samples = [(12, tau, tau)]
    taus = random_domain_points(40, rng, 3.0)
    for i in range(20):
        samples.append((int(rng.randint(5, 31)), taus[2 * i],
                        taus[2 * i + 1]))
    for k, t1, t2 in samples:
        lhs, rhs, margin = prop3_eqn5_check(k, t1, t2)
        rows.append(_row('prop3_eqn5', 'k={} {!r} {!r}'.format(k, t1, t2),
                         lhs, rhs, margin))
    return rows


def _verify_bergman(cfg, rng):
    rows = []
    quad = cfg.quadrature()
    for tau in (UpperHalfPoint(0.0, 1.0), UpperHalfPoint(0.0, 2.0),
                UpperHalfPoint(0.5, 1.2)):
        value, tail = bergman_diag_series(tau, BergmanConfig(12,
                                                            tail_tol=cfg.tol))
        oracle = bergman_oracle(12, tau, quad, cfg.trunc, cfg.threads)
        rows.append(_row('bergman', repr(tau), abs(value - oracle),
                         tail + ORACLE_RTOL * oracle))
    return rows


def _verify_theta_bounds(cfg, rng, size=10):
    rows = []
    xi = np.linspace(-0.5, 0.5, size)
    eta = np.linspace(math.sqrt(0.75), 4.0, size)
    x = np.linspace(0.0, 1.0, size)
    v = np.linspace(0.0, 1.0, size)
    XI, ETA, X, V = [a.ravel() for a in np.meshgrid(xi, eta, x, v,
                                                    indexing='ij')]
    tau = XI + 1j * ETA
    z = X + 1j * V * ETA
    for m in range(1, 9):
        lhs = theta_norm_sum(m, tau, z)
        rhs = (2 * m * np.sqrt(ETA) *
               (1.0 + 1.0 / np.sqrt(2 * m * ETA)) ** 2)
        worst = int(np.argmin(rhs - lhs))
        rows.append(_row('theta_sum_bound', 'm={}'.format(m),
                         float(lhs[worst]), float(rhs[worst])))
    return rows


def _verify_jacobi(cfg, rng):
    rows = []
    try:
        phi = phi_10_1(JACOBI_TRUNC)
    except ConstructionError as e:
        logger.error('phi_10_1 failed validation: %s', e)
        return [_row('phi_10_1', 'construction', 1.0, 0.0)]
    rows.append(_row('phi_10_1', 'discriminant', phi.discriminant_defect(),
                     MARGIN_TOL))

    quad = cfg.jacobi_quadrature()
    hvec = phi.theta_components()
    four_d, _ = jacobi_inner_4d(phi, phi, 10, 1, quad, cfg.threads)
    theta, _ = jacobi_inner_theta(hvec, hvec, 10, 1, quad, cfg.threads)
    rel = abs(four_d - theta) / abs(theta)
    rows.append(_row('two_route', 'phi_10_1', rel, TWO_ROUTE_RTOL))

    worst = None
    for tau, z in random_jacobi_points(50, rng):
        lhs, rhs, margin = cauchy_schwarz_chain_check(hvec, 10, 1,
                                                      JacobiPoint(tau, z))
        if worst is None or margin < worst[2]:
            worst = (lhs, rhs, margin)
    rows.append(_row('cauchy_schwarz', 'phi_10_1 worst of 50', *worst))
    return rows


@lru_cache(maxsize=1)
def _thm4_reports(cfg):
    "Weight family reports shared by the reports and scaling checks"
    return tuple(_weight_reports(cfg, 'thm4'))


def _verify_reports(cfg, rng):
    rows = []
    for r in _thm4_reports(cfg):
        rows.append(_row(r.name, 'k={}'.format(r.k), r.lhs, r.rhs))
    r = jacobi_power_report(1, cfg.jacobi_quadrature(),
                            cfg.search_policy(), cfg.jacobi_policy())
    rows.append(_row(r.name, 'k=10 m=1', r.lhs, r.rhs))
    return rows


def _verify_scaling(cfg, rng):
    reports = _thm4_reports(cfg)
    if len(reports) < 2:
        return []
    slope = scaling_slope([r.k for r in reports], [r.lhs for r in reports])
    logger.info('Sup-norm scaling slope in k: %.4f', slope)
    case = 'k={}'.format(','.join(str(r.k) for r in reports))
    return [_row('scaling_slope', case, slope, SLOPE_LIMIT)]


def _verify_auxlem(cfg, rng):
    rows = []
    quad, policy = cfg.quadrature(), cfg.search_policy()
    for k in AUXLEM_WEIGHTS:
        f = normalize(cusp_form(k, cfg.trunc), k, quad, cfg.threads)
        sup, _, error = supnorm_search(f, k, policy, 0.5)
        r = auxlem_report(k, sup + error)
        rows.append(_row(r.name, 'k={}'.format(k), r.lhs, r.rhs))
    return rows


VERIFY_SUITE = (_verify_reduction, _verify_invariance, _verify_counting,
                _verify_index, _verify_integral_bounds, _verify_bergman,
                _verify_theta_bounds, _verify_jacobi, _verify_reports,
                _verify_scaling, _verify_auxlem)


def run_verify(cfg):
    rng = generator(cfg.seed)
    rows = []
    for check in VERIFY_SUITE:
        logger.info('Running %s', check.__name__.lstrip('_'))
        rows.extend(check(cfg, rng))
    frame = _frame(rows, VERIFY_COLUMNS)
    failed = frame[~frame['passed']]
    for _, row in failed.iterrows():
        logger.error('Check %s (%s) failed: margin %g', row['check'],
                     row['case'], row['margin'])
    return frame, EXIT_FAILED if len(failed) else EXIT_OK


RUNNERS = {'reduce': run_reduce, 'theta-norm': run_theta_norm,
           'bergman-diag': run_bergman_diag, 'supnorm': run_supnorm,
           'jacobi-supnorm': run_jacobi_supnorm,
           'bounds-table': run_bounds_table, 'scaling': run_scaling,
           'verify': run_verify}


def run(cfg):
    """
    Runs one command and writes its table

    :type cfg: RunConfig
    :returns: exit status
    """
    frame, status = RUNNERS[cfg.command](cfg)
    path = artifact_path(cfg.command, cfg.output_format, cfg.output_path)
    write_table(frame, path, cfg.output_format)
    logger.info('Wrote %d rows to %s', len(frame), path)
    return status


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(',') if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated integers, '
                                         'got {!r}'.format(text))


COMMAND_HELP = {
    'reduce': 'Reduce a point to the fundamental domain',
    'theta-norm': 'Jacobi theta values and Petersson norms at a point',
    'bergman-diag': 'Diagonal Bergman kernel series at a point',
    'supnorm': 'Sup-norm of the normalized cusp form of a weight',
    'jacobi-supnorm': 'Sup-norm of a normalized power of phi_10_1',
    'bounds-table': 'Measured sup-norms against a bound, one row per weight',
    'scaling': 'Sup-norm scaling tables in the weight and the index',
    'verify': 'Run the property and oracle suite',
}

COMMAND_FLAGS = {
    'reduce': ('tau',),
    'theta-norm': ('index', 'tau', 'z'),
    'bergman-diag': ('weight', 'tau'),
    'supnorm': ('weight', 'bound'),
    'jacobi-supnorm': ('index',),
    'bounds-table': ('weights', 'bound'),
    'scaling': ('weights', 'indices'),
    'verify': (),
}


def _add_specific(parser, flag):
    if flag == 'tau':
        parser.add_argument('--tau', default='i',
                            help='point of the upper half-plane, as re+imi')
    elif flag == 'z':
        parser.add_argument('--z', default='0', help='elliptic variable')
    elif flag == 'weight':
        parser.add_argument('--weight', type=int, default=12)
    elif flag == 'index':
        parser.add_argument('--index', type=int, default=1)
    elif flag == 'weights':
        parser.add_argument('--weights', type=_int_list,
                            default=ONE_DIMENSIONAL_WEIGHTS)
    elif flag == 'indices':
        parser.add_argument('--indices', type=_int_list, default=(1, 2))
    elif flag == 'bound':
        parser.add_argument('--bound', choices=BOUND_NAMES, default='prop3')


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--trunc', type=int, default=DEFAULT_TRUNC,
                        help='q-expansion truncation order')
    common.add_argument('--tol', type=float, default=1e-6,
                        help='tail tolerance of series certificates')
    common.add_argument('--grid', type=_int_list, default=(48, 48),
                        help='search grid, e.g. 48,48')
    common.add_argument('--quad-grid', type=_int_list, default=(400, 400),
                        dest='quad_grid', help='Petersson quadrature grid')
    common.add_argument('--quad-tol', type=float, default=1e-6,
                        dest='quad_tol', help='quadrature tolerance')
    common.add_argument('--format', choices=FORMATS, default='csv',
                        dest='output_format')
    common.add_argument('--output', dest='output_path', default=None,
                        help='output file (default: <command>.<format> in '
                        '$PYSUPNORM_OUTPUT_DIR)')
    common.add_argument('--seed', type=int, default=7,
                        help='seed for sampled points')
    common.add_argument('--threads', type=int, default=1,
                        help='worker processes')
    common.add_argument('--verbose', action='store_true',
                        help='debug logging')

    parser = argparse.ArgumentParser(
        prog='pysupnorm',
        description='Sup-norm bounds for cusp forms and Jacobi forms')
    parser.add_argument('--version', action='version',
                        version='%(prog)s {}'.format(__version__))
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        sub = subparsers.add_parser(command, parents=[common],
                                    help=COMMAND_HELP[command])
        for flag in COMMAND_FLAGS[command]:
            _add_specific(sub, flag)
    return parser


def main(argv=None):
    """
    Entry point of the pysupnorm command

    :returns: exit status
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose
                        else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    options = vars(args)
    options.pop('verbose')
    try:
        cfg = RunConfig(**options)
        return run(cfg)
    except (ConfigurationError, PreconditionError) as e:
        logger.error('Configuration error: %s', e)
        return EXIT_CONFIG
    except (TruncationError, AccuracyError, IterationError) as e:
        logger.error('Numerical certificate not met: %s', e)
        return EXIT_NUMERICAL
    except (ConstructionError, InconsistencyError) as e:
        logger.error('Jacobi form data failed validation: %s', e)
        return EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
