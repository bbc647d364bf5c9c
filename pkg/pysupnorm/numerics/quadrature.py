"""
Quadrature rules over the truncated fundamental domain of SL2(Z) and over
the Jacobi cell F x E_tau.

The domain {|xi| <= 1/2, |tau| >= 1, eta <= Y} is mapped to the unit
rectangle by eta = a(xi) * (Y/a(xi))**s with a(xi) = sqrt(1 - xi^2), so the
log-spaced eta nodes follow the arc at the bottom. Node weights include the
hyperbolic measure d(xi) d(eta) / eta^2.
"""

import logging
import multiprocessing
from functools import partial

import numpy as np

from pysupnorm.common import compensated_sum, chunks
from pysupnorm.exceptions import AccuracyError, PreconditionError

logger = logging.getLogger(__name__)

RULES = ('midpoint', 'gauss')
CHUNK_SIZE = 4096


class PeterssonQuadrature(object):
    """
    Composite rule over F truncated at height Y_max

    :ivar Y_max: truncation height, above 1
    :ivar grid: (n_xi, n_eta) panel counts
    :ivar rule: 'midpoint' (Richardson extrapolated) or 'gauss'
    :ivar tol: relative tolerance for the a-posteriori error estimate
    """
    __slots__ = ['Y_max', 'grid', 'rule', 'tol']

    def __init__(self, Y_max=12.0, grid=(400, 400), rule='midpoint',
                 tol=1e-6):
        if not Y_max > 1:
            raise PreconditionError('Y_max must exceed 1')
        if not tol > 0:
            raise PreconditionError('Tolerance must be positive')
        if rule not in RULES:
            raise PreconditionError('Unknown quadrature rule: {}'.format(rule))
        grid = tuple(int(n) for n in grid)
        if len(grid) != 2 or min(grid) < 4:
            raise PreconditionError('Quadrature grid needs two sizes >= 4')
        self.Y_max = float(Y_max)
        self.grid = grid
        self.rule = rule
        self.tol = float(tol)

    def as_dict(self):
        return {'Y_max': self.Y_max, 'grid': list(self.grid),
                'rule': self.rule, 'tol': self.tol}

    def nodes(self, n_xi, n_s):
        """
        Nodes and weights of the base rule at the given resolution

        :returns: xi, eta, weights (flat numpy arrays)
        """
        if self.rule == 'midpoint':
            u = (np.arange(n_xi) + 0.5) / n_xi
            wu = np.full(n_xi, 1.0 / n_xi)
            s = (np.arange(n_s) + 0.5) / n_s
            ws = np.full(n_s, 1.0 / n_s)
        else:
            u, wu = np.polynomial.legendre.leggauss(n_xi)
            u, wu = 0.5 * (u + 1.0), 0.5 * wu
            s, ws = np.polynomial.legendre.leggauss(n_s)
            s, ws = 0.5 * (s + 1.0), 0.5 * ws

        xi = u - 0.5
        low = np.sqrt(1.0 - xi * xi)
        span = np.log(self.Y_max / low)
        xx, ss = np.meshgrid(xi, s, indexing='ij')
        eta = low[:, None] * np.exp(ss * span[:, None])
        weights = np.outer(wu, ws) * span[:, None] / eta
        return xx.ravel(), eta.ravel(), weights.ravel()

    def _sum(self, func, n_xi, n_s, njobs):
        xi, eta, w = self.nodes(n_xi, n_s)
        values = evaluate_chunked(func, xi, eta, njobs)
        return compensated_sum(w * values)

    def integrate(self, func, njobs=1, check=True):
        """
        Integrates func(xi, eta) against the hyperbolic measure over F.

        The midpoint rule returns the Richardson extrapolation
        R_n = I_n + (I_n - I_{n/2})/3; the error estimate is the difference
        to the same quantity at half resolution. The Gauss rule compares
        against half resolution directly.

        :param func: vectorized integrand
        :param njobs: worker processes
        :param check: raise AccuracyError when the estimate exceeds tol
        :returns: (value, error estimate)
        """
        n_xi, n_s = self.grid
        if self.rule == 'midpoint':
            full = self._sum(func, n_xi, n_s, njobs)
            half = self._sum(func, n_xi // 2, n_s // 2, njobs)
            quarter = self._sum(func, n_xi // 4, n_s // 4, njobs)
            value = full + (full - half) / 3.0
            error = abs(value - (half + (half - quarter) / 3.0))
        else:
            value = self._sum(func, n_xi, n_s, njobs)
            error = abs(value - self._sum(func, n_xi // 2, n_s // 2, njobs))

        logger.debug('Quadrature %s grid=%s: %r (+/- %g)', self.rule,
                     self.grid, value, error)
        if check and error > self.tol * abs(value):
            raise AccuracyError('Quadrature error estimate {:g} exceeds '
                                'tolerance {:g}'.format(error, self.tol),
                                estimate=error, tol=self.tol)
        return value, error


class JacobiQuadrature(object):
    """
    Product rule over F x E_tau: a PeterssonQuadrature in tau and a
    midpoint grid on E_tau = [0,1] x [0, eta]. The integrand over E_tau is
    periodic in x and, after x-integration, periodic in y, so the midpoint
    grid converges spectrally.

    :ivar tau_rule: PeterssonQuadrature
    :ivar z_grid: (n_x, n_y)
    """
    __slots__ = ['tau_rule', 'z_grid']

    def __init__(self, tau_rule=None, z_grid=(48, 48)):
        if tau_rule is None:
            tau_rule = PeterssonQuadrature(Y_max=6.0, grid=(48, 48),
                                           tol=1e-4)
        z_grid = tuple(int(n) for n in z_grid)
        if len(z_grid) != 2 or min(z_grid) < 4:
            raise PreconditionError('z grid needs two sizes >= 4')
        self.tau_rule = tau_rule
        self.z_grid = z_grid

    def as_dict(self):
        return {'tau_rule': self.tau_rule.as_dict(),
                'z_grid': list(self.z_grid)}

    def z_nodes(self):
        "Midpoint nodes (x, v) on the unit square; y = v * eta"
        n_x, n_y = self.z_grid
        x = (np.arange(n_x) + 0.5) / n_x
        v = (np.arange(n_y) + 0.5) / n_y
        xx, vv = np.meshgrid(x, v, indexing='ij')
        return xx.ravel(), vv.ravel()


def _evaluate_block(func, block):
    xi, eta = block
    return np.asarray(func(xi, eta))


def evaluate_chunked(func, xi, eta, njobs=1, size=CHUNK_SIZE):
    """
    Evaluates func over node arrays in blocks, serially or in a worker pool.
    Blocks are merged in order.

    :rtype: ndarray
    """
    blocks = [(xi[start:stop], eta[start:stop])
              for start, stop in chunks(len(xi), size)]
    work = partial(_evaluate_block, func)
    njobs = int(njobs)
    if njobs == 1:
        res = map(work, blocks)
        return np.concatenate(list(res)) if blocks else np.zeros(0)
    elif njobs > 1:
        with multiprocessing.Pool(processes=njobs) as pool:
            res = list(pool.imap(work, blocks))
        return np.concatenate(res) if blocks else np.zeros(0)
    else:
        raise ValueError('Bad value for njobs: {}'.format(njobs))
