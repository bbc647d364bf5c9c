"Grid search with local coordinate refinement for maximizing norms"

import logging

import numpy as np

from pysupnorm.exceptions import PreconditionError

logger = logging.getLogger(__name__)


class SearchConfig(object):
    """
    Settings for the sup-norm searches

    :ivar grid: coarse grid size per coordinate
    :ivar height: search height cap; None uses max(2, k/(2 pi))
    :ivar restarts: number of top grid cells refined
    :ivar min_step: refinement stops once all steps fall below this
    :ivar max_evals: evaluation cap per refinement
    """
    __slots__ = ['grid', 'height', 'restarts', 'min_step', 'max_evals']

    def __init__(self, grid=(48, 48), height=None, restarts=3,
                 min_step=1e-9, max_evals=20000):
        grid = tuple(int(n) for n in grid)
        if min(grid) < 4:
            raise PreconditionError('Search grid sizes must be at least 4')
        if restarts < 1:
            raise PreconditionError('Need at least one restart')
        if height is not None and not height > 1:
            raise PreconditionError('Search height must exceed 1')
        self.grid = grid
        self.height = height
        self.restarts = int(restarts)
        self.min_step = float(min_step)
        self.max_evals = int(max_evals)

    def as_dict(self):
        return {'grid': list(self.grid), 'height': self.height,
                'restarts': self.restarts, 'min_step': self.min_step,
                'max_evals': self.max_evals}

    def with_grid(self, grid):
        "Copy with a different coarse grid"
        return SearchConfig(grid, self.height, self.restarts, self.min_step,
                            self.max_evals)


def coordinate_search(func, x0, f0, lower, upper, step, min_step,
                      max_evals=20000):
    """
    Compass search: try +/- step along each coordinate, accept the first
    improvement, halve all steps when none improves.

    :param func: vectorized objective taking an (n, dim) array
    :returns: (best point, best value)
    """
    x = np.array(x0, dtype=float)
    fx = float(f0)
    step = np.array(step, dtype=float)
    evals = 0
    while np.any(step > min_step) and evals < max_evals:
        improved = False
        for i in range(len(x)):
            for sign in (1.0, -1.0):
                cand = x.copy()
                cand[i] = min(max(x[i] + sign * step[i], lower[i]), upper[i])
                if cand[i] == x[i]:
                    continue
                fc = float(func(cand[None, :])[0])
                evals += 1
                if fc > fx:
                    x, fx = cand, fc
                    improved = True
                    break
            if improved:
                break
        if not improved:
            step *= 0.5
    if evals >= max_evals:
        logger.debug('Coordinate search stopped at evaluation cap %d',
                     max_evals)
    return x, fx


def grid_then_refine(func, grid, lower, upper, restarts=3, min_step=1e-9,
                     max_evals=20000):
    """
    Maximizes func over a box: evaluates a grid including the box faces,
    then refines the best `restarts` grid points by coordinate search.
    Deterministic for a fixed configuration.

    :param func: vectorized objective taking an (n, dim) array
    :param grid: points per coordinate
    :param lower: lower box corner
    :param upper: upper box corner
    :returns: (best value, best point)
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    axes = [np.linspace(lo, hi, n) for lo, hi, n in zip(lower, upper, grid)]
    mesh = np.meshgrid(*axes, indexing='ij')
    points = np.stack([m.ravel() for m in mesh], axis=1)
    values = np.asarray(func(points), dtype=float)

    order = np.argsort(-values, kind='stable')[:restarts]
    step = (upper - lower) / (np.asarray(grid, dtype=float) - 1.0)

    best_x, best_f = points[order[0]], float(values[order[0]])
    for idx in order:
        x, fx = coordinate_search(func, points[idx], values[idx], lower,
                                  upper, step, min_step, max_evals)
        logger.debug('Restart from %s reached %r', points[idx], fx)
        if fx > best_f:
            best_x, best_f = x, fx
    return best_f, best_x
