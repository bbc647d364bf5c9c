"Seeded sampling of points and group elements"

import math

import numpy as np

from pysupnorm.hyperbolic import UpperHalfPoint, GroupElement


def set_seed(seed):
    """
    Set the global numpy random seed.

    :param seed: random seed
    :rtype: void
    """
    np.random.seed(seed)


def generator(seed=None):
    """
    An independent random state; the same seed always gives the same
    sample sequence

    :rtype: numpy.random.RandomState
    """
    return np.random.RandomState(seed)


def _state(rng):
    return np.random if rng is None else rng


def random_points(n, rng=None, xi=(-2.0, 2.0), eta=(0.05, 5.0)):
    """
    Points with xi uniform and eta log-uniform in the given ranges

    :rtype: list of UpperHalfPoint
    """
    rng = _state(rng)
    xs = rng.uniform(xi[0], xi[1], n)
    ys = np.exp(rng.uniform(math.log(eta[0]), math.log(eta[1]), n))
    return [UpperHalfPoint(x, y) for x, y in zip(xs, ys)]


def random_domain_points(n, rng=None, Y=2.0):
    """
    Points of the fundamental domain below height Y

    :rtype: list of UpperHalfPoint
    """
    rng = _state(rng)
    points = []
    while len(points) < n:
        x = rng.uniform(-0.5, 0.5)
        y = rng.uniform(math.sqrt(0.75), Y)
        if x * x + y * y >= 1.0:
            points.append(UpperHalfPoint(x, y))
    return points


def random_group_element(rng=None, length=6, max_shift=3):
    """
    A random word in S and T^n, |n| <= max_shift

    :rtype: GroupElement
    """
    rng = _state(rng)
    g = GroupElement.identity()
    for _ in range(length):
        g = g * GroupElement.T(int(rng.randint(-max_shift, max_shift + 1)))
        g = g * GroupElement.S()
    return g


def random_bounded_element(rng=None, max_entry=20, length=8, max_shift=3):
    """
    A random word in S and T^n of at most length letters, cut before any
    entry exceeds max_entry in absolute value

    :rtype: GroupElement
    """
    rng = _state(rng)
    g = GroupElement.identity()
    for _ in range(int(rng.randint(1, length + 1))):
        step = GroupElement.T(int(rng.randint(-max_shift, max_shift + 1)))
        h = g * step * GroupElement.S()
        if max(abs(e) for e in h.as_tuple()) > max_entry:
            break
        g = h
    return g


def random_jacobi_points(n, rng=None, Y=2.0):
    """
    (tau, z) with tau in the fundamental domain below Y and z in the cell
    [0, 1] x [0, eta]

    :returns: list of (UpperHalfPoint, complex)
    """
    rng = _state(rng)
    taus = random_domain_points(n, rng, Y)
    return [(t, complex(rng.uniform(0.0, 1.0), rng.uniform(0.0, t.eta)))
            for t in taus]
