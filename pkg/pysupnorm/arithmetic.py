"""
Arithmetic of SL2(Z): enumeration of group elements by displacement, the
lattice point counting function and the counting inequality, congruence
subgroup membership and indices.
"""

import math
import logging
from collections import deque
from functools import lru_cache

import numpy as np

from pysupnorm.common import compensated_sum
from pysupnorm.exceptions import PreconditionError, TruncationError
from pysupnorm.hyperbolic import (UpperHalfPoint, GroupElement,
                                  sigma_to_distance, distance_to_sigma)
from pysupnorm.numerics.mathfuncs import sech_power, sinh_shift_integral

logger = logging.getLogger(__name__)

DEFAULT_ENTRY_CAP = 4096
STABILIZER_TOL = 1e-10


class GroupData(object):
    """
    Cusp, elliptic and injectivity data of a Fuchsian group

    :ivar num_cusps: number of inequivalent cusps
    :ivar elliptic_orders: orders m_j of the elliptic fixed points
    :ivar injectivity_radius: r_Gamma
    :ivar center_order: size of the center (1 or 2)
    :ivar cusp_scalings: scaling matrices, one per cusp
    :ivar provenance: how the injectivity radius was obtained
    """
    __slots__ = ['num_cusps', 'elliptic_orders', 'injectivity_radius',
                 'center_order', 'cusp_scalings', 'provenance']

    def __init__(self, num_cusps, elliptic_orders, injectivity_radius,
                 center_order=2, cusp_scalings=None, provenance=''):
        if num_cusps < 0:
            raise PreconditionError('Number of cusps must be nonnegative')
        if not injectivity_radius > 0:
            raise PreconditionError('Injectivity radius must be positive')
        if center_order not in (1, 2):
            raise PreconditionError('Center order must be 1 or 2')
        if any(m < 2 for m in elliptic_orders):
            raise PreconditionError('Elliptic orders must be at least 2')
        if cusp_scalings is None:
            cusp_scalings = [GroupElement.identity()] * num_cusps
        if len(cusp_scalings) != num_cusps:
            raise PreconditionError('Need one scaling matrix per cusp')

        self.num_cusps = int(num_cusps)
        self.elliptic_orders = tuple(int(m) for m in elliptic_orders)
        self.injectivity_radius = float(injectivity_radius)
        self.center_order = int(center_order)
        self.cusp_scalings = tuple(cusp_scalings)
        self.provenance = provenance

    def as_dict(self):
        return {'num_cusps': self.num_cusps,
                'elliptic_orders': list(self.elliptic_orders),
                'injectivity_radius': self.injectivity_radius,
                'center_order': self.center_order,
                'cusp_scalings': [g.as_tuple() for g in self.cusp_scalings],
                'provenance': self.provenance}

    def __repr__(self):
        return ('GroupData(cusps={}, elliptic={}, r={:.6f}, '
                'center={})').format(self.num_cusps, self.elliptic_orders,
                                     self.injectivity_radius,
                                     self.center_order)


class EnumerationBudget(object):
    """
    Limits for enumerate_elements. Exactly one of max_displacement (a bound
    on sigma(tau, g.tau)) or max_entry (a bound on matrix entries) is set.
    entry_cap bounds the work: a displacement that would need larger
    entries raises TruncationError.
    """
    __slots__ = ['max_displacement', 'max_entry', 'entry_cap']

    def __init__(self, max_displacement=None, max_entry=None,
                 entry_cap=DEFAULT_ENTRY_CAP):
        if (max_displacement is None) == (max_entry is None):
            raise PreconditionError('Exactly one of max_displacement and '
                                    'max_entry must be given')
        if max_displacement is not None and max_displacement < 1:
            raise PreconditionError('max_displacement must be at least 1')
        if max_entry is not None and max_entry < 1:
            raise PreconditionError('max_entry must be at least 1')
        self.max_displacement = max_displacement
        self.max_entry = max_entry
        self.entry_cap = int(entry_cap)

    def as_dict(self):
        return {'max_displacement': self.max_displacement,
                'max_entry': self.max_entry,
                'entry_cap': self.entry_cap}


class Enumeration(object):
    """
    Group elements g with sigma(tau, g.tau) <= radius, sorted by
    (sigma, a, b, c, d)

    :ivar tau: base point
    :ivar radius: displacement up to which the list is complete
    :ivar elements: list of GroupElement
    :ivar sigmas: numpy array of displacements, aligned with elements
    """

    def __init__(self, tau, radius, elements, sigmas):
        self.tau = tau
        self.radius = radius
        self.elements = elements
        self.sigmas = sigmas

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(zip(self.elements, self.sigmas))

    @property
    def distances(self):
        return sigma_to_distance(self.sigmas)


def entry_scale(tau):
    "(1 + xi^2 + eta^2)/eta: converts displacement bounds to entry bounds"
    return (1.0 + tau.xi ** 2 + tau.eta ** 2) / tau.eta


def radius_for_entries(tau, max_entry):
    """
    Largest displacement R such that every g with sigma(tau, g.tau) <= R has
    all entries bounded by max_entry

    :rtype: float
    """
    return ((max_entry / entry_scale(tau)) ** 2 + 2.0) / 4.0


def entries_for_radius(tau, radius):
    "Entry bound needed to reach displacement radius"
    return int(math.ceil(entry_scale(tau) * math.sqrt(4.0 * radius - 2.0)))


def _candidates_for_c(c, tau, F):
    """
    All (a, b, c, d) with ad - bc = 1 for a fixed c that satisfy the
    necessary bounds |a - c xi| <= F, |c xi + d| <= F
    """
    xi, eta = tau.xi, tau.eta
    if c == 0:
        bmax = int(math.floor(F * eta))
        b = np.arange(-bmax, bmax + 1, dtype=np.int64)
        ones = np.ones_like(b)
        return np.concatenate([np.stack([ones, b, 0 * b, ones], axis=1),
                               np.stack([-ones, b, 0 * b, -ones], axis=1)])

    a = np.arange(math.ceil(c * xi - F), math.floor(c * xi + F) + 1,
                  dtype=np.int64)
    d = np.arange(math.ceil(-c * xi - F), math.floor(-c * xi + F) + 1,
                  dtype=np.int64)
    if not len(a) or not len(d):
        return np.zeros((0, 4), dtype=np.int64)
    aa, dd = np.meshgrid(a, d, indexing='ij')
    num = aa * dd - 1
    ok = num % c == 0
    aa, dd = aa[ok], dd[ok]
    bb = (aa * dd - 1) // c
    return np.stack([aa, bb, np.full_like(aa, c), dd], axis=1)


def _conjugated_sigma(mats, tau):
    "sigma(tau, g.tau) for rows (a, b, c, d) of an integer array"
    xi, eta = tau.xi, tau.eta
    a, b, c, d = (mats[:, i].astype(float) for i in range(4))
    n11 = a - c * xi
    n12 = (a * xi + b - c * xi * xi - d * xi) / eta
    n21 = c * eta
    n22 = c * xi + d
    return (n11 ** 2 + n12 ** 2 + n21 ** 2 + n22 ** 2 + 2.0) / 4.0


def enumerate_displacements(tau, budget):
    """
    Enumerates SL2(Z) by displacement at tau.

    With F = sqrt(4R - 2), the matrix N = M^-1 g M (M maps i to tau) has
    Frobenius norm F exactly when sigma(tau, g.tau) = R, and its entries
    give |c| eta <= F, |c xi + d| <= F and |a - c xi| <= F. Every c in range
    is scanned, so the result is complete up to R.

    :type tau: UpperHalfPoint
    :type budget: EnumerationBudget
    :rtype: Enumeration
    """
    if budget.max_entry is not None:
        radius = radius_for_entries(tau, budget.max_entry)
    else:
        radius = float(budget.max_displacement)
        if entries_for_radius(tau, radius) > budget.entry_cap:
            achieved = radius_for_entries(tau, budget.entry_cap)
            raise TruncationError('Displacement {} needs entries beyond {}'
                                  .format(radius, budget.entry_cap),
                                  radius=achieved)

    F = math.sqrt(max(4.0 * radius - 2.0, 0.0))
    cmax = int(math.floor(F / tau.eta))
    blocks = [_candidates_for_c(c, tau, F) for c in range(-cmax, cmax + 1)]
    mats = np.concatenate(blocks) if blocks else np.zeros((0, 4), np.int64)
    sig = _conjugated_sigma(mats, tau)
    keep = sig <= radius
    mats, sig = mats[keep], sig[keep]

    order = np.lexsort((mats[:, 3], mats[:, 2], mats[:, 1], mats[:, 0], sig))
    mats, sig = mats[order], sig[order]
    elements = [GroupElement(*row) for row in mats.tolist()]
    logger.debug('Enumerated %d elements at %r up to displacement %g',
                 len(elements), tau, radius)
    return Enumeration(tau, radius, elements, sig)


def enumerate_elements(tau, budget):
    """
    All g in SL2(Z) with sigma(tau, g.tau) within the budget, sorted by
    (sigma, a, b, c, d). Reduce tau first for the tightest bounds.

    :type tau: UpperHalfPoint
    :type budget: EnumerationBudget
    :rtype: list of GroupElement
    """
    return enumerate_displacements(tau, budget).elements


def fixes_cusp(g, scaling):
    "True if g fixes the cusp scaling(infinity)"
    conj = scaling.inverse() * g * scaling
    return conj.c == 0


def is_counted(g, group):
    """
    True if g lies outside the identity/center, every cusp stabilizer and
    (when the group has elliptic points) every elliptic stabilizer
    """
    if g.is_central():
        return False
    if group.elliptic_orders and g.is_elliptic():
        return False
    return not any(fixes_cusp(g, s) for s in group.cusp_scalings)


def counted_distances(enum, group):
    "Distances of the counted elements of an enumeration, ascending"
    mask = np.array([is_counted(g, group) for g in enum.elements], dtype=bool)
    return sigma_to_distance(enum.sigmas[mask])


def counting_function(tau, rho, group, entry_cap=DEFAULT_ENTRY_CAP):
    """
    The counting function N(tau; rho): number of counted group elements
    moving tau by hyperbolic distance at most rho

    :type tau: UpperHalfPoint
    :param rho: distance, nonnegative
    :type group: GroupData
    :rtype: int
    """
    if rho < 0:
        raise PreconditionError('rho must be nonnegative')
    budget = EnumerationBudget(max_displacement=float(distance_to_sigma(rho)),
                               entry_cap=entry_cap)
    enum = enumerate_displacements(tau, budget)
    return int(np.sum(counted_distances(enum, group) <= rho))


def local_injectivity_radius(tau, group=None, start_radius=4.0):
    """
    Least distance dist(tau, g.tau) over counted g

    :rtype: float
    """
    if group is None:
        group = _bare_sl2z_data()
    radius = start_radius
    while True:
        enum = enumerate_displacements(
            tau, EnumerationBudget(max_displacement=radius))
        dists = counted_distances(enum, group)
        if len(dists):
            return float(dists.min())
        radius *= 2


def _bare_sl2z_data():
    "SL2(Z) cusp and elliptic data with a placeholder radius"
    return GroupData(1, (2, 3), 1.0, 2, provenance='placeholder')


def region_grid(Y, grid):
    """
    Grid over the truncated fundamental domain F_Y including its corners:
    xi spaced uniformly, eta log-spaced between the unit circle and Y

    :rtype: list of UpperHalfPoint
    """
    nxi, neta = grid
    points = []
    for xi in np.linspace(-0.5, 0.5, nxi):
        low = math.sqrt(1.0 - xi * xi)
        for s in np.linspace(0.0, 1.0, neta):
            points.append(UpperHalfPoint(xi, low * (Y / low) ** s))
    return points


@lru_cache(maxsize=16)
def injectivity_radius(Y=2.0, grid=(17, 16)):
    """
    Approximates r_Gamma for SL2(Z) from above as the minimum of the local
    radius over a grid on F_Y. For SL2(Z) the minimum arccosh(3/2) is attained
    at tau = i by the parabolic elements fixing 0; an odd xi count puts i on
    the grid.

    :rtype: float
    """
    radius = min(local_injectivity_radius(p) for p in region_grid(Y, grid))
    logger.debug('Injectivity radius over F_%g with grid %s: %r',
                 Y, grid, radius)
    return radius


@lru_cache(maxsize=16)
def sl2z_group_data(Y=2.0, grid=(17, 16)):
    """
    GroupData for SL2(Z): one cusp with identity scaling, elliptic points of
    orders 2 and 3, center {+1, -1}, numerically computed r_Gamma

    :rtype: GroupData
    """
    r = injectivity_radius(Y, tuple(grid))
    provenance = 'min over {}x{} grid on F_{:g}'.format(grid[0], grid[1], Y)
    return GroupData(1, (2, 3), r, 2, provenance=provenance)


def stabilizer_order(enum):
    "Number of elements of an enumeration fixing its base point"
    return int(np.sum(enum.sigmas - 1.0 <= STABILIZER_TOL))


def orbit_tail_majorant(k, enum):
    """
    Upper bound for the sum of sigma(tau, g.tau)^(-k/2) over all g in SL2(Z)
    outside the enumeration.

    Orbit points are separated by the least nonzero displacement distance s,
    so disjoint balls of radius eps = s/2 give the count majorant
    U(rho) = |stab| sinh^2((rho + eps)/2) / sinh^2(eps/2). Summation by
    parts against f(rho) = cosh^-k(rho/2) bounds the tail beyond
    delta = dist(R) by f(delta)(U(delta) - N(delta)) + int f dU.

    :param k: weight, above 2
    :type enum: Enumeration
    :rtype: float
    """
    moving = enum.sigmas[enum.sigmas - 1.0 > STABILIZER_TOL]
    if not len(moving):
        raise TruncationError('Enumeration radius {} is below the orbit '
                              'separation'.format(enum.radius),
                              radius=enum.radius)
    eps = 0.5 * float(sigma_to_distance(moving.min()))
    stab = stabilizer_order(enum)
    delta = float(sigma_to_distance(enum.radius))
    scale = stab / math.sinh(0.5 * eps) ** 2

    majorant = scale * math.sinh(0.5 * (delta + eps)) ** 2
    excess = majorant - len(enum)
    if excess < 0:
        logger.warning('Orbit count majorant %g undercut by %d enumerated '
                       'elements', majorant, len(enum))
        excess = 0.0
    f_delta = float(sech_power(0.5 * delta, k))
    tail = f_delta * excess + 0.5 * scale * sinh_shift_integral(k, delta, eps)
    return tail


def counted_kernel_sum(k, tau, group, radius):
    """
    Sum of cosh^-k(dist/2) over counted elements with displacement at most
    radius, in enumeration order

    :rtype: float
    """
    enum = enumerate_displacements(tau,
                                   EnumerationBudget(max_displacement=radius))
    dists = counted_distances(enum, group)
    return compensated_sum(sech_power(0.5 * dists, k))


def jl_rhs(k, delta, r_gamma, center_order, tau, group):
    """
    Right-hand side of the counting inequality for f(rho) = cosh^-k(rho/2):
    the finite sum over counted elements with distance at most delta, the
    boundary term and the tail integral.

    :param k: weight, k >= 5
    :param delta: cut distance, at least r_gamma/2
    :param r_gamma: injectivity radius
    :param center_order: |Cent(Gamma)|
    :type tau: UpperHalfPoint
    :type group: GroupData
    :rtype: float
    """
    if k < 5:
        raise PreconditionError('Weight must be at least 5')
    if delta < r_gamma / 2.0:
        raise PreconditionError('delta = {} is below r/2 = {}'
                                .format(delta, r_gamma / 2.0))

    budget = EnumerationBudget(max_displacement=float(distance_to_sigma(delta)))
    dists = counted_distances(enumerate_displacements(tau, budget), group)
    stieltjes = compensated_sum(sech_power(0.5 * dists[dists <= delta], k))

    q = r_gamma / 4.0
    f_delta = float(sech_power(0.5 * delta, k))
    boundary = (2.0 * center_order * math.cosh(q) / math.sinh(q) *
                math.sinh(delta) * f_delta)
    tail = (center_order / (2.0 * math.sinh(q) ** 2) *
            sinh_shift_integral(k, delta, r_gamma / 2.0))
    return stieltjes + boundary + tail


def counting_inequality_check(k, tau, delta, group, tail_fraction=1e-6,
                              max_radius=1024.0):
    """
    Compares an upper bound for the left-hand side of the counting
    inequality (truncated sum plus orbit tail majorant) with jl_rhs

    :returns: (lhs, rhs, margin)
    """
    rhs = jl_rhs(k, delta, group.injectivity_radius, group.center_order,
                 tau, group)
    radius = 4.0
    while True:
        enum = enumerate_displacements(
            tau, EnumerationBudget(max_displacement=radius))
        tail = orbit_tail_majorant(k, enum)
        if tail <= tail_fraction * rhs or radius >= max_radius:
            break
        radius *= 2
    dists = counted_distances(enum, group)
    lhs = compensated_sum(sech_power(0.5 * dists, k)) + tail
    return lhs, rhs, rhs - lhs


def is_member_gamma0(g, N):
    "Membership in Gamma_0(N): c = 0 mod N"
    if N < 1:
        raise PreconditionError('Level must be positive')
    return g.c % N == 0


def is_member_gamma01(g, N):
    "Membership in Gamma_{0,1}(N): c = 0 and d = 1 mod N"
    if N < 1:
        raise PreconditionError('Level must be positive')
    return g.c % N == 0 and (g.d - 1) % N == 0


def prime_factors(n):
    "Distinct prime divisors of n, ascending"
    factors = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            factors.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        factors.append(n)
    return factors


def euler_phi(n):
    "Euler's totient"
    if n < 1:
        raise PreconditionError('Totient needs a positive integer')
    result = n
    for p in prime_factors(n):
        result = result // p * (p - 1)
    return result


def index_gamma0(N):
    "[SL2(Z) : Gamma_0(N)] = N * prod over p | N of (1 + 1/p)"
    if N < 1:
        raise PreconditionError('Level must be positive')
    result = N
    for p in prime_factors(N):
        result = result // p * (p + 1)
    return result


def index_gamma01(m):
    """
    [SL2(Z) : Gamma_{0,1}(4m)] = [SL2(Z) : Gamma_0(4m)] * phi(4m)

    :param m: Jacobi index, m >= 1
    :rtype: int
    """
    if m < 1:
        raise PreconditionError('Index m must be at least 1')
    return index_gamma0(4 * m) * euler_phi(4 * m)


def index_gamma01_phi_m(m):
    "The variant [SL2(Z) : Gamma_0(4m)] * phi(m), reported for comparison"
    if m < 1:
        raise PreconditionError('Index m must be at least 1')
    return index_gamma0(4 * m) * euler_phi(m)


def _orbit_size(start, moves):
    "Size of the orbit of start under the maps in moves (breadth first)"
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for move in moves:
            nxt = move(state)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen)


def coset_count_bruteforce(m, subgroup='gamma01'):
    """
    Counts cosets of a congruence subgroup image in SL2(Z/4mZ) by orbit
    enumeration: Gamma_{0,1}(N) is the stabilizer of the row vector (0, 1),
    Gamma_0(N) the stabilizer of the line through it, and the full group
    the stabilizer of a point with trivial action. S and T generate.

    :param m: index, with 4m <= 64
    :param subgroup: 'gamma01', 'gamma0' or 'full'
    :rtype: int
    """
    N = 4 * m
    if m < 1:
        raise PreconditionError('Index m must be at least 1')
    if N > 64:
        raise PreconditionError('Modulus {} too large for brute force'
                                .format(N))

    def act_T(v):
        return (v[0] % N, (v[0] + v[1]) % N)

    def act_S(v):
        return (v[1] % N, (-v[0]) % N)

    if subgroup == 'gamma01':
        return _orbit_size((0, 1), [act_T, act_S])
    elif subgroup == 'gamma0':
        units = [u for u in range(1, N) if math.gcd(u, N) == 1]

        def line(v):
            return min(((u * v[0]) % N, (u * v[1]) % N) for u in units)

        moves = [lambda v: line(act_T(v)), lambda v: line(act_S(v))]
        return _orbit_size(line((0, 1)), moves)
    elif subgroup == 'full':
        return _orbit_size(None, [lambda v: v])
    else:
        raise PreconditionError('Unknown subgroup: {}'.format(subgroup))
