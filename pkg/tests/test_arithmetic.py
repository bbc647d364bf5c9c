import math
import itertools

import numpy as np
import pytest

from pysupnorm.exceptions import PreconditionError, TruncationError
from pysupnorm.hyperbolic import UpperHalfPoint, GroupElement, displacement
from pysupnorm.hyperbolic import mobius_apply
from pysupnorm.arithmetic import GroupData, EnumerationBudget
from pysupnorm.arithmetic import enumerate_displacements, enumerate_elements
from pysupnorm.arithmetic import entries_for_radius, radius_for_entries
from pysupnorm.arithmetic import stabilizer_order, orbit_tail_majorant
from pysupnorm.arithmetic import counting_function, is_counted
from pysupnorm.arithmetic import local_injectivity_radius, sl2z_group_data
from pysupnorm.arithmetic import counting_inequality_check, jl_rhs
from pysupnorm.arithmetic import counted_kernel_sum
from pysupnorm.arithmetic import is_member_gamma0, is_member_gamma01
from pysupnorm.arithmetic import prime_factors, euler_phi, index_gamma0
from pysupnorm.arithmetic import index_gamma01, index_gamma01_phi_m
from pysupnorm.arithmetic import coset_count_bruteforce
from pysupnorm.numerics.mathfuncs import sech_power
from pysupnorm.rand import generator, random_domain_points

I = UpperHalfPoint(0.0, 1.0)
RHO = UpperHalfPoint(-0.5, math.sqrt(0.75))
# Least displacement at i of the parabolic elements fixing 0
R_SL2Z = math.acosh(1.5)


def test_groupdata_validation():
    with pytest.raises(PreconditionError):
        GroupData(-1, (2, 3), 1.0)
    with pytest.raises(PreconditionError):
        GroupData(1, (2, 3), 0.0)
    with pytest.raises(PreconditionError):
        GroupData(1, (2, 3), 1.0, center_order=3)
    with pytest.raises(PreconditionError):
        GroupData(1, (1,), 1.0)
    with pytest.raises(PreconditionError):
        GroupData(2, (), 1.0, cusp_scalings=[GroupElement.identity()])

    g = GroupData(1, (2, 3), 1.0)
    assert g.cusp_scalings == (GroupElement.identity(),)
    assert g.as_dict()['elliptic_orders'] == [2, 3]


def test_budget_validation():
    with pytest.raises(PreconditionError):
        EnumerationBudget()
    with pytest.raises(PreconditionError):
        EnumerationBudget(max_displacement=2.0, max_entry=3)
    with pytest.raises(PreconditionError):
        EnumerationBudget(max_displacement=0.5)


def _bruteforce(tau, radius):
    bound = entries_for_radius(tau, radius)
    found = set()
    rng = range(-bound, bound + 1)
    for a, b, c in itertools.product(rng, rng, rng):
        if a == 0:
            # b c = -1
            if b * c != -1:
                continue
            ds = rng
        elif (1 + b * c) % a:
            continue
        else:
            ds = [(1 + b * c) // a]
        for d in ds:
            if a * d - b * c != 1 or abs(d) > bound:
                continue
            g = GroupElement(a, b, c, d)
            if displacement(tau, mobius_apply(g, tau)) <= radius:
                found.add(g)
    return found


def test_enumeration_complete():
    tau = UpperHalfPoint(0.1, 1.3)
    radius = 3.0
    enum = enumerate_displacements(tau,
                                   EnumerationBudget(max_displacement=radius))
    assert set(enum.elements) == _bruteforce(tau, radius)
    assert len(set(enum.elements)) == len(enum)
    assert (np.diff(enum.sigmas) >= 0).all()

    for g, sigma in enum:
        assert math.isclose(sigma, displacement(tau, mobius_apply(g, tau)),
                            rel_tol=1e-9)


def test_enumeration_by_entries():
    elements = enumerate_elements(I, EnumerationBudget(max_entry=3))
    assert math.isclose(radius_for_entries(I, 3), (1.5 ** 2 + 2) / 4)
    # Only the stabilizer {+-1, +-S} lies within displacement 1.0625
    assert sorted(elements) == sorted([GroupElement.identity(),
                                       -GroupElement.identity(),
                                       GroupElement.S(), -GroupElement.S()])


def test_enumeration_entry_cap():
    budget = EnumerationBudget(max_displacement=100.0, entry_cap=4)
    with pytest.raises(TruncationError) as info:
        enumerate_displacements(I, budget)
    assert info.value.radius < 100.0


def test_stabilizers():
    budget = EnumerationBudget(max_displacement=2.0)
    assert stabilizer_order(enumerate_displacements(I, budget)) == 4
    assert stabilizer_order(enumerate_displacements(RHO, budget)) == 6
    assert stabilizer_order(enumerate_displacements(
        UpperHalfPoint(0.0, 2.0), budget)) == 2


def test_orbit_tail_majorant():
    k = 12
    for tau in (I, UpperHalfPoint(0.3, 1.1), UpperHalfPoint(0.0, 2.5)):
        small = enumerate_displacements(
            tau, EnumerationBudget(max_displacement=4.0))
        big = enumerate_displacements(
            tau, EnumerationBudget(max_displacement=64.0))
        beyond = big.sigmas[big.sigmas > small.radius]
        actual = math.fsum(beyond ** (-0.5 * k))
        assert actual <= orbit_tail_majorant(k, small)


def test_counting_function():
    group = sl2z_group_data()
    assert counting_function(I, 0.9, group) == 0
    # (1, 0, +-1, 1) and their negatives
    assert counting_function(I, 1.0, group) == 4
    assert counting_function(UpperHalfPoint(0.0, 2.0), 0.5, group) == 0
    with pytest.raises(PreconditionError):
        counting_function(I, -1.0, group)

    # Nondecreasing in rho
    counts = [counting_function(UpperHalfPoint(0.2, 1.4), rho, group)
              for rho in (0.5, 1.0, 2.0, 3.0, 4.0)]
    assert counts == sorted(counts)


def test_is_counted():
    group = sl2z_group_data()
    assert not is_counted(GroupElement.identity(), group)
    assert not is_counted(-GroupElement.identity(), group)
    assert not is_counted(GroupElement.T(5), group)
    assert not is_counted(GroupElement.S(), group)
    assert is_counted(GroupElement(1, 0, 1, 1), group)
    assert is_counted(GroupElement(2, 1, 1, 1), group)


def test_injectivity_radius():
    assert math.isclose(local_injectivity_radius(I), R_SL2Z, rel_tol=1e-12)
    # At the corner the nearest counted points are 4/3 away in displacement
    assert math.isclose(local_injectivity_radius(RHO), math.log(3.0),
                        rel_tol=1e-12)

    group = sl2z_group_data()
    assert math.isclose(group.injectivity_radius, R_SL2Z, rel_tol=1e-9)
    assert group.num_cusps == 1
    assert group.elliptic_orders == (2, 3)
    assert group.center_order == 2
    assert '17x16' in group.provenance
    assert sl2z_group_data() is group


def test_counting_inequality():
    group = sl2z_group_data()
    r = group.injectivity_radius
    cases = [(5, I, r / 2.0), (12, RHO, 1.5),
             (12, UpperHalfPoint(0.3, 1.8), 3.0), (20, RHO, r / 2.0)]
    taus = random_domain_points(24, generator(3), Y=3.0)
    grid = itertools.product((5, 8, 12, 20), (r / 2.0, r, 2.0 * r))
    for i, (k, delta) in enumerate(grid):
        cases.append((k, taus[2 * i], delta))
        cases.append((k, taus[2 * i + 1], delta))
    assert len(cases) >= 28
    for k, tau, delta in cases:
        lhs, rhs, margin = counting_inequality_check(k, tau, delta, group)
        assert margin >= -1e-10
        assert margin == rhs - lhs


def test_counting_inequality_preconditions():
    group = sl2z_group_data()
    r = group.injectivity_radius
    with pytest.raises(PreconditionError):
        jl_rhs(12, 0.9 * r / 2.0, r, 2, I, group)
    with pytest.raises(PreconditionError):
        jl_rhs(4, r, r, 2, I, group)


def test_counted_kernel_sum():
    group = sl2z_group_data()
    # Within displacement 1.25 at i only the four elements fixing 0 count
    value = counted_kernel_sum(12, I, group, 1.25 + 1e-9)
    assert math.isclose(value, 4 * float(sech_power(0.5 * R_SL2Z, 12)))
    assert counted_kernel_sum(12, I, group, 1.2) == 0.0


def test_membership():
    assert is_member_gamma0(GroupElement(1, 0, 4, 1), 4)
    assert is_member_gamma01(GroupElement(1, 0, 4, 1), 4)
    assert is_member_gamma0(GroupElement(-1, 0, 4, -1), 4)
    assert not is_member_gamma01(GroupElement(-1, 0, 4, -1), 4)
    assert not is_member_gamma0(GroupElement.S(), 2)
    with pytest.raises(PreconditionError):
        is_member_gamma0(GroupElement.S(), 0)


def test_totient_and_factors():
    assert prime_factors(360) == [2, 3, 5]
    assert prime_factors(1) == []
    assert prime_factors(97) == [97]
    assert [euler_phi(n) for n in (1, 4, 9, 12, 97)] == [1, 2, 6, 4, 96]
    with pytest.raises(PreconditionError):
        euler_phi(0)


def test_indices():
    assert index_gamma0(1) == 1
    assert index_gamma0(4) == 6
    assert index_gamma0(12) == 24
    assert index_gamma01(1) == 12
    assert index_gamma01_phi_m(1) == 6
    with pytest.raises(PreconditionError):
        index_gamma01(0)


def test_indices_bruteforce():
    for m in range(1, 9):
        assert coset_count_bruteforce(m) == index_gamma01(m)
        assert coset_count_bruteforce(m, 'gamma0') == index_gamma0(4 * m)
    assert coset_count_bruteforce(3, 'full') == 1
    with pytest.raises(PreconditionError):
        coset_count_bruteforce(17)
    with pytest.raises(PreconditionError):
        coset_count_bruteforce(2, 'gamma1')
