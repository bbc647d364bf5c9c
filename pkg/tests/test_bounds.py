import math
from functools import partial

import numpy as np
import pytest

from pysupnorm.exceptions import PreconditionError
from pysupnorm.hyperbolic import UpperHalfPoint
from pysupnorm.arithmetic import EnumerationBudget, sl2z_group_data
from pysupnorm.arithmetic import GroupData
from pysupnorm.numerics import PeterssonQuadrature, JacobiQuadrature
from pysupnorm.numerics import SearchConfig
from pysupnorm.qseries import cusp_form, normalize, supnorm_search
from pysupnorm.thetajacobi import phi_10_1, normalize_jacobi
from pysupnorm.bounds import BoundReport, BergmanConfig, BOUND_NAMES
from pysupnorm.bounds import bergman_diag_series, bergman_oracle
from pysupnorm.bounds import gamma_ratio, prop1_rhs, prop1_eqn4_check
from pysupnorm.bounds import elliptic_term, cusp_term, prop3_rhs
from pysupnorm.bounds import prop3_eqn5_check, boundary_height
from pysupnorm.bounds import prop3_report, thm4_report, cor5_report
from pysupnorm.bounds import thm6_report, auxlem_profile_height
from pysupnorm.bounds import auxlem_rhs, auxlem_constant, auxlem_report
from pysupnorm.bounds import jacobi_mass, component_sups, thm11_rhs
from pysupnorm.bounds import thm11_report, scaling_slope, THETA_CONSTANT
from pysupnorm.bounds import cusp_form_report, sweep_reports

I = UpperHalfPoint(0.0, 1.0)
# |Delta(i)|^2 / <Delta, Delta>
DELTA_BERGMAN_AT_I = 3.0787


def quick_quad():
    return PeterssonQuadrature(grid=(200, 200), tol=1e-3)


def small_jacobi_quad():
    rule = PeterssonQuadrature(Y_max=4.0, grid=(32, 32), tol=1e-2)
    return JacobiQuadrature(rule, z_grid=(24, 24))


def test_report():
    report = BoundReport('thm4', 12, 0, 1.5, 4.0, 'abc')
    assert report.margin == 2.5
    row = report.as_dict()
    assert row['margin'] == 2.5
    assert row['config_digest'] == 'abc'
    assert 'notes' not in row

    reports = [BoundReport('thm4', 16, 0, 1, 2),
               BoundReport('cor5', 20, 0, 1, 2),
               BoundReport('thm4', 12, 0, 1, 2)]
    reports.sort(key=BoundReport.sort_key)
    assert [(r.name, r.k) for r in reports] == [('cor5', 20), ('thm4', 12),
                                               ('thm4', 16)]


def test_bergman_config():
    cfg = BergmanConfig(12)
    assert cfg.budget.max_displacement == 4.0
    assert cfg.as_dict()['tail_tol'] == 1e-6

    with pytest.raises(PreconditionError):
        BergmanConfig(4)
    with pytest.raises(PreconditionError):
        BergmanConfig(12, tail_tol=0)
    with pytest.raises(PreconditionError):
        BergmanConfig(12, budget=EnumerationBudget(max_entry=5))


def test_bergman_series_at_i():
    value, tail = bergman_diag_series(I, BergmanConfig(12, tail_tol=1e-7))
    assert tail <= 1e-7
    assert value == pytest.approx(DELTA_BERGMAN_AT_I, rel=1e-4)

    # the kernel is a function on the quotient
    moved, _ = bergman_diag_series(UpperHalfPoint(3.0, 1.0),
                                   BergmanConfig(12, tail_tol=1e-7))
    assert moved == pytest.approx(value, rel=1e-9)


def test_bergman_series_vanishing_cases():
    assert bergman_diag_series(I, BergmanConfig(13)) == (0.0, 0.0)
    # no cusp forms below weight 12, so the series sums to zero
    value, tail = bergman_diag_series(UpperHalfPoint(0.2, 1.3),
                                      BergmanConfig(8, tail_tol=1e-6))
    assert abs(value) <= tail + 1e-9
    with pytest.raises(PreconditionError):
        bergman_diag_series(I, BergmanConfig(12.5))


def test_bergman_oracle():
    ratio = bergman_oracle(12, I, quick_quad())
    assert ratio == pytest.approx(DELTA_BERGMAN_AT_I, rel=1e-3)
    with pytest.raises(PreconditionError):
        bergman_oracle(24, I)


@pytest.mark.parametrize('tau', [UpperHalfPoint(0.0, 2.0),
                                 UpperHalfPoint(0.5, 1.2)])
def test_bergman_series_matches_oracle(tau):
    value, tail = bergman_diag_series(tau, BergmanConfig(12, tail_tol=1e-6))
    oracle = bergman_oracle(12, tau, quick_quad())
    assert oracle > 0
    assert abs(value - oracle) <= tail + 1e-3 * oracle


def test_gamma_ratio():
    assert gamma_ratio(3) == pytest.approx(2 / math.sqrt(math.pi))
    assert gamma_ratio(5) == pytest.approx(math.gamma(2) / math.gamma(2.5))
    assert gamma_ratio(12) == pytest.approx(math.gamma(5.5) / math.gamma(6))
    big = gamma_ratio(4000)
    assert big == pytest.approx(math.sqrt(2.0 / 4000), rel=1e-3)
    with pytest.raises(PreconditionError):
        gamma_ratio(1)


def test_prop1_rhs():
    r = math.acosh(1.5)
    q = r / 4
    expected = (11 / (2 * math.pi) + 33 / math.pi * math.cosh(q) ** -8 *
                (1 + math.sinh(q) ** -2))
    assert prop1_rhs(12, r) == pytest.approx(expected, rel=1e-12)
    assert prop1_rhs(40, r) > prop1_rhs(12, r)
    radii = [0.3, 0.6, 1.0, 2.0, 4.0]
    values = [prop1_rhs(12, s) for s in radii]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert prop1_rhs(4000, r) == pytest.approx(3999 / (2 * math.pi),
                                               rel=1e-9)

    with pytest.raises(PreconditionError):
        prop1_rhs(4, r)
    with pytest.raises(PreconditionError):
        prop1_rhs(12, 0)


def test_prop1_eqn4():
    samples = [(5, 0.5, 1.0), (12, 0.0, 0.96), (20, 0.0, 0.5),
               (12, 3.0, math.log(3.0)), (30, 1.0, 2.0)]
    for r in (sl2z_group_data().injectivity_radius, math.log(3.0)):
        for k in (5, 8, 12, 20):
            samples.extend((k, delta, r) for delta in (r / 2, r, 2 * r))
    assert len(samples) >= 20
    for k, delta, r in samples:
        lhs, rhs, margin = prop1_eqn4_check(k, delta, r)
        assert lhs > 0
        assert margin >= 0

    with pytest.raises(PreconditionError):
        prop1_eqn4_check(12, -1.0, 1.0)


def test_group_terms():
    group = sl2z_group_data()
    assert elliptic_term(12, group) == pytest.approx(33 / (4 * math.pi))

    tau = UpperHalfPoint(0.3, 2.0)
    expected = 2 * 11 / math.sqrt(math.pi) * gamma_ratio(12) * 2.0
    assert cusp_term(12, group, tau) == pytest.approx(expected)

    total = prop3_rhs(12, group, tau)
    assert total == pytest.approx(prop1_rhs(12, group.injectivity_radius) +
                                  elliptic_term(12, group) + expected)

    cocompact = GroupData(0, (), 1.0)
    assert cusp_term(12, cocompact, tau) == 0.0
    assert elliptic_term(12, cocompact) == 0.0


def test_prop3_eqn5():
    rng = np.random.RandomState(11)
    for _ in range(30):
        k = int(rng.randint(5, 41))
        t1 = UpperHalfPoint(rng.uniform(-0.5, 0.5), 0.9 + 3 * rng.uniform())
        t2 = UpperHalfPoint(rng.uniform(-0.5, 0.5), 0.9 + 3 * rng.uniform())
        lhs, rhs, margin = prop3_eqn5_check(k, t1, t2)
        assert lhs > 0
        assert margin >= 0

    # far up the cusp the translation sum approaches half the bound
    tau = UpperHalfPoint(0.0, 40.0)
    lhs, rhs, _ = prop3_eqn5_check(12, tau, tau)
    assert lhs / rhs == pytest.approx(0.5, rel=0.05)


def test_boundary_height():
    assert boundary_height(12) == pytest.approx(12 / (4 * math.pi))
    assert boundary_height(12, 3.0) == 3.0
    assert boundary_height(40, 1.0) == pytest.approx(40 / (4 * math.pi))


def test_reports():
    group = sl2z_group_data()
    report = prop3_report(12, 0.5, 1.2, group, 'd')
    assert report.name == 'prop3'
    assert report.rhs == pytest.approx(prop3_rhs(12, group,
                                                 UpperHalfPoint(0, 1.2)))

    t4 = thm4_report(12, 0.5, 0.8, group)
    height = 12 / (4 * math.pi)
    assert t4.rhs == pytest.approx(prop3_rhs(12, group,
                                             UpperHalfPoint(0, height)))
    assert t4.notes.startswith('height')

    c5 = cor5_report(12, 0.5, 0.8, group)
    assert c5.name == 'cor5'
    assert c5.rhs == t4.rhs


def test_thm6_report():
    low = thm6_report(12, 1.0, Y=2.0)
    assert low.name == 'thm6'
    assert low.notes == 'Y > k/(4 pi)'
    assert low.margin > 0

    high = thm6_report(60, 1.0, Y=2.0)
    assert high.notes == 'Y <= k/(4 pi)'

    custom = thm6_report(12, 1.0, Y=2.0, C_ell=0.0, C_par=0.0)
    group = sl2z_group_data(2.0)
    assert custom.rhs == pytest.approx(prop1_rhs(12,
                                                 group.injectivity_radius))

    with pytest.raises(PreconditionError):
        thm6_report(3, 1.0)


def test_auxlem():
    assert auxlem_profile_height(12) == 1.0
    assert auxlem_profile_height(24) == pytest.approx(24.5 / (4 * math.pi))
    assert auxlem_profile_height(24, 2) == 1.0

    group = sl2z_group_data()
    Y = auxlem_profile_height(24)
    rhs = auxlem_rhs(24, 2.0, group=group)
    assert rhs == pytest.approx(2.0 * prop3_rhs(24, group,
                                                UpperHalfPoint(0, Y)) *
                                math.sqrt(Y))
    assert auxlem_constant(24, group=group) == pytest.approx(
        rhs / 2.0 / 24 ** 2)

    report = auxlem_report(24, 0.1, 2.0, m=3, group=group)
    assert report.name == 'auxlem' and report.m == 3
    assert report.rhs == pytest.approx(rhs)


@pytest.mark.parametrize('k', [12, 20])
def test_auxlem_normalized_cusp_form(k):
    f = normalize(cusp_form(k), k, quick_quad())
    policy = SearchConfig(grid=(17, 17))
    sup, _, error = supnorm_search(f, k, policy, 0.5)
    report = auxlem_report(k, sup + error)
    assert report.lhs > 0
    assert report.margin >= 0

    doubled, _, _ = supnorm_search(f * 2, k, policy, 0.5)
    assert doubled == pytest.approx(4 * sup)


def test_jacobi_mass():
    assert jacobi_mass(1) == pytest.approx(2 * 12)
    assert jacobi_mass(2) == pytest.approx(math.sqrt(8) * 12 * 4)


def test_thm11_rhs():
    assert THETA_CONSTANT == pytest.approx(2 * math.sqrt(2) +
                                           (4 / 3) ** 0.25)
    value = thm11_rhs(4, [1.0, 2.0], [0.5, 0.5])
    assert value == pytest.approx(8 * 3.0 + THETA_CONSTANT * 2 * 1.0)


def test_thm11_report():
    quad = small_jacobi_quad()
    hvec = phi_10_1().theta_components()
    with pytest.raises(PreconditionError):
        thm11_report(hvec, 10, 1, quad)

    hvec = normalize_jacobi(hvec, 10, 1, quad)
    policy = SearchConfig(grid=(12, 12), restarts=1)
    jacobi_policy = SearchConfig(grid=(5, 5, 5, 5), restarts=1,
                                 max_evals=1000)
    with_root, plain = component_sups(hvec, policy)
    assert len(with_root) == 2
    assert all(s > 0 for s in with_root + plain)

    report = thm11_report(hvec, 10, 1, quad, policy, jacobi_policy,
                          digest='x')
    assert report.name == 'thm11' and report.m == 1
    assert report.lhs > 0
    assert report.margin > 0
    assert report.rhs == pytest.approx(thm11_rhs(1, with_root, plain))


def test_scaling_slope():
    ks = [12, 16, 20, 24]
    assert scaling_slope(ks, [k ** 1.5 for k in ks]) == pytest.approx(1.5)
    assert scaling_slope(ks, [3.0 * k for k in ks]) == pytest.approx(1.0)


def test_cusp_form_report():
    policy = SearchConfig(grid=(17, 17))
    report = cusp_form_report(12, 'cor5', quick_quad(), policy)
    assert report.name == 'cor5'
    assert report.k == 12
    assert 0 < report.lhs < report.rhs
    assert len(report.config_digest) == 16

    again = cusp_form_report(12, 'cor5', quick_quad(), policy)
    assert again.config_digest == report.config_digest
    other = cusp_form_report(12, 'thm4', quick_quad(), policy)
    assert other.config_digest != report.config_digest

    with pytest.raises(PreconditionError):
        cusp_form_report(12, 'thm9')


def test_sweep_reports():
    policy = SearchConfig(grid=(17, 17))
    func = partial(cusp_form_report, bound='prop3', quad=quick_quad(),
                   policy=policy)
    reports = sweep_reports(func, [16, 12])
    assert [r.k for r in reports] == [12, 16]
    assert all(r.margin > 0 for r in reports)
    assert set(BOUND_NAMES) == {'prop3', 'thm4', 'cor5', 'thm6'}

    with pytest.raises(ValueError):
        sweep_reports(func, [12], njobs=0)
