import math
from fractions import Fraction

import numpy as np
import pytest
import mpmath

from pysupnorm.exceptions import PreconditionError, TruncationError
from pysupnorm.exceptions import InconsistencyError, ConstructionError
from pysupnorm.hyperbolic import UpperHalfPoint
from pysupnorm.numerics import PeterssonQuadrature, JacobiQuadrature
from pysupnorm.numerics import SearchConfig
from pysupnorm.qseries import QSeries
from pysupnorm.thetajacobi import JacobiPoint, theta_window, theta_array
from pysupnorm.thetajacobi import theta_eval, theta_pet_norm, theta_norm_sum
from pysupnorm.thetajacobi import theta_sum_bound_check
from pysupnorm.thetajacobi import ThetaComponentVector, JacobiFormCoeffs
from pysupnorm.thetajacobi import assemble_array, assemble_jacobi
from pysupnorm.thetajacobi import residue_representative, extract_h_mu
from pysupnorm.thetajacobi import theta_odd_square_terms, phi_10_1
from pysupnorm.thetajacobi import validate_jacobi_form, jacobi_pet_norm
from pysupnorm.thetajacobi import jacobi_inner_4d, jacobi_inner_theta
from pysupnorm.thetajacobi import normalize_jacobi, jacobi_coordinates
from pysupnorm.thetajacobi import canonical_cell_point
from pysupnorm.thetajacobi import jacobi_supnorm_search
from pysupnorm.thetajacobi import cauchy_schwarz_chain_check


def small_quad():
    rule = PeterssonQuadrature(Y_max=4.0, grid=(32, 32), tol=1e-2)
    return JacobiQuadrature(rule, z_grid=(24, 24))


def direct_theta(mu, m, tau, z, span=60):
    total = 0j
    for r in range(-span, span + 1):
        if (r + mu) % (2 * m):
            continue
        total += np.exp(2j * math.pi * (tau * r * r / (4.0 * m) + z * r))
    return total


def test_jacobipoint():
    p = JacobiPoint(0.2 + 1.5j, 0.3 + 0.4j)
    assert isinstance(p.tau, UpperHalfPoint)
    assert p.x == 0.3 and p.y == 0.4
    assert p == JacobiPoint(UpperHalfPoint(0.2, 1.5), 0.3 + 0.4j)
    assert len({p, JacobiPoint(0.2 + 1.5j, 0.3 + 0.4j)}) == 1
    q = JacobiPoint.parse('0.2+1.5i', '0.3+0.4i')
    assert q == p

    with pytest.raises(PreconditionError):
        JacobiPoint(0.2 - 1.0j, 0)


def test_theta_window():
    W, tail = theta_window(1, np.array([0.5, 1.0, 4.0]))
    assert W >= 1
    assert np.all(tail <= 1e-15)
    assert tail[2] < tail[0]

    with pytest.raises(PreconditionError):
        theta_window(1, np.array([1.0]), tol=0)
    with pytest.raises(TruncationError):
        theta_window(1, np.array([1e-12]))


def test_theta_against_jtheta():
    mpmath.mp.dps = 25
    for tau, z in [(0.1 + 0.9j, 0.3 + 0.2j), (-0.3 + 1.4j, -0.1 + 0.5j)]:
        nome = mpmath.exp(2j * mpmath.pi * tau)
        w = 2 * mpmath.pi * z
        expected = [complex(mpmath.jtheta(3, w, nome)),
                    complex(mpmath.jtheta(2, w, nome))]
        for mu in (0, 1):
            value = complex(theta_array(mu, 1, tau, z))
            assert value == pytest.approx(expected[mu], rel=1e-12)


def test_theta_direct_sum():
    tau = np.array([0.1 + 0.9j, 0.45 + 1.2j, -0.2 + 2.5j])
    z = np.array([0.3 + 0.2j, -0.7 + 1.1j, 0.05 - 0.4j])
    for m in (1, 2, 3):
        for mu in range(2 * m):
            values = theta_array(mu, m, tau, z)
            for t, w, value in zip(tau, z, values):
                assert value == pytest.approx(direct_theta(mu, m, t, w),
                                              rel=1e-11)


def test_theta_shapes_and_damping():
    tau = np.full((3, 4), 0.1 + 1.2j)
    z = np.linspace(0, 1, 4) + 0.3j
    values = theta_array(1, 2, tau, z)
    assert values.shape == (3, 4)

    damped = theta_array(1, 2, tau, z, damped=True)
    factor = np.exp(-2 * math.pi * 2 * 0.09 / 1.2)
    assert np.allclose(damped, values * factor, rtol=1e-12)

    with pytest.raises(PreconditionError):
        theta_array(4, 2, tau, z)
    with pytest.raises(PreconditionError):
        theta_array(0, 0, tau, z)


def test_theta_symmetries():
    tau, z = 0.15 + 1.1j, 0.2 + 0.35j
    m = 3
    for mu in range(2 * m):
        plus = complex(theta_array(mu, m, tau, z))
        reflected = complex(theta_array((-mu) % (2 * m), m, tau, -z))
        assert plus == pytest.approx(reflected, rel=1e-12)
        shifted = complex(theta_array(mu, m, tau, z + 1))
        assert plus == pytest.approx(shifted, rel=1e-12)


def test_theta_eval():
    p = JacobiPoint(0.1 + 1.0j, 0.3 + 0.2j)
    result = theta_eval(1, 2, p)
    assert result.value == pytest.approx(direct_theta(1, 2, 0.1 + 1.0j,
                                                      0.3 + 0.2j), rel=1e-12)
    assert 0 <= result.tail < 1e-12

    norm = theta_pet_norm(1, 2, p)
    expected = (abs(result.value) ** 2 * math.exp(-4 * math.pi * 2 * 0.04)
                * 1.0)
    assert norm == pytest.approx(expected, rel=1e-10)


def test_theta_norm_sum_lattice_invariance():
    tau = 0.3 + 1.3j
    z = 0.2 + 0.5j
    for m in (1, 2, 4):
        base = theta_norm_sum(m, tau, z)
        for lam, mu in [(1, 0), (-1, 1), (2, -3)]:
            moved = theta_norm_sum(m, tau, z + lam * tau + mu)
            assert moved == pytest.approx(base, rel=1e-9)


def test_theta_norm_sum_limit():
    # only theta_0 survives high in the cusp with z = 0
    for m in (1, 3):
        total = theta_norm_sum(m, 25j, 0.0)
        assert total / math.sqrt(25) == pytest.approx(1.0, rel=1e-12)


def test_theta_sum_bound():
    rng = np.random.RandomState(7)
    for m in (1, 2, 5, 8):
        for _ in range(20):
            eta = math.sqrt(3) / 2 + 3 * rng.uniform()
            tau = complex(rng.uniform(-0.5, 0.5), eta)
            z = complex(rng.uniform(), rng.uniform() * eta)
            lhs, rhs, margin = theta_sum_bound_check(m, JacobiPoint(tau, z))
            assert lhs > 0
            assert margin >= 0


def test_component_vector():
    h0 = QSeries({4: 1, 8: 2}, 4, 3, Fraction(19, 2))
    h1 = QSeries({3: 1}, 4, 3, Fraction(19, 2))
    hvec = ThetaComponentVector(1, [h0, h1])
    assert len(hvec) == 2
    assert hvec[1] is h1
    assert hvec.weight == Fraction(19, 2)
    assert not hvec.is_zero()

    values = hvec.evaluate(np.array([1j, 2j]))
    assert values.shape == (2, 2)
    assert values[1, 0] == pytest.approx(math.exp(-2 * math.pi * 0.75))

    doubled = hvec * 2
    assert doubled[0][8] == 4

    norms = hvec.norm_sum(np.array([1j]))
    expected = (values[0, 0] ** 2 + values[1, 0] ** 2).real
    assert norms[0] == pytest.approx(expected)

    with pytest.raises(PreconditionError):
        ThetaComponentVector(2, [h0, h1])
    with pytest.raises(PreconditionError):
        ThetaComponentVector(1, [h0, QSeries({0: 1}, 4, 3)])


def test_residue_representative():
    assert residue_representative(0, 1) == 0
    assert residue_representative(1, 1) == 1
    assert residue_representative(1, 2) == -1
    assert residue_representative(2, 2) == 2
    assert residue_representative(3, 2) == 1
    for m in range(1, 6):
        for mu in range(2 * m):
            r = residue_representative(mu, m)
            assert (r + mu) % (2 * m) == 0
            assert -m < r <= m


def test_jacobi_coeffs():
    with pytest.raises(PreconditionError):
        JacobiFormCoeffs(10, 1, 5, {(1, 2): 1})
    with pytest.raises(PreconditionError):
        JacobiFormCoeffs(10, 0, 5, {})

    phi = JacobiFormCoeffs(10, 1, 2, {(1, 1): 1, (1, 0): 0, (3, 0): 5})
    assert len(phi) == 1
    assert phi[(1, 0)] == 0
    assert phi.keys() == [(1, 1)]
    assert not phi.is_zero()

    scaled = phi * 3
    assert scaled[(1, 1)] == 3
    with pytest.raises(PreconditionError):
        phi ** 0


def test_theta_odd_square_terms():
    assert theta_odd_square_terms(1) == {(6, 1): 1, (6, -1): 1, (6, 0): -2}
    terms = theta_odd_square_terms(3)
    assert terms[(30, 2)] == -2
    assert terms[(30, 1)] == 2
    assert all(e24 <= 72 for e24, _ in terms)


def test_phi_10_1():
    phi = phi_10_1()
    assert phi.weight == 10 and phi.index == 1 and phi.trunc_n == 16
    assert phi.keys()[0] == (1, -1)
    expected = {(1, -1): 1, (1, 0): -2, (1, 1): 1,
                (2, -2): -2, (2, -1): -16, (2, 0): 36, (2, 1): -16,
                (2, 2): -2}
    for key, value in expected.items():
        assert phi[key] == value
    assert phi.discriminant_defect() == 0

    with pytest.raises(PreconditionError):
        phi_10_1(trunc=2)


def test_theta_components_of_phi_10_1():
    hvec = phi_10_1().theta_components()
    assert hvec.m == 1
    assert hvec.weight == Fraction(19, 2)
    assert hvec[0][4] == -2
    assert hvec[0][8] == 36
    assert hvec[1][3] == 1
    assert hvec[1][7] == -16
    assert hvec[0].valuation() == 1
    assert hvec[1].valuation() == Fraction(3, 4)


def test_extract_inconsistent():
    phi = JacobiFormCoeffs(10, 1, 5, {(1, 1): 1, (1, -1): 2})
    assert phi.discriminant_defect() == 1
    with pytest.raises(InconsistencyError):
        extract_h_mu(phi)


def test_assemble_matches_direct_sum():
    phi = phi_10_1()
    hvec = phi.theta_components()
    tau = np.array([0.1 + 1.1j, -0.4 + 0.9j, 0.2 + 1.8j])
    z = np.array([0.3 + 0.2j, 0.6 + 0.1j, -0.2 + 0.9j])
    direct = phi.evaluate(tau, z)
    assembled = assemble_array(hvec, tau, z, damped=False)
    assert np.allclose(assembled, direct, rtol=1e-10, atol=0)

    p = JacobiPoint(tau[0], z[0])
    assert assemble_jacobi(hvec, p) == pytest.approx(direct[0], rel=1e-10)


def test_powers_are_jacobi_forms():
    phi = phi_10_1(trunc=8)
    square = phi ** 2
    assert square.weight == 20 and square.index == 2
    assert square.trunc_n == 8
    assert square.discriminant_defect() == 0
    assert square[(2, -2)] == 1
    validate_jacobi_form(square)


def test_validate_rejects_non_forms():
    bogus = JacobiFormCoeffs(10, 1, 16, {(1, 0): 1})
    with pytest.raises(ConstructionError):
        validate_jacobi_form(bogus)


def test_pointwise_norm():
    phi = phi_10_1()
    hvec = phi.theta_components()
    tau, z = 0.12 + 1.05j, 0.33 + 0.41j
    p = JacobiPoint(tau, z)
    norm = jacobi_pet_norm(hvec, 10, 1, p)
    assert norm > 0
    assert jacobi_pet_norm(phi, 10, 1, p) == norm

    direct = jacobi_pet_norm(lambda t, w: complex(phi.evaluate(t, w)),
                             10, 1, p)
    assert direct == pytest.approx(norm, rel=1e-9)

    moved = JacobiPoint(-1 / tau, z / tau)
    assert jacobi_pet_norm(hvec, 10, 1, moved) == pytest.approx(norm,
                                                                rel=1e-8)
    lattice = JacobiPoint(tau + 1, z + 2 * tau - 1)
    assert jacobi_pet_norm(hvec, 10, 1, lattice) == pytest.approx(norm,
                                                                  rel=1e-8)

    with pytest.raises(PreconditionError):
        jacobi_pet_norm(hvec, 10, 2, p)


def test_inner_product_routes_agree():
    quad = small_quad()
    phi = phi_10_1()
    hvec = phi.theta_components()
    theta_value, theta_err = jacobi_inner_theta(hvec, hvec, 10, 1, quad)
    direct_value, direct_err = jacobi_inner_4d(phi, phi, 10, 1, quad)
    assert theta_value.real > 0
    assert abs(theta_value.imag) < 1e-12 * theta_value.real
    assert direct_value.real == pytest.approx(theta_value.real, rel=1e-5)


def test_direct_route_sums_fourier_coefficients():
    phi = phi_10_1()
    hvec = phi.theta_components()
    tau = np.array([[0.1 + 1.0j], [-0.3 + 2.5j]])
    z = np.array([[0.2 + 0.1j, 0.7 + 0.9j], [0.5 + 2.0j, 0.9 + 0.3j]])
    np.testing.assert_allclose(phi.evaluate(tau, z, damped=True),
                               assemble_array(hvec, tau, z),
                               rtol=1e-10, atol=1e-14)

    # a wrong component vector no longer agrees with the form itself
    quad = small_quad()
    wrong = ThetaComponentVector(1, [hvec[0], hvec[1] * 2])
    direct, _ = jacobi_inner_4d(phi, phi, 10, 1, quad)
    bad, _ = jacobi_inner_theta(wrong, wrong, 10, 1, quad)
    assert bad.real > 1.1 * direct.real
    mixed, _ = jacobi_inner_4d(phi, wrong, 10, 1, quad)
    assert mixed.real > 1.05 * direct.real


def test_inner_product_preconditions():
    quad = small_quad()
    h1 = phi_10_1(trunc=6).theta_components()
    h2 = (phi_10_1(trunc=6) ** 2).theta_components()
    with pytest.raises(PreconditionError):
        jacobi_inner_theta(h1, h2, 10, 1, quad)

    zero = h1 * 0
    assert jacobi_inner_theta(zero, h1, 10, 1, quad) == (0j, 0.0)


def test_normalize_jacobi():
    quad = small_quad()
    hvec = normalize_jacobi(phi_10_1().theta_components(), 10, 1, quad)
    value, _ = jacobi_inner_theta(hvec, hvec, 10, 1, quad)
    assert value.real == pytest.approx(1.0, rel=1e-12)

    with pytest.raises(PreconditionError):
        normalize_jacobi(hvec * 0, 10, 1, quad)


def test_jacobi_coordinates():
    points = np.array([[0.0, 0.0, 0.25, 0.5], [0.3, 1.0, 0.9, 0.1]])
    tau, z = jacobi_coordinates(points, 3.0)
    assert tau[0] == pytest.approx(1j)
    assert tau[1].imag == pytest.approx(3.0)
    assert z[0] == pytest.approx(0.25 + 0.5j)
    assert z[1].imag == pytest.approx(0.1 * tau[1].imag)


def test_canonical_cell_point():
    tau = 0.1 + 1.0j
    p = canonical_cell_point(tau, 0.3 + 0.8j)
    assert p.z.real == pytest.approx(0.8)
    assert p.z.imag == pytest.approx(0.2)

    q = canonical_cell_point(tau, 1.3 + 0.2j)
    assert q.z == pytest.approx(0.3 + 0.2j)

    hvec = phi_10_1().theta_components()
    before = jacobi_pet_norm(hvec, 10, 1, JacobiPoint(tau, 0.3 + 0.8j))
    assert jacobi_pet_norm(hvec, 10, 1, p) == pytest.approx(before,
                                                            rel=1e-10)


def test_jacobi_supnorm_search():
    hvec = phi_10_1().theta_components()
    policy = SearchConfig(grid=(6, 6, 6, 6), restarts=1, max_evals=2000)
    sup, point = jacobi_supnorm_search(hvec, 10, 1, policy)
    assert sup > 0
    assert point.y <= point.tau.eta / 2 + 1e-12
    assert 0 <= point.x < 1
    assert jacobi_pet_norm(hvec, 10, 1, point) == pytest.approx(sup,
                                                                rel=1e-8)

    with pytest.raises(PreconditionError):
        jacobi_supnorm_search(hvec, 10, 2, policy)


def test_cauchy_schwarz_chain():
    rng = np.random.RandomState(3)
    for phi in (phi_10_1(trunc=8), phi_10_1(trunc=8) ** 3):
        hvec = phi.theta_components()
        k, m = phi.weight, phi.index
        for _ in range(10):
            eta = math.sqrt(3) / 2 + rng.uniform()
            tau = complex(rng.uniform(-0.5, 0.5), eta)
            z = complex(rng.uniform(), rng.uniform() * eta)
            lhs, rhs, margin = cauchy_schwarz_chain_check(
                hvec, k, m, JacobiPoint(tau, z))
            assert margin >= -1e-12 * rhs


def test_theta_shift_identity():
    rng = np.random.RandomState(5)
    for m in (1, 2, 3):
        for mu in range(1, 2 * m):
            tau = complex(rng.uniform(-0.5, 0.5), 0.8 + rng.uniform())
            z = complex(rng.uniform(), rng.uniform())
            shifted = complex(theta_array(0, m, tau, z - mu * tau / (2 * m)))
            factor = np.exp(1j * math.pi * mu * mu * tau / (2 * m) -
                            2j * math.pi * mu * z)
            value = complex(theta_array(mu, m, tau, z))
            assert value == pytest.approx(shifted * factor, rel=1e-10)


def test_single_theta_gaussian_bound():
    for m in (1, 2, 5):
        for eta in (0.9, 1.5, 4.0):
            for y in np.linspace(0, eta, 7):
                p = JacobiPoint(complex(0.2, eta), complex(0.35, y))
                bound = (1 + 1 / math.sqrt(2 * m * eta)) ** 2 * math.sqrt(eta)
                for mu in range(2 * m):
                    assert theta_pet_norm(mu, m, p) <= bound


def test_extract_single_coefficient():
    hvec = extract_h_mu(JacobiFormCoeffs(10, 1, 4, {(1, 1): 1}))
    assert hvec[0].is_zero()
    assert hvec[1].coeffs == {3: 1}
    assert hvec[1].denom == 4

    zero = extract_h_mu(JacobiFormCoeffs(10, 2, 4, {}))
    assert len(zero) == 4 and zero.is_zero()


def test_inner_theta_sesquilinear():
    quad = small_quad()
    hvec = phi_10_1(trunc=8).theta_components()
    value, _ = jacobi_inner_theta(hvec, hvec, 10, 1, quad)
    doubled, _ = jacobi_inner_theta(hvec * 2, hvec * 2, 10, 1, quad)
    assert doubled.real == pytest.approx(4 * value.real, rel=1e-12)
