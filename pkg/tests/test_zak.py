import math

import numpy as np
import pytest
from pydantic import ValidationError

from ggkp.gaussian.closed_form import closed_form_parts
from ggkp.gaussian.quadrature import matrix_element_quadrature
from ggkp.gaussian.schema import GaussianState
from ggkp.theta.engine import jacobi_theta3
from ggkp.theta.schema import PeriodMatrix
from ggkp.torus.core import character, character_value
from ggkp.torus.schema import ThetaCharacteristic, TorusGeometry
from ggkp.zak.schema import GridSpec, QZTDistribution
from ggkp.zak.transform import (
    brute_force_coefficients,
    brute_force_sum,
    canonical_trace,
    lattice_uncertainty,
    qzt_assemble,
    qzt_brute_force,
    qzt_eval,
    qzt_eval_xi,
    qzt_grid,
    qzt_xi,
    squeezed_vacuum_tau,
    squeezed_vacuum_tau_forms,
)

# ϑ₃(0, i/4π)² by modular inversion, up to terms below 1e-30
VACUUM_ORIGIN = 4 * math.pi * (1 + 2 * math.exp(-4 * math.pi**2)) ** 2


def relative(value: complex, reference: complex, floor: float = 1e-4) -> float:
    return abs(value - reference) / max(abs(reference), floor)


def small_state(rng, width=(0.85, 1.2)) -> GaussianState:
    return GaussianState(
        q_center=rng.uniform(-0.3, 0.3),
        p_center=rng.uniform(-0.3, 0.3),
        sigma=rng.uniform(*width),
    )


def test_equal_widths_give_diagonal_period_matrix(square):
    probe = GaussianState(q_center=0.4, sigma=0.7)
    signal = GaussianState(p_center=-1.1, sigma=0.7)
    assert qzt_assemble(probe, signal, square).Omega.is_diagonal
    assert not qzt_assemble(probe, GaussianState(sigma=1.2), square).Omega.is_diagonal


def test_vacuum_assembly(vacuum, square):
    dist = qzt_assemble(vacuum, vacuum, square)
    assert np.all(dist.xi_offset == 0)
    expected = np.diag([1j / (4 * math.pi)] * 2)
    assert np.allclose(dist.Omega.Omega, expected, rtol=1e-14, atol=0)
    assert np.allclose(qzt_xi(dist, 0.3, -0.2), [0.2 * square.alpha0, 0.3 * square.beta0])


def test_distribution_requires_omega_from_gamma(vacuum, square):
    dist = qzt_assemble(vacuum, vacuum, square)
    with pytest.raises(ValidationError):
        QZTDistribution(
            geom=square,
            parts=dist.parts,
            char=dist.char,
            Omega=PeriodMatrix.diagonal(1j, 1j),
            xi_offset=dist.xi_offset,
        )


def test_vacuum_at_origin(vacuum, square):
    dist = qzt_assemble(vacuum, vacuum, square)
    assert dist.prefactor == pytest.approx(1.0)
    assert qzt_eval(dist, 0.0, 0.0) == pytest.approx(VACUUM_ORIGIN, rel=1e-10)
    assert VACUUM_ORIGIN == pytest.approx(12.566, abs=1e-3)


def test_periodicity_in_x_and_k(rng):
    geom = TorusGeometry(L=5.0, P=4.2, hbar=0.9)
    sigma = 0.8
    dist = qzt_assemble(GaussianState.vacuum(sigma), GaussianState.vacuum(sigma), geom)
    period_x = geom.L / (2 * math.pi * geom.hbar)
    period_k = geom.P / (2 * math.pi * geom.hbar)
    for _ in range(5):
        x, k = rng.uniform(-1, 1, 2)
        value = qzt_eval(dist, x, k)
        assert relative(qzt_eval(dist, x + period_x, k), value) < 1e-10
        assert relative(qzt_eval(dist, x, k + period_k), value) < 1e-10


def test_half_characteristic_vanishes_at_origin(vacuum, square):
    dist = qzt_assemble(vacuum, vacuum, square, ThetaCharacteristic.half())
    assert abs(qzt_eval(dist, 0.0, 0.0, tol=1e-12)) < 1e-10 * VACUUM_ORIGIN


def test_brute_force_single_term(vacuum, square):
    assert qzt_brute_force(vacuum, vacuum, square, 0.0, 0.0, 0) == pytest.approx(
        1.0, abs=1e-12
    )


def test_brute_force_sum_weights_each_character():
    geom = TorusGeometry(L=3.0, P=5.0)
    coeffs = np.zeros((5, 5), dtype=complex)
    coeffs[2 + 1, 2 - 2] = 0.5 - 0.25j
    x, k = 0.37, -0.21
    expected = (0.5 - 0.25j) * character_value(character(1, -2), geom, x, k)
    phase = np.exp(2j * np.pi * (-2 * geom.beta0 * x - geom.alpha0 * k))
    assert expected == pytest.approx((0.5 - 0.25j) * phase, abs=1e-15)
    assert brute_force_sum(coeffs, geom, x, k) == pytest.approx(expected, abs=1e-15)


def test_brute_force_truncation_converges(vacuum, square):
    coeffs = brute_force_coefficients(vacuum, vacuum, square, 14)
    inner = coeffs[4:-4, 4:-4]
    for x, k in [(0.0, 0.0), (0.3, -0.1)]:
        assert abs(
            brute_force_sum(inner, square, x, k) - brute_force_sum(coeffs, square, x, k)
        ) < 1e-10


def test_brute_force_matches_theta_path(rng):
    geom = TorusGeometry(L=rng.uniform(2.5, 4.0), P=rng.uniform(2.5, 4.0))
    probe, signal = small_state(rng), small_state(rng)
    dist = qzt_assemble(probe, signal, geom)
    coeffs = brute_force_coefficients(probe, signal, geom, 12)
    for _ in range(25):
        x = rng.uniform(0, geom.L / (2 * math.pi))
        k = rng.uniform(0, geom.P / (2 * math.pi))
        theta = qzt_eval(dist, x, k, tol=1e-13)
        assert relative(theta, brute_force_sum(coeffs, geom, x, k)) < 1e-8


def test_factorized_consistency(rng):
    geom = TorusGeometry(L=5.5, P=4.5)
    sigma = 0.9
    probe = GaussianState(q_center=0.2, p_center=-0.4, sigma=sigma)
    signal = GaussianState(q_center=-0.3, p_center=0.1, sigma=sigma)
    dist = qzt_assemble(probe, signal, geom)
    omega = dist.Omega.Omega
    for _ in range(10):
        x, k = rng.uniform(-0.5, 0.5, 2)
        xi = qzt_xi(dist, x, k)
        product = (
            dist.prefactor
            * jacobi_theta3(xi[0], omega[0, 0], tol=1e-14).value
            * jacobi_theta3(xi[1], omega[1, 1], tol=1e-14).value
        )
        assert relative(qzt_eval(dist, x, k, tol=1e-14), product, 1e-4 * abs(dist.prefactor)) < 1e-10


def test_grid_matches_pointwise(rng, square):
    probe = GaussianState(q_center=0.2, sigma=0.8)
    signal = GaussianState(p_center=0.3, sigma=1.3)
    window = GridSpec(x_min=-0.4, x_max=0.6, k_min=-0.5, k_max=0.5, nx=5, nk=3)
    for char in (ThetaCharacteristic.zero(), ThetaCharacteristic.half()):
        dist = qzt_assemble(probe, signal, square, char)
        values = qzt_grid(dist, window)
        assert values.shape == (3, 5)
        x, k = window.xs()[3], window.ks()[2]
        assert values[2, 3] == pytest.approx(qzt_eval(dist, x, k), rel=1e-9, abs=1e-12)
        xi = qzt_xi(dist, x, k)
        assert qzt_eval_xi(dist, xi) == pytest.approx(qzt_eval(dist, x, k))


@pytest.mark.parametrize(
    "fields",
    [
        {"x_min": 1.0, "x_max": 0.0},
        {"k_min": 0.0, "k_max": 0.0},
        {"nx": 0},
        {"nx": 20_000, "nk": 20_000},
    ],
)
def test_grid_spec_validation(fields):
    with pytest.raises(ValidationError):
        GridSpec(**fields)


def test_canonical_trace_is_plain_overlap(rng, square):
    probe, signal = small_state(rng, (0.5, 2.0)), small_state(rng, (0.5, 2.0))
    dist = qzt_assemble(probe, signal, square)
    assert relative(
        canonical_trace(dist), matrix_element_quadrature(probe, signal, square, 0, 0)
    ) < 1e-8
    half = qzt_assemble(probe, signal, square, ThetaCharacteristic.half())
    assert canonical_trace(half) == 0


def test_squeezed_vacuum_tau(square):
    tau1, tau2 = squeezed_vacuum_tau(square, 1.0)
    assert tau1 == pytest.approx(1j / (4 * math.pi), rel=1e-14)
    assert tau2 == pytest.approx(1j / (4 * math.pi), rel=1e-14)


def test_squeezed_vacuum_forms_agree(rng):
    for _ in range(20):
        geom = TorusGeometry(
            L=rng.uniform(1, 10), P=rng.uniform(1, 10), hbar=rng.uniform(0.3, 3)
        )
        sigma = rng.uniform(0.2, 4)
        (tau1, tau1_alt), (tau2, tau2_alt) = squeezed_vacuum_tau_forms(geom, sigma)
        assert tau1 == pytest.approx(tau1_alt, rel=1e-12)
        assert tau2 == pytest.approx(tau2_alt, rel=1e-12)
        gamma = closed_form_parts(
            GaussianState.vacuum(sigma), GaussianState.vacuum(sigma), geom
        ).Gamma
        assert tau1 == pytest.approx(1j * gamma[0, 0], rel=1e-12)
        assert tau2 == pytest.approx(1j * gamma[1, 1], rel=1e-12)


def test_squeezing_scales_tau(square):
    tau1, tau2 = squeezed_vacuum_tau(square, 0.7)
    wide1, wide2 = squeezed_vacuum_tau(square, 0.7 * 3)
    assert wide1 == pytest.approx(tau1 / 9, rel=1e-13)
    assert wide2 == pytest.approx(tau2 * 9, rel=1e-13)


def test_lattice_uncertainty(square):
    assert lattice_uncertainty(square, 1.0) == pytest.approx(1 / (16 * math.pi**2), rel=2e-15)
    assert 1 / (16 * math.pi**2) == pytest.approx(0.0063326, abs=1e-7)
    narrow, wide = lattice_uncertainty(square, 0.5), lattice_uncertainty(square, 2.0)
    assert abs(narrow - wide) / wide <= 1e-15
    doubled = lattice_uncertainty(square.scaled(2.0), 1.0)
    assert doubled == pytest.approx(lattice_uncertainty(square, 1.0) / 16, rel=1e-14)


def test_lattice_uncertainty_is_independent_of_squeezing(rng):
    for _ in range(50):
        geom = TorusGeometry(
            L=rng.uniform(1, 12), P=rng.uniform(1, 12), hbar=rng.uniform(0.25, 4)
        )
        target = (geom.theta0 / 2) ** 2
        value = lattice_uncertainty(geom, rng.uniform(0.1, 5))
        assert abs(value - target) / target <= 2e-15
