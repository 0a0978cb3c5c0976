"""Runnable verification suites.

Each suite draws its random cases from ``numpy.random.default_rng(seed)`` and
reports, per check, the largest error measure seen against a fixed
threshold. Nothing here depends on wall time, so a seed fixes the report.
"""

import math
from typing import Callable, Dict, Iterable, List

import numpy as np
from loguru import logger

from ..errors import GGKPError
from ..gaussian.closed_form import closed_form_parts, matrix_element_closed_form
from ..gaussian.quadrature import (
    composed_element_quadrature,
    matrix_element_quadrature,
    normalization_quadrature,
)
from ..gaussian.schema import GaussianState
from ..theta.bounds import truncation_radius
from ..theta.engine import diagonal_factorization_check, jacobi_theta3, riemann_theta
from ..theta.schema import PeriodMatrix, ThetaValue
from ..torus.core import character, star_phase
from ..torus.schema import TorusGeometry
from ..zak.logical import flat_limit_scan, ggkp_logical, normalized_overlap, torus_overlap
from ..zak.schema import LogicalState
from ..zak.transform import (
    brute_force_coefficients,
    brute_force_sum,
    canonical_trace,
    lattice_uncertainty,
    qzt_assemble,
    qzt_eval,
    qzt_eval_xi,
    qzt_xi,
)
from .schema import CheckResult, VerifyReport

# 1e-8 relative above the floor is 1e-12 absolute below it
ELEMENT_FLOOR = 1e-4
RANDOM_CASES = 100
BRUTE_FORCE_RADIUS = 12

Rng = np.random.Generator


def scaled_error(value: complex, reference: complex, floor: float) -> float:
    return abs(value - reference) / max(abs(reference), floor)


def _check(name: str, errors: Iterable[float], threshold: float) -> CheckResult:
    errors = [float(e) for e in errors]
    worst = max(errors) if errors else 0.0
    passed = bool(worst <= threshold) and not any(math.isnan(e) for e in errors)
    if not passed:
        logger.error(f"check {name} failed: max error {worst:.3e} > {threshold:.1e}")
    return CheckResult(
        name=name, passed=passed, max_error=worst, threshold=threshold, cases=len(errors)
    )


def _period_matrix(rng: Rng, min_imag: float = 0.3) -> PeriodMatrix:
    a = rng.uniform(-0.5, 0.5, (2, 2))
    x = rng.uniform(-1.0, 1.0, (2, 2))
    y = a @ a.T + min_imag * np.eye(2)
    return PeriodMatrix(Omega=(x + x.T) / 2.0 + 1j * y)


def _xi(rng: Rng, imag: float = 0.5) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, 2) + 1j * rng.uniform(-imag, imag, 2)


def _state(rng: Rng, center: float, sigma: tuple) -> GaussianState:
    return GaussianState(
        q_center=rng.uniform(-center, center),
        p_center=rng.uniform(-center, center),
        sigma=rng.uniform(*sigma),
    )


def _geometry(rng: Rng, periods: tuple, hbar: tuple = (1.0, 1.0)) -> TorusGeometry:
    return TorusGeometry(
        L=rng.uniform(*periods), P=rng.uniform(*periods), hbar=rng.uniform(*hbar)
    )


def _theta_relative(value: complex, reference: ThetaValue) -> float:
    # measured against the largest lattice term when the sum itself cancels
    scale = max(abs(reference.value), math.exp(reference.log_scale))
    return abs(value - reference.value) / scale


# theta ---------------------------------------------------------------------


def theta_checks(rng: Rng) -> List[CheckResult]:
    periodicity, quasi, evenness, certified = [], [], [], []
    for _ in range(RANDOM_CASES):
        omega = _period_matrix(rng)
        xi = _xi(rng)
        base = riemann_theta(xi, omega)
        for j in range(2):
            e = np.eye(2)[j]
            periodicity.append(_theta_relative(riemann_theta(xi + e, omega).value, base))
            shifted = riemann_theta(xi + omega.Omega @ e, omega)
            factor = np.exp(-1j * np.pi * omega.Omega[j, j] - 2j * np.pi * xi[j])
            quasi.append(_theta_relative(factor * base.value, shifted))
        evenness.append(_theta_relative(riemann_theta(-xi, omega).value, base))

        radius = truncation_radius(omega, 1e-4)
        coarse = riemann_theta(xi, omega, radius=radius)
        fine = riemann_theta(xi, omega, radius=radius + 8)
        slack = coarse.error_bound + 1e-13 * math.exp(coarse.log_scale)
        certified.append(abs(coarse.value - fine.value) / slack)

    factorization = []
    for _ in range(RANDOM_CASES):
        taus = rng.uniform(-0.25, 0.25, 2) + 1j * rng.uniform(0.5, 2.0, 2)
        genus2, product = diagonal_factorization_check(
            PeriodMatrix.diagonal(*taus), _xi(rng, 0.2), tol=1e-14
        )
        factorization.append(abs(genus2 - product) / abs(product))

    inversion = []
    for _ in range(50):
        tau = rng.uniform(-0.02, 0.02) + 1j * rng.uniform(0.02, 0.05)
        z = rng.uniform(-0.5, 0.5)
        direct = jacobi_theta3(z, tau, tol=1e-13, inversion=False)
        inverted = jacobi_theta3(z, tau, tol=1e-13, inversion=True).value
        inversion.append(_theta_relative(inverted, direct))

    # ϑ₃(0, i) = π^{1/4} / Γ(3/4)
    exact = math.pi**0.25 / math.gamma(0.75)
    special = [
        abs(jacobi_theta3(0.0, 1j).value - exact) / exact,
        abs(riemann_theta([0.0, 0.0], PeriodMatrix.diagonal(1j, 1j)).value - exact**2)
        / exact**2,
    ]
    identity_radius = truncation_radius(PeriodMatrix.diagonal(1j, 1j), 1e-12)

    return [
        _check("theta.integer_periodicity", periodicity, 1e-10),
        _check("theta.quasi_periodicity", quasi, 1e-10),
        _check("theta.evenness", evenness, 1e-10),
        _check("theta.certified_error", certified, 1.0),
        _check("theta.diagonal_factorization", factorization, 1e-11),
        _check("theta.modular_inversion", inversion, 1e-9),
        _check("theta.special_values", special, 1e-12),
        _check("theta.identity_radius", [identity_radius], 6),
    ]


# matrix --------------------------------------------------------------------


def matrix_checks(rng: Rng) -> List[CheckResult]:
    normalization = []
    for _ in range(50):
        state = _state(rng, 3.0, (0.2, 4.0))
        hbar = rng.uniform(0.5, 2.0)
        normalization.append(abs(normalization_quadrature(state, hbar) - 1.0))

    oracle, hermiticity, positivity = [], [], []
    for _ in range(2 * RANDOM_CASES):
        geom = _geometry(rng, (2.0, 10.0))
        probe, signal = _state(rng, 2.0, (0.3, 3.0)), _state(rng, 2.0, (0.3, 3.0))
        m, n = (int(v) for v in rng.integers(-4, 5, 2))
        closed = matrix_element_closed_form(probe, signal, geom, m, n)
        quad = matrix_element_quadrature(probe, signal, geom, m, n)
        oracle.append(scaled_error(closed, quad, ELEMENT_FLOOR))
        adjoint = matrix_element_closed_form(signal, probe, geom, -m, -n)
        hermiticity.append(scaled_error(closed, adjoint.conjugate(), ELEMENT_FLOOR))

    for _ in range(10 * RANDOM_CASES):
        geom = _geometry(rng, (1.0, 12.0), (0.25, 4.0))
        parts = closed_form_parts(
            _state(rng, 3.0, (0.1, 5.0)), _state(rng, 3.0, (0.1, 5.0)), geom
        )
        positivity.append(float(np.linalg.eigvalsh(parts.Gamma.real).min() <= 0.0))

    geom = _geometry(rng, (4.0, 8.0))
    probe, signal = _state(rng, 1.0, (0.6, 1.5)), _state(rng, 1.0, (0.6, 1.5))
    twisted = []
    span = range(-2, 3)
    for m in span:
        for n in span:
            for m2 in span:
                for n2 in span:
                    composed = composed_element_quadrature(
                        probe, signal, geom, (m, n), (m2, n2)
                    )
                    phase = star_phase(character(m, n), character(m2, n2), geom)
                    single = matrix_element_quadrature(probe, signal, geom, m + m2, n + n2)
                    twisted.append(scaled_error(composed, phase * single, ELEMENT_FLOOR))

    return [
        _check("matrix.normalization", normalization, 1e-10),
        _check("matrix.oracle_equivalence", oracle, 1e-8),
        _check("matrix.hermiticity", hermiticity, 1e-10),
        _check("matrix.gamma_positive_real_part", positivity, 0.0),
        _check("matrix.twisted_composition", twisted, 1e-6),
    ]


# zak -----------------------------------------------------------------------


def _brute_force_states(rng: Rng):
    geom = _geometry(rng, (2.5, 4.0))
    return geom, _state(rng, 0.3, (0.85, 1.2)), _state(rng, 0.3, (0.85, 1.2))


def zak_checks(rng: Rng) -> List[CheckResult]:
    oracle = []
    for _ in range(10):
        geom, probe, signal = _brute_force_states(rng)
        dist = qzt_assemble(probe, signal, geom)
        coeffs = brute_force_coefficients(probe, signal, geom, BRUTE_FORCE_RADIUS)
        for _ in range(25):
            x = rng.uniform(0.0, geom.L / (2.0 * math.pi * geom.hbar))
            k = rng.uniform(0.0, geom.P / (2.0 * math.pi * geom.hbar))
            reference = brute_force_sum(coeffs, geom, x, k)
            oracle.append(
                scaled_error(qzt_eval(dist, x, k, tol=1e-13), reference, ELEMENT_FLOOR)
            )

    factorized, periodicity, trace = [], [], []
    for _ in range(20):
        geom = _geometry(rng, (4.0, 7.0))
        sigma = rng.uniform(0.7, 1.4)
        probe = _state(rng, 1.0, (sigma, sigma))
        signal = _state(rng, 1.0, (sigma, sigma))
        dist = qzt_assemble(probe, signal, geom)
        x, k = rng.uniform(-1.0, 1.0, 2)
        genus2, product = diagonal_factorization_check(
            dist.Omega, qzt_xi(dist, x, k), tol=1e-14
        )
        factorized.append(scaled_error(genus2, product, ELEMENT_FLOOR))

        probe, signal = _state(rng, 1.0, (0.7, 1.4)), _state(rng, 1.0, (0.7, 1.4))
        dist = qzt_assemble(probe, signal, geom)
        # the common prefactor cancels; compare the theta factors
        base = riemann_theta(qzt_xi(dist, x, k), dist.Omega)
        period_x = geom.L / (2.0 * math.pi * geom.hbar)
        period_k = geom.P / (2.0 * math.pi * geom.hbar)
        for shifted in (qzt_xi(dist, x + period_x, k), qzt_xi(dist, x, k + period_k)):
            periodicity.append(
                _theta_relative(riemann_theta(shifted, dist.Omega).value, base)
            )
        trace.append(
            scaled_error(
                canonical_trace(dist),
                matrix_element_quadrature(probe, signal, geom, 0, 0),
                ELEMENT_FLOOR,
            )
        )

    uncertainty = []
    defaults = TorusGeometry(L=2.0 * math.pi, P=2.0 * math.pi)
    cases = [(defaults, s) for s in (0.25, 0.5, 1.0, 2.0, 4.0)]
    cases += [(_geometry(rng, (1.0, 12.0), (0.25, 4.0)), rng.uniform(0.1, 5.0)) for _ in range(50)]
    for geom, sigma in cases:
        target = (geom.theta0 / 2.0) ** 2
        uncertainty.append(abs(lattice_uncertainty(geom, sigma) - target) / target)

    positivity = []
    for _ in range(10 * RANDOM_CASES):
        geom = _geometry(rng, (1.0, 12.0), (0.25, 4.0))
        try:
            dist = qzt_assemble(
                _state(rng, 3.0, (0.1, 5.0)), _state(rng, 3.0, (0.1, 5.0)), geom
            )
            positivity.append(float(dist.Omega.min_eigenvalue <= 0.0))
        except GGKPError:
            positivity.append(1.0)

    return [
        _check("zak.oracle_equivalence", oracle, 1e-8),
        _check("zak.diagonal_factorization", factorized, 1e-10),
        _check("zak.lattice_periodicity", periodicity, 1e-9),
        _check("zak.canonical_trace", trace, 1e-8),
        _check("zak.lattice_uncertainty", uncertainty, 2e-15),
        _check("zak.period_matrix_positive", positivity, 0.0),
    ]


# logical -------------------------------------------------------------------


def _cell_norm(state: LogicalState) -> float:
    # ∫ over [0, 2) of |ϑ[ε;δ](ξ, iy)|² is 2·Σ e^{−2πy(n+ε)²} on each diagonal axis
    dist = state.distribution
    n = np.arange(-60, 61)
    norm = abs(dist.prefactor) ** 2
    for j in range(2):
        y = dist.Omega.Omega[j, j].imag
        shifted = n + float(dist.char.epsilon[j])
        norm *= 2.0 * math.fsum(np.exp(-2.0 * math.pi * y * shifted**2))
    return norm


def logical_checks(rng: Rng) -> List[CheckResult]:
    geom = TorusGeometry(L=2.0 * math.pi, P=2.0 * math.pi)
    zero, one = ggkp_logical(geom, 1.0, 0), ggkp_logical(geom, 1.0, 1)

    orthogonality = [normalized_overlap(zero, one, r) for r in (64, 512)]
    cell_norm = [
        abs(torus_overlap(s, s).real - _cell_norm(s)) / _cell_norm(s)
        for s in (zero, one)
    ]
    cross = torus_overlap(zero, one)
    hermitian = abs(cross - torus_overlap(one, zero).conjugate()) / torus_overlap(
        zero, zero
    ).real
    origin = abs(qzt_eval_xi(one.distribution, [0.0, 0.0], tol=1e-12)) / abs(
        qzt_eval_xi(zero.distribution, [0.0, 0.0], tol=1e-12)
    )

    points = flat_limit_scan(1.0, 1.0, [1.0, 2.0, 4.0, 8.0])
    violations = sum(b.fwhm >= a.fwhm for a, b in zip(points, points[1:]))
    centers = [abs(p.peak_center) for p in points]

    return [
        _check("logical.orthogonality", orthogonality, 1e-10),
        _check("logical.cell_norm", cell_norm, 1e-9),
        _check("logical.hermitian_pairing", [hermitian], 1e-12),
        _check("logical.odd_vanishes_at_origin", [origin], 1e-10),
        _check("logical.flat_limit_sharpens", [violations], 0.0),
        _check("logical.flat_limit_centered", centers, 1.0 / 4096),
    ]


SUITES: Dict[str, Callable[[Rng], List[CheckResult]]] = {
    "theta": theta_checks,
    "matrix": matrix_checks,
    "zak": zak_checks,
    "logical": logical_checks,
}
SUITE_NAMES = ("all", *SUITES)


def run_suite(name: str, seed: int) -> VerifyReport:
    names = list(SUITES) if name == "all" else [name]
    checks: List[CheckResult] = []
    for suite in names:
        logger.info(f"running {suite} checks with seed {seed}")
        # a fresh stream per suite keeps "all" consistent with single-suite runs
        checks.extend(SUITES[suite](np.random.default_rng(seed)))
    return VerifyReport(suite=name, seed=seed, checks=checks)
