import numpy as np
import pytest

from qdecay import (
    cross_term_decomposition,
    decay_curve,
    decay_derivative,
    evolve,
    pure_density,
    pure_spectral_rep,
    second_derivative_at_zero,
    spectral_rep_eval,
    survival_amplitude,
    survival_probability_mixed,
    survival_probability_pure,
    validate_density,
)
from qdecay.dynamics import FD_STEP_FIRST, FD_STEP_SECOND, PureSpectralRep
from qdecay.ensembles import default_rng, random_density, random_hamiltonian, random_instance


def fd_derivative(rho, h, t, step=FD_STEP_FIRST):
    return (
        survival_probability_mixed(rho, h, t + step)
        - survival_probability_mixed(rho, h, t - step)
    ) / (2 * step)


def test_evolve_at_zero_is_identity_map():
    rho, h = random_instance(4, default_rng(1))
    rho0 = evolve(rho, h, 0.0)
    assert np.max(np.abs(rho0.matrix - rho.matrix)) <= 1e-12


def test_evolve_commuting_state_is_stationary():
    h = np.diag([0.0, 1.0, 2.0]).astype(complex)
    rho = validate_density(np.diag([0.2, 0.3, 0.5]).astype(complex))
    rho_t = evolve(rho, h, 2.7)
    assert np.max(np.abs(rho_t.matrix - rho.matrix)) <= 1e-10


def test_evolve_preserves_spectrum():
    rho, h = random_instance(5, default_rng(2))
    rho_t = evolve(rho, h, 1.3)
    w0 = np.sort(np.linalg.eigvalsh(rho.matrix))
    w1 = np.sort(np.linalg.eigvalsh(rho_t.matrix))
    assert np.max(np.abs(w0 - w1)) <= 1e-9
    assert abs(np.trace(rho_t.matrix) - 1.0) <= 1e-10


def test_evolve_group_law():
    rho, h = random_instance(4, default_rng(3))
    a = evolve(evolve(rho, h, 0.6), h, 0.7)
    b = evolve(rho, h, 1.3)
    assert np.max(np.abs(a.matrix - b.matrix)) <= 1e-10


def test_amplitude_at_zero(two_level_h, balanced_phi):
    assert abs(survival_amplitude(balanced_phi, two_level_h, 0.0) - 1.0) <= 1e-12


def test_amplitude_eigenstate_phase():
    h = np.diag([0.0, 1.5]).astype(complex)
    phi = np.array([0.0, 1.0], dtype=complex)
    t = 0.8
    assert abs(survival_amplitude(phi, h, t) - np.exp(-1.5j * t)) <= 1e-12


def test_amplitude_two_level_closed_form(two_level_h, balanced_phi):
    for t in (0.3, 1.0, 2.2):
        expected = (1.0 + np.exp(-2j * t)) / 2.0
        assert abs(survival_amplitude(balanced_phi, two_level_h, t) - expected) <= 1e-12


def test_amplitude_conjugation_symmetry():
    rng = default_rng(4)
    h = random_hamiltonian(4, rng)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    phi = v / np.linalg.norm(v)
    for t in (0.1, 0.9, 3.3):
        a_plus = survival_amplitude(phi, h, t)
        a_minus = survival_amplitude(phi, h, -t)
        assert abs(a_minus - np.conj(a_plus)) <= 1e-12


def test_pure_survival_is_cos_squared(two_level_h, balanced_phi):
    for t in np.linspace(-np.pi, np.pi, 17):
        p = survival_probability_pure(balanced_phi, two_level_h, t)
        assert abs(p - np.cos(t) ** 2) <= 1e-12


def test_pure_survival_even():
    rng = default_rng(5)
    h = random_hamiltonian(5, rng)
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    phi = v / np.linalg.norm(v)
    for t in (0.2, 1.4, 2.9):
        assert abs(
            survival_probability_pure(phi, h, t) - survival_probability_pure(phi, h, -t)
        ) <= 1e-12


def test_mixed_survival_stationary_commuting_projection():
    # Pi commutes with h although delta_h > 0: P stays 1 for all t.
    h = np.diag([0.0, 1.0, 2.0]).astype(complex)
    rho = validate_density(np.diag([0.5, 0.0, 0.5]).astype(complex))
    for t in (0.3, 1.1, 4.0):
        assert abs(survival_probability_mixed(rho, h, t) - 1.0) <= 1e-12


def test_mixed_survival_full_rank_is_one():
    rng = default_rng(6)
    rho = random_density(3, rng, rank=3)
    h = random_hamiltonian(3, rng)
    for t in (0.5, 2.0):
        assert abs(survival_probability_mixed(rho, h, t) - 1.0) <= 1e-10


def test_mixed_intelligent_is_cos_squared(mixed_intelligent_4d):
    rho, h = mixed_intelligent_4d
    for t in np.linspace(0.0, np.pi, 9):
        assert abs(survival_probability_mixed(rho, h, t) - np.cos(t) ** 2) <= 1e-12


def test_decay_curve_matches_pointwise_path():
    # The vectorized spectral-sum curve and the pointwise Tr(Pi rho_t)
    # evaluation are independent code paths.
    rho, h = random_instance(5, default_rng(7))
    times = np.linspace(-2.0, 2.0, 21)
    curve = decay_curve(rho, h, times)
    for t, v in zip(times, curve.values):
        assert abs(v - survival_probability_mixed(rho, h, t)) <= 1e-12


def test_mixed_time_reversal():
    rho, h = random_instance(4, default_rng(8))
    for t in (0.4, 1.7):
        assert abs(
            survival_probability_mixed(rho, h, -t)
            - survival_probability_mixed(rho, -h, t)
        ) <= 1e-12


def test_spectral_rep_eigenstate_single_term():
    h = np.diag([0.0, 2.0]).astype(complex)
    rep = pure_spectral_rep(np.array([0.0, 1.0]), h)
    assert np.allclose(rep.omegas, [2.0]) and np.allclose(rep.weights, [1.0])


def test_spectral_rep_balanced(two_level_h, balanced_phi):
    rep = pure_spectral_rep(balanced_phi, two_level_h)
    assert np.allclose(rep.omegas, [0.0, 2.0], atol=1e-12)
    assert np.allclose(rep.weights, [0.5, 0.5], atol=1e-12)


def test_spectral_rep_degenerate_eigenspace():
    # Eigenspace-projector oracle: weight at omega=1 is |<e1,phi>|^2 +
    # |<e2,phi>|^2 = 1/2, weight at omega=3 is 1/2.
    h = np.diag([1.0, 1.0, 3.0]).astype(complex)
    phi = np.array([1.0, 1.0, np.sqrt(2.0)]) / 2.0
    rep = pure_spectral_rep(phi, h)
    assert np.allclose(rep.omegas, [1.0, 3.0], atol=1e-12)
    assert np.allclose(rep.weights, [0.5, 0.5], atol=1e-12)


def test_spectral_rep_eval_single_term_flat():
    rep = PureSpectralRep(np.array([1.7]), np.array([1.0]))
    for t in (0.0, 0.9, 10.0):
        assert abs(spectral_rep_eval(rep, t) - 1.0) <= 1e-15


def test_spectral_rep_eval_two_equal_terms():
    rep = PureSpectralRep(np.array([0.0, 2.0]), np.array([0.5, 0.5]))
    for t in (0.1, 0.8, 2.5):
        assert abs(spectral_rep_eval(rep, t) - np.cos(t) ** 2) <= 1e-14


def test_spectral_rep_eval_matches_amplitude_form():
    # Independent oracle: |sum_a w_a exp(-i omega_a t)|^2.
    rng = default_rng(9)
    w = rng.dirichlet(np.ones(3))
    om = np.sort(rng.standard_normal(3)) * 2.0
    rep = PureSpectralRep(om, w)
    for t in (0.3, 1.2, 4.4):
        amp = np.sum(w * np.exp(-1j * om * t))
        assert abs(spectral_rep_eval(rep, t) - abs(amp) ** 2) <= 1e-12


def test_pure_path_equivalence():
    rng = default_rng(10)
    h = random_hamiltonian(5, rng)
    v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    phi = v / np.linalg.norm(v)
    rep = pure_spectral_rep(phi, h)
    for t in np.linspace(-3.0, 3.0, 13):
        assert abs(
            survival_probability_pure(phi, h, t) - spectral_rep_eval(rep, t)
        ) <= 1e-12


def test_derivative_zero_at_zero_and_for_stationary():
    rho, h = random_instance(4, default_rng(11))
    assert abs(decay_derivative(rho, h, 0.0)) <= 1e-12
    h_stat = np.diag([0.0, 1.0, 2.0]).astype(complex)
    rho_stat = validate_density(np.diag([0.5, 0.0, 0.5]).astype(complex))
    for t in (0.3, 1.9):
        assert abs(decay_derivative(rho_stat, h_stat, t)) <= 1e-12


def test_derivative_intelligent_closed_form(balanced_rho, two_level_h):
    # P = cos^2(t) so P' = -sin(2t); checked at the quarter-window point
    # and a few others.
    for t in (np.pi / 4, 0.3, 1.2):
        assert abs(decay_derivative(balanced_rho, two_level_h, t) + np.sin(2 * t)) <= 1e-9


def test_derivative_matches_finite_difference():
    for seed in range(5):
        rho, h = random_instance(4, default_rng(200 + seed))
        for t in (0.0, 0.5, 1.1):
            assert abs(decay_derivative(rho, h, t) - fd_derivative(rho, h, t)) <= 1e-6


def test_cross_term_pure_state_vanishes(balanced_rho, two_level_h):
    for t in (0.0, 0.7, 2.0):
        diag_part, cross_part = cross_term_decomposition(balanced_rho, two_level_h, t)
        assert cross_part <= 1e-12
        assert abs(diag_part - np.cos(t) ** 2) <= 1e-12


def test_cross_term_vanishes_for_mixed_intelligent(mixed_intelligent_4d):
    rho, h = mixed_intelligent_4d
    for t in np.linspace(0.1, 3.0, 7):
        _, cross_part = cross_term_decomposition(rho, h, t)
        assert cross_part <= 1e-10


def test_cross_term_parts_sum_to_survival():
    rng = default_rng(12)
    rho = random_density(4, rng, rank=2)
    h = random_hamiltonian(4, rng)
    t = 0.5
    diag_part, cross_part = cross_term_decomposition(rho, h, t)
    assert cross_part >= -1e-12
    assert abs(diag_part + cross_part - survival_probability_mixed(rho, h, t)) <= 1e-10


def test_second_derivative_pure_two_level(balanced_rho, two_level_h):
    # P = 1 - t^2 + O(t^4) for the balanced state, so -P''(0)/2 = 1.
    assert abs(second_derivative_at_zero(balanced_rho, two_level_h) - 1.0) <= 1e-12


def test_second_derivative_stationary_zero():
    h = np.diag([0.0, 1.0, 2.0]).astype(complex)
    rho = validate_density(np.diag([0.5, 0.0, 0.5]).astype(complex))
    assert abs(second_derivative_at_zero(rho, h)) <= 1e-12


def test_second_derivative_matches_finite_difference():
    # (1 - P(eps)) / eps^2 approximates -P''(0)/2 since P'(0) = 0.
    rng = default_rng(13)
    rho = random_density(5, rng, rank=3)
    h = random_hamiltonian(5, rng)
    eps = FD_STEP_SECOND
    fd = (1.0 - survival_probability_mixed(rho, h, eps)) / eps**2
    assert abs(second_derivative_at_zero(rho, h) - fd) <= 1e-6
