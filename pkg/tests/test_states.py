import numpy as np
import pytest

from qdecay import (
    expectation,
    pure_density,
    range_projection,
    uncertainty,
    validate_density,
    variance,
)
from qdecay.ensembles import default_rng, random_density, random_hamiltonian
from qdecay.errors import NotHermitian, NotPositive, TraceNotOne


def test_validate_pure_projector():
    rho = validate_density(np.diag([1.0, 0.0]).astype(complex))
    assert rho.rank == 1 and rho.is_pure
    assert np.allclose(rho.weights, [1.0])


def test_validate_maximally_mixed_two_level():
    rho = validate_density(np.diag([0.5, 0.5]).astype(complex))
    assert rho.rank == 2
    assert np.allclose(rho.weights, [0.5, 0.5])


def test_validate_rank_threshold():
    # Constructed so one eigenvalue sits just below rank_tol: it must be
    # dropped from the spectrum while the trace check still passes.
    rho = validate_density(np.diag([0.6, 0.4 - 1e-15, 1e-15]).astype(complex), rank_tol=1e-12)
    assert rho.rank == 2
    assert np.allclose(rho.weights, [0.6, 0.4], atol=1e-12)


def test_validate_clamps_tiny_negative_eigenvalues():
    rho = validate_density(np.diag([1.0 + 5e-11, -5e-11, 0.0]).astype(complex))
    assert rho.rank == 1


def test_validate_rejections():
    with pytest.raises(NotHermitian):
        validate_density(np.array([[0.5, 0.3], [0.0, 0.5]], dtype=complex))
    with pytest.raises(NotPositive):
        validate_density(np.diag([1.2, -0.2]).astype(complex))
    with pytest.raises(TraceNotOne):
        validate_density(np.diag([0.7, 0.4]).astype(complex))


def test_projection_of_pure_state_is_the_state():
    phi = np.array([1.0, 1j, 0.0]) / np.sqrt(2.0)
    rho = pure_density(phi)
    assert np.max(np.abs(rho.projection.matrix - rho.matrix)) <= 1e-12


def test_projection_of_full_rank_state_is_identity():
    rho = random_density(4, default_rng(5), rank=4)
    assert rho.projection.rank == 4
    assert np.max(np.abs(rho.projection.matrix - np.eye(4))) <= 1e-10


def test_projection_rank_two_in_dim_four():
    rho = random_density(4, default_rng(6), rank=2)
    P = rho.projection.matrix
    assert abs(np.trace(P).real - 2.0) <= 1e-9
    for k in range(rho.rank):
        psi = rho.vectors[:, k]
        assert np.linalg.norm(P @ psi - psi) <= 1e-10
    # Projector invariants and the range property.
    assert np.max(np.abs(P @ P - P)) <= 1e-9
    assert np.max(np.abs(P - P.conj().T)) <= 1e-10
    assert np.max(np.abs(P @ rho.matrix - rho.matrix)) <= 1e-9
    assert np.max(np.abs(rho.matrix @ P - rho.matrix)) <= 1e-9


def test_expectation_identity_and_two_point():
    rho = validate_density(np.diag([0.5, 0.5]).astype(complex))
    assert abs(expectation(rho, np.eye(2)) - 1.0) <= 1e-14
    assert abs(expectation(rho, np.diag([0.0, 1.0])) - 0.5) <= 1e-14


def test_expectation_matches_spectral_form():
    # Independent oracle: Tr(A rho) against sum_k w_k <psi_k, A psi_k>.
    rng = default_rng(7)
    rho = random_density(5, rng)
    A = random_hamiltonian(5, rng)
    spectral = sum(
        w * np.real(np.vdot(rho.vectors[:, k], A @ rho.vectors[:, k]))
        for k, w in enumerate(rho.weights)
    )
    assert abs(expectation(rho, A) - spectral) <= 1e-12


def test_expectation_rejects_nonhermitian():
    rho = validate_density(np.diag([1.0, 0.0]).astype(complex))
    with pytest.raises(NotHermitian):
        expectation(rho, np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_variance_eigenstate_is_zero():
    rho = pure_density(np.array([1.0, 0.0]))
    assert variance(rho, np.diag([3.0, 7.0])) == 0.0


def test_variance_two_point_distribution():
    rho = validate_density(np.diag([0.5, 0.5]).astype(complex))
    assert abs(variance(rho, np.diag([0.0, 1.0])) - 0.25) <= 1e-15


def test_variance_hand_mixture():
    # Mixture of A-eigenstates with values (0, 2) and weights (1/4, 3/4):
    # <A^2> = 3, <A>^2 = 2.25, variance 0.75.
    rho = validate_density(np.diag([0.25, 0.75]).astype(complex))
    assert abs(variance(rho, np.diag([0.0, 2.0])) - 0.75) <= 1e-14


def test_variance_shift_invariance():
    rng = default_rng(8)
    rho = random_density(4, rng)
    A = random_hamiltonian(4, rng)
    for c in (-2.0, 0.3, 11.0):
        assert abs(variance(rho, A) - variance(rho, A + c * np.eye(4))) <= 1e-10


def test_zero_uncertainty_means_components_are_eigenvectors():
    # (Dh)_rho = 0 forces (h - <h>) psi_k = 0 for every spectral component.
    h = np.diag([1.0, 1.0, 3.0]).astype(complex)
    rho = validate_density(np.diag([0.4, 0.6, 0.0]).astype(complex))
    assert uncertainty(rho, h) <= 1e-12
    mean = expectation(rho, h)
    for k in range(rho.rank):
        psi = rho.vectors[:, k]
        assert np.linalg.norm((h - mean * np.eye(3)) @ psi) <= 1e-8
