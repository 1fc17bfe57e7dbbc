"""Seeded random ensembles for verification campaigns.

The generator is numpy's PCG64 (np.random.default_rng); campaign identity
depends on the algorithm, so it is frozen here.  The drawing recipe per
instance is fixed as well: Hamiltonian first, then rank, then state
vectors, then weights, so identical seeds give identical campaigns.
"""

from __future__ import annotations

import numpy as np

from .states import RANK_TOL, DensityOperator, validate_density


def default_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_hamiltonian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """GUE-style Hermitian matrix with spectrum of order 1.

    H = (A + A^dagger) / (2 sqrt(dim)) for A with independent standard
    complex Gaussian entries; the 1/sqrt(dim) keeps eigenvalues in a
    dim-independent band (semicircle of radius sqrt(2)).
    """
    A = _complex_gaussian(rng, (dim, dim))
    return (A + A.conj().T) / (2.0 * np.sqrt(dim))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with the R-diagonal phase fix."""
    Q, R = np.linalg.qr(_complex_gaussian(rng, (dim, dim)))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_density(
    dim: int,
    rng: np.random.Generator,
    rank: int | None = None,
    rank_tol: float = RANK_TOL,
) -> DensityOperator:
    """Random density operator of the fixed campaign recipe.

    Rank uniform on 1..dim unless given; eigenvectors from QR
    orthonormalization of complex Gaussian columns; weights from the flat
    simplex (Dirichlet with all ones).
    """
    if rank is None:
        rank = int(rng.integers(1, dim + 1))
    G = _complex_gaussian(rng, (dim, rank))
    Q, _ = np.linalg.qr(G)
    weights = rng.dirichlet(np.ones(rank))
    rho = (Q * weights) @ Q.conj().T
    return validate_density(rho, rank_tol)


def random_instance(dim: int, rng: np.random.Generator):
    """One (rho, h) campaign draw, in the frozen order h then rho."""
    h = random_hamiltonian(dim, rng)
    rho = random_density(dim, rng)
    return rho, h
