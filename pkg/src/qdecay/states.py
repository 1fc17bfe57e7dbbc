"""Validated density operators and statistical functionals.

A DensityOperator carries its spectral decomposition (weights descending,
near-zero eigenvalues dropped) and exposes the projection onto its range,
the smallest orthogonal projection Pi with Tr(rho Pi) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NegativeVariance, NotPositive, TraceNotOne
from .linalg import (
    as_complex_matrix,
    as_complex_vector,
    hermitian_eig,
    require_hermitian,
)

RANK_TOL = 1e-12          # eigenvalues at or below this are dropped from the spectrum
NEGATIVITY_TOL = 1e-10    # eigenvalues below -this reject the matrix
TRACE_TOL = 1e-10
HERMITICITY_TOL = 1e-10
UNIT_NORM_TOL = 1e-10


def as_unit_vector(phi) -> np.ndarray:
    """Coerce to a complex vector and require unit norm within tolerance."""
    v = as_complex_vector(phi)
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"state vector norm {nrm!r} is not 1 within {UNIT_NORM_TOL}")
    return v


@dataclass
class Projector:
    """Orthogonal projection matrix together with its rank."""

    matrix: np.ndarray
    rank: int


@dataclass
class DensityOperator:
    """Validated density matrix with cached spectral data.

    weights are the retained eigenvalues in descending order; vectors holds
    the matching orthonormal eigenvectors as columns, so
    matrix ~= vectors @ diag(weights) @ vectors^dagger.
    """

    matrix: np.ndarray
    weights: np.ndarray
    vectors: np.ndarray
    rank: int
    _projection: Projector | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_pure(self) -> bool:
        return self.rank == 1

    @property
    def projection(self) -> Projector:
        """Projection onto the range, Pi = sum_k psi_k psi_k^dagger."""
        if self._projection is None:
            P = self.vectors @ self.vectors.conj().T
            self._projection = Projector(P, self.rank)
        return self._projection


def validate_density(M, rank_tol: float = RANK_TOL) -> DensityOperator:
    """Check Hermiticity, positivity and unit trace, then diagonalize.

    Eigenvalues in [-NEGATIVITY_TOL, 0) are clamped to zero; eigenvalues at
    or below rank_tol are dropped from the retained spectrum but still
    count toward the trace check.
    """
    A = require_hermitian(M, HERMITICITY_TOL)
    tr = complex(np.trace(A))
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"trace {tr:.12g} differs from 1 beyond {TRACE_TOL}")
    eig = hermitian_eig(A)
    w = eig.eigenvalues
    if w[0] < -NEGATIVITY_TOL:
        raise NotPositive(f"eigenvalue {w[0]:.3e} below -{NEGATIVITY_TOL}")
    w = np.maximum(w, 0.0)
    keep = np.flatnonzero(w > rank_tol)
    order = keep[np.argsort(-w[keep], kind="stable")]
    return DensityOperator(
        matrix=A,
        weights=w[order].copy(),
        vectors=eig.eigenvectors[:, order].copy(),
        rank=int(order.size),
    )


def pure_density(phi, rank_tol: float = RANK_TOL) -> DensityOperator:
    """Rank-one density operator phi phi^dagger for a unit vector."""
    v = as_unit_vector(phi)
    return validate_density(np.outer(v, v.conj()), rank_tol)


def range_projection(rho: DensityOperator) -> Projector:
    """Projection onto the range of rho (Pi rho = rho Pi = rho)."""
    return rho.projection


def expectation(rho: DensityOperator, A) -> float:
    """Tr(A rho) for Hermitian A; the imaginary part must be roundoff."""
    A = require_hermitian(A, HERMITICITY_TOL)
    val = complex(np.trace(A @ rho.matrix))
    if abs(val.imag) > 1e-10:
        raise AssertionError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def variance(rho: DensityOperator, A) -> float:
    """<A^2> - <A>^2, clamped to zero within -1e-12 of zero."""
    A = require_hermitian(A, HERMITICITY_TOL)
    mean = expectation(rho, A)
    second = expectation(rho, A @ A)
    var = second - mean * mean
    if var < -1e-12:
        raise NegativeVariance(f"variance {var:.3e} below roundoff floor")
    return max(var, 0.0)


def uncertainty(rho: DensityOperator, A) -> float:
    """Standard deviation sqrt(<A^2> - <A>^2)."""
    return float(np.sqrt(variance(rho, A)))
