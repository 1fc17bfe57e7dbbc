"""Dense complex matrix algebra and a Hermitian eigensolver.

Everything downstream is exact spectral calculus on top of this module:
states are diagonalized once, and time evolution is the spectral
exponential, so no integrator error enters anywhere.

The eigensolver is a cyclic two-sided Jacobi scheme for complex Hermitian
matrices.  It is deterministic for a fixed input (fixed pivot order, fixed
phase convention) and accurate at the desk scales this package targets
(dim <= ~64).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, NotHermitian

# Jacobi iteration controls: hard sweep cap and the off-diagonal norm at
# which the iteration counts as converged, relative to the Frobenius norm.
JACOBI_MAX_SWEEPS = 100
JACOBI_OFFDIAG_FACTOR = 1e-13


def as_complex_matrix(M) -> np.ndarray:
    """Coerce to a square complex128 array, rejecting non-finite entries."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def as_complex_vector(v) -> np.ndarray:
    """Coerce to a 1-d complex128 array, rejecting non-finite entries."""
    w = np.asarray(v, dtype=np.complex128).reshape(-1)
    if w.size < 1:
        raise DimensionMismatch("expected a nonempty vector")
    if not np.all(np.isfinite(w)):
        raise ValueError("vector entries must be finite")
    return w


def adjoint(M) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex_matrix(M).conj().T


def matmul(A, B) -> np.ndarray:
    """Matrix product of two equally sized square matrices."""
    A = as_complex_matrix(A)
    B = as_complex_matrix(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def trace(M) -> complex:
    """Sum of the diagonal."""
    return complex(np.trace(as_complex_matrix(M)))


def hermiticity_defect(M) -> float:
    """Max-norm distance from M to its own adjoint."""
    A = as_complex_matrix(M)
    return float(np.max(np.abs(A - A.conj().T)))


def require_hermitian(M, tol: float | None = None) -> np.ndarray:
    """Return M as an array, raising NotHermitian beyond tolerance.

    The default tolerance scales with the entry magnitude:
    1e-10 * (1 + max|M_ij|).
    """
    A = as_complex_matrix(M)
    if tol is None:
        tol = 1e-10 * (1.0 + float(np.max(np.abs(A))))
    defect = float(np.max(np.abs(A - A.conj().T)))
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds tol {tol:.3e}")
    return A


@dataclass
class HermitianEigen:
    """Spectral decomposition of a Hermitian matrix.

    eigenvalues are ascending; eigenvectors holds the matching orthonormal
    eigenvectors as columns, with each column's largest-magnitude component
    made real and positive so repeated runs agree bitwise.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    def matrix(self) -> np.ndarray:
        """Reassemble V diag(w) V^dagger."""
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def _offdiag_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.linalg.norm(off))


def hermitian_eig(M, tol_herm: float | None = None) -> HermitianEigen:
    """Eigendecompose a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps run over pivots (p, q), p < q, in a fixed row-major order until
    the off-diagonal Frobenius norm drops below
    JACOBI_OFFDIAG_FACTOR * ||M||_F, or the sweep cap is hit
    (ConvergenceFailure, carrying the residual).  Degenerate eigenvalues
    yield an arbitrary orthonormal basis of their eigenspace.
    """
    A = require_hermitian(M, tol_herm)
    q = A.shape[0]
    # Work on the exactly Hermitian part; the input may carry roundoff
    # asymmetry up to tol_herm.
    A = (A + A.conj().T) / 2.0
    V = np.eye(q, dtype=np.complex128)
    if q == 1:
        return HermitianEigen(np.array([A[0, 0].real]), V)

    fro = float(np.linalg.norm(A))
    thresh = JACOBI_OFFDIAG_FACTOR * fro
    # Pivots this small in magnitude cannot push the off-norm above thresh
    # even if every one of them is skipped.
    skip = thresh / (2.0 * q)

    converged = _offdiag_norm(A) <= thresh
    sweeps = 0
    while not converged and sweeps < JACOBI_MAX_SWEEPS:
        for p in range(q - 1):
            for r in range(p + 1, q):
                apq = A[p, r]
                mag = abs(apq)
                if mag <= skip:
                    continue
                phase = apq / mag
                theta = (A[r, r].real - A[p, p].real) / (2.0 * mag)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = sign / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # Unitary plane rotation J: J[p,p]=c, J[p,r]=s*phase,
                # J[r,p]=-s*conj(phase), J[r,r]=c.  Apply A <- J^H A J.
                colp = A[:, p].copy()
                colr = A[:, r].copy()
                A[:, p] = c * colp - s * np.conj(phase) * colr
                A[:, r] = s * phase * colp + c * colr
                rowp = A[p, :].copy()
                rowr = A[r, :].copy()
                A[p, :] = c * rowp - s * phase * rowr
                A[r, :] = s * np.conj(phase) * rowp + c * rowr
                A[p, r] = 0.0
                A[r, p] = 0.0
                vp = V[:, p].copy()
                vr = V[:, r].copy()
                V[:, p] = c * vp - s * np.conj(phase) * vr
                V[:, r] = s * phase * vp + c * vr
        sweeps += 1
        converged = _offdiag_norm(A) <= thresh

    if not converged:
        residual = _offdiag_norm(A)
        raise ConvergenceFailure(
            f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps; "
            f"off-diagonal residual {residual:.3e}",
            residual,
        )

    w = np.real(np.diag(A)).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    # Phase convention: largest-magnitude component of each eigenvector is
    # real and positive (first such index on ties).
    for j in range(q):
        col = V[:, j]
        k = int(np.argmax(np.abs(col)))
        pivot = col[k]
        V[:, j] = col * (np.conj(pivot) / abs(pivot))
    return HermitianEigen(w, V)


def unitary_from_hamiltonian(eig: HermitianEigen, t: float) -> np.ndarray:
    """Propagator exp(-i h t) assembled from the spectral decomposition."""
    V = eig.eigenvectors
    phases = np.exp(-1j * eig.eigenvalues * t)
    return (V * phases) @ V.conj().T


def eigenspace_partition(eig: HermitianEigen, tol: float | None = None):
    """Group the ascending eigenvalues into (near-)degenerate clusters.

    Returns a list of (omega, indices) pairs, omega strictly increasing,
    where omega is the mean eigenvalue of the cluster and indices selects
    the eigenvector columns spanning that eigenspace.  Consecutive
    eigenvalues closer than tol are chained into one cluster.
    """
    w = eig.eigenvalues
    if tol is None:
        tol = 1e-8 * (1.0 + float(np.max(np.abs(w))))
    groups = []
    start = 0
    for i in range(1, w.size):
        if w[i] - w[i - 1] > tol:
            groups.append((start, i))
            start = i
    groups.append((start, w.size))
    return [(float(np.mean(w[a:b])), np.arange(a, b)) for a, b in groups]
