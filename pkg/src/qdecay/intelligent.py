"""Construction and detection of bound-saturating (intelligent) states.

A pure state saturates the cosine decay bound for all times exactly when
it is an equal-weight superposition of two eigenvectors of h with distinct
eigenvalues.  A mixed state saturates it exactly when every spectral
component psi_k splits as psi_k = phi_{k,1} + phi_{k,2} with
h phi_{k,e} = omega_e phi_{k,e} and <phi_{k,e}, phi_{l,f}> = delta_kl
delta_ef / 2, i.e. matched equal-weight pairs drawn from the same two
eigenspaces.  The mixture weights are unconstrained beyond positivity and
normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateEigenvalues,
    EigenspaceTooSmall,
    IdentityViolation,
    InvalidWeights,
    NotEigenvector,
)
from .linalg import (
    HermitianEigen,
    as_complex_vector,
    eigenspace_partition,
    hermitian_eig,
    require_hermitian,
)
from .states import DensityOperator, validate_density, variance

EIGENVECTOR_RESIDUAL_TOL = 1e-9
DETECTION_TOL = 1e-8      # looser than construction: detection consumes
                          # matrices that already went through eigensolvers


def _eig_of(h) -> HermitianEigen:
    if isinstance(h, HermitianEigen):
        return h
    return hermitian_eig(require_hermitian(h))


def _nearest_eigenvalue(w, eig: HermitianEigen) -> float:
    """Eigenvalue of h closest to the Rayleigh quotient of w.

    The candidate comes from the spectrum of h, never from the caller, and
    w must pass the residual test ||h w - omega w|| <= tol ||w||.
    """
    v = as_complex_vector(w)
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise NotEigenvector("zero vector")
    hmat = eig.matrix()
    rayleigh = float(np.real(np.vdot(v, hmat @ v)) / nrm**2)
    omega = float(eig.eigenvalues[np.argmin(np.abs(eig.eigenvalues - rayleigh))])
    residual = float(np.linalg.norm(hmat @ v - omega * v))
    if residual > EIGENVECTOR_RESIDUAL_TOL * nrm:
        raise NotEigenvector(
            f"residual {residual:.3e} exceeds {EIGENVECTOR_RESIDUAL_TOL:.1e} * ||w||"
        )
    return omega


def construct_pure_intelligent(u, v, h) -> np.ndarray:
    """Equal-weight superposition of two eigenvectors with distinct eigenvalues.

    Inputs may have any nonzero length; they are rescaled to the
    half-weight convention, so the result is phi = u/(sqrt(2)||u||) +
    v/(sqrt(2)||v||), returned unit-normalized.  The decay of phi is then
    cos^2(delta_h t) with delta_h = (omega_2 - omega_1)/2.
    """
    eig = _eig_of(h)
    u = as_complex_vector(u)
    v = as_complex_vector(v)
    omega_u = _nearest_eigenvalue(u, eig)
    omega_v = _nearest_eigenvalue(v, eig)
    if abs(omega_u - omega_v) <= 1e-10:
        raise DegenerateEigenvalues(
            f"eigenvalues {omega_u!r} and {omega_v!r} coincide within 1e-10"
        )
    phi = u / (np.sqrt(2.0) * np.linalg.norm(u)) + v / (np.sqrt(2.0) * np.linalg.norm(v))
    return phi / np.linalg.norm(phi)


@dataclass
class MixedIntelligentSpec:
    """Ingredients of a mixed intelligent state.

    basis1 and basis2 hold n orthonormal columns inside the omega1- and
    omega2-eigenspaces of h; component k of the state is
    (basis1[:, k] + basis2[:, k]) / sqrt(2) with mixture weight weights[k].
    """

    dim: int
    omega1: float
    omega2: float
    weights: np.ndarray
    basis1: np.ndarray
    basis2: np.ndarray

    @property
    def n_components(self) -> int:
        return int(np.asarray(self.weights).size)


def _check_orthonormal_columns(B: np.ndarray, label: str, tol: float = 1e-10):
    gram = B.conj().T @ B
    defect = float(np.max(np.abs(gram - np.eye(B.shape[1]))))
    if defect > tol:
        raise ValueError(f"{label} columns not orthonormal (defect {defect:.3e})")


def construct_mixed_intelligent(spec: MixedIntelligentSpec, h) -> DensityOperator:
    """Assemble the density operator of a mixed intelligent state.

    Validates the spec (positive normalized weights, orthonormal bases,
    eigenspace membership and size), builds psi_k = (b1_k + b2_k)/sqrt(2)
    and returns sum_k weights[k] psi_k psi_k^dagger as a validated
    DensityOperator.
    """
    eig = _eig_of(h)
    weights = np.asarray(spec.weights, dtype=float).reshape(-1)
    n = weights.size
    if n < 1 or np.any(weights <= 0.0) or abs(float(np.sum(weights)) - 1.0) > 1e-12:
        raise InvalidWeights(f"weights must be positive and sum to 1, got {weights}")
    if spec.omega2 <= spec.omega1:
        raise DegenerateEigenvalues("omega2 must exceed omega1")

    spaces = eigenspace_partition(eig)
    for omega, label in ((spec.omega1, "omega1"), (spec.omega2, "omega2")):
        sizes = [idx.size for om, idx in spaces if abs(om - omega) <= 1e-8]
        if not sizes:
            raise NotEigenvector(f"{label} = {omega!r} is not an eigenvalue of h")
        if sizes[0] < n:
            raise EigenspaceTooSmall(
                f"{label}-eigenspace has dimension {sizes[0]}, need {n}"
            )

    bases = []
    for B, omega, label in ((spec.basis1, spec.omega1, "basis1"), (spec.basis2, spec.omega2, "basis2")):
        B = np.asarray(B, dtype=np.complex128)
        if B.shape != (spec.dim, n):
            raise ValueError(f"{label} must be {spec.dim}x{n}, got {B.shape}")
        _check_orthonormal_columns(B, label)
        for k in range(n):
            omega_k = _nearest_eigenvalue(B[:, k], eig)
            if abs(omega_k - omega) > 1e-8:
                raise NotEigenvector(
                    f"{label}[:, {k}] belongs to eigenvalue {omega_k!r}, not {omega!r}"
                )
        bases.append(B)

    psi = (bases[0] + bases[1]) / np.sqrt(2.0)
    rho = (psi * weights) @ psi.conj().T
    return validate_density(rho)


def is_intelligent(rho: DensityOperator, h, tol: float = DETECTION_TOL):
    """Structural saturation test.

    Splits every spectral component of rho over the eigenspaces of h and
    checks that exactly two eigenvalues carry weight and that the stacked
    components have Gram matrix I/2 within tol.  Returns (verdict, spec);
    on a True verdict the spec reconstructs the two eigenvalues and the
    recovered orthonormal bases.
    """
    eig = _eig_of(h)
    psi = rho.vectors
    carrying = []
    for omega, idx in eigenspace_partition(eig):
        block = eig.eigenvectors[:, idx]
        comps = block @ (block.conj().T @ psi)
        if float(np.max(np.sum(np.abs(comps) ** 2, axis=0))) > tol:
            carrying.append((omega, comps))
    if len(carrying) != 2:
        return False, None
    (omega1, comp1), (omega2, comp2) = carrying
    stacked = np.hstack([comp1, comp2])
    gram = stacked.conj().T @ stacked
    defect = float(np.max(np.abs(gram - 0.5 * np.eye(gram.shape[0]))))
    if defect > tol:
        return False, None
    spec = MixedIntelligentSpec(
        dim=rho.dim,
        omega1=omega1,
        omega2=omega2,
        weights=rho.weights.copy(),
        basis1=np.sqrt(2.0) * comp1,
        basis2=np.sqrt(2.0) * comp2,
    )
    return True, spec


@dataclass
class VarianceMixing:
    """Decomposition of a mixture's variance.

    total = within + between, where within is the weighted mean of the
    component variances and between is the nonnegative spread
    (1/2) sum_{k,l} w_k w_l (m_k - m_l)^2 of the component means m_k.
    """

    total: float
    within: float
    between: float
    component_means: np.ndarray


def variance_mixing(rho: DensityOperator, h) -> VarianceMixing:
    """Split the variance of h in rho over the spectral components.

    total comes from the full-matrix traces; within and between come from
    the component vectors, so the identity total = within + between is a
    genuine cross-check of two computation paths.
    """
    hmat = require_hermitian(h) if not isinstance(h, HermitianEigen) else h.matrix()
    total = variance(rho, hmat)
    psi = rho.vectors
    h_psi = hmat @ psi
    means = np.real(np.sum(psi.conj() * h_psi, axis=0))
    second_moments = np.sum(np.abs(h_psi) ** 2, axis=0)
    w = rho.weights
    within = float(np.sum(w * (second_moments - means**2)))
    gaps = means[:, None] - means[None, :]
    between = 0.5 * float(np.einsum("k,l,kl->", w, w, gaps**2))
    if abs(total - within - between) > 1e-12 * (1.0 + abs(total)):
        raise IdentityViolation(
            f"variance mixing identity off by {total - within - between:.3e}"
        )
    return VarianceMixing(total, within, between, means)
