"""Unitary evolution and survival-probability machinery.

The survival probability of a state rho under a Hamiltonian h is
P(t) = Tr(Pi exp(-iht) rho exp(iht)) with Pi the projection onto the
range of rho; for a pure state it reduces to |<phi, exp(-iht) phi>|^2.
All evolution goes through the spectral decomposition of h, so the only
error anywhere is roundoff.  Functions taking a Hamiltonian accept either
the matrix or a precomputed HermitianEigen; drivers that sweep a time
grid decompose once and reuse it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    HermitianEigen,
    eigenspace_partition,
    hermitian_eig,
    require_hermitian,
    unitary_from_hamiltonian,
)
from .states import RANK_TOL, DensityOperator, as_unit_vector, uncertainty

# The cosine bound is asserted on |t|*delta_h <= pi/2; the window test
# carries a relative slack so t grids built as x/delta_h keep their
# endpoints inside after roundoff.
WINDOW_SLACK = 1e-12

# Fixed finite-difference steps for the derivative cross-checks.
FD_STEP_FIRST = 1e-5
FD_STEP_SECOND = 1e-4


def _eig_of(h) -> HermitianEigen:
    if isinstance(h, HermitianEigen):
        return h
    return hermitian_eig(require_hermitian(h))


def _matrix_of(h) -> np.ndarray:
    if isinstance(h, HermitianEigen):
        return h.matrix()
    return require_hermitian(h)


def evolve(rho: DensityOperator, h, t: float) -> DensityOperator:
    """Conjugate rho by exp(-iht).

    The spectral data rotates exactly (weights unchanged, eigenvectors
    multiplied by the propagator), so no re-diagonalization happens.
    """
    U = unitary_from_hamiltonian(_eig_of(h), t)
    return DensityOperator(
        matrix=U @ rho.matrix @ U.conj().T,
        weights=rho.weights,
        vectors=U @ rho.vectors,
        rank=rho.rank,
    )


def survival_amplitude(phi, h, t: float) -> complex:
    """<phi, exp(-iht) phi> for a unit vector phi."""
    v = as_unit_vector(phi)
    U = unitary_from_hamiltonian(_eig_of(h), t)
    return complex(np.vdot(v, U @ v))


def survival_probability_pure(phi, h, t: float) -> float:
    """|<phi, exp(-iht) phi>|^2."""
    return abs(survival_amplitude(phi, h, t)) ** 2


def survival_probability_mixed(rho: DensityOperator, h, t: float) -> float:
    """Tr(Pi rho_t); raw value, not clamped into [0, 1]."""
    rho_t = evolve(rho, h, t)
    val = complex(np.trace(rho.projection.matrix @ rho_t.matrix))
    if abs(val.imag) > 1e-10:
        raise AssertionError(f"survival probability has imaginary part {val.imag:.3e}")
    return float(val.real)


@dataclass
class PureSpectralRep:
    """Frequencies and weights of a pure state over the eigenspaces of h.

    omegas are strictly ascending; weights are the squared norms of the
    eigenspace components and sum to one.
    """

    omegas: np.ndarray
    weights: np.ndarray


def pure_spectral_rep(phi, h, rank_tol: float = RANK_TOL) -> PureSpectralRep:
    """Resolve phi into h-eigenspace components.

    Degenerate eigenvalues are merged into one term; terms with weight at
    or below rank_tol are dropped.
    """
    v = as_unit_vector(phi)
    eig = _eig_of(h)
    coeffs = eig.eigenvectors.conj().T @ v
    omegas = []
    weights = []
    for omega, idx in eigenspace_partition(eig):
        w = float(np.sum(np.abs(coeffs[idx]) ** 2))
        if w > rank_tol:
            omegas.append(omega)
            weights.append(w)
    total = sum(weights)
    if abs(total - 1.0) > 1e-10:
        raise AssertionError(f"spectral weights sum to {total!r}, not 1")
    return PureSpectralRep(np.array(omegas), np.array(weights))


def spectral_rep_eval(rep: PureSpectralRep, t: float) -> float:
    """Double cosine sum over frequency pairs.

    P(t) = sum_{a,b} w_a w_b cos[(omega_a - omega_b) t], evaluated exactly
    as written.
    """
    om = rep.omegas
    w = rep.weights
    gaps = om[:, None] - om[None, :]
    return float(np.einsum("a,b,ab->", w, w, np.cos(gaps * t)))


@dataclass
class DecayCurve:
    """Survival probability sampled over a time grid, with the matched
    cosine bound.

    bound and margin are NaN outside the window |t|*delta_h <= pi/2 where
    no bound is asserted.  values are raw (not clamped); the constructor
    path rejects values outside [-1e-10, 1 + 1e-10] as numerical faults.
    """

    times: np.ndarray
    values: np.ndarray
    delta_h: float
    bound: np.ndarray
    margin: np.ndarray

    @property
    def in_window(self) -> np.ndarray:
        return ~np.isnan(self.bound)


def _curve_from_values(times: np.ndarray, values: np.ndarray, delta_h: float) -> DecayCurve:
    if np.any(values < -1e-10) or np.any(values > 1.0 + 1e-10):
        bad = values[(values < -1e-10) | (values > 1.0 + 1e-10)]
        raise AssertionError(f"survival probabilities out of [0,1]: {bad}")
    at_zero = np.flatnonzero(times == 0.0)
    if at_zero.size and np.max(np.abs(values[at_zero] - 1.0)) > 1e-10:
        raise AssertionError("survival probability at t=0 differs from 1")
    # For delta_h = 0 the window is all of R and the bound is identically 1,
    # which the generic expressions already produce.
    x = delta_h * times
    inside = np.abs(x) <= (np.pi / 2) * (1.0 + WINDOW_SLACK)
    bound = np.where(inside, np.cos(x) ** 2, np.nan)
    return DecayCurve(times, values, delta_h, bound, values - bound)


def decay_curve(rho: DensityOperator, h, times) -> DecayCurve:
    """Evaluate P over a whole grid in one pass.

    Uses the double-exponential spectral form
    P(t) = sum_{r,s} K_rs exp(i (omega_r - omega_s) t) with
    K_rs = <Phi_r, Pi Phi_s><Phi_s, rho Phi_r>, a path independent of the
    pointwise Tr(Pi rho_t) implementation.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    eig = _eig_of(h)
    V = eig.eigenvectors
    pi_tilde = V.conj().T @ rho.projection.matrix @ V
    rho_tilde = V.conj().T @ rho.matrix @ V
    K = pi_tilde * rho_tilde.T
    F = np.exp(1j * np.outer(times, eig.eigenvalues))
    vals = np.einsum("ts,ts->t", F @ K, F.conj())
    if float(np.max(np.abs(vals.imag))) > 1e-10:
        raise AssertionError("survival curve has non-real values")
    delta_h = uncertainty(rho, _matrix_of(h))
    return _curve_from_values(times, vals.real, delta_h)


def decay_derivative(rho: DensityOperator, h, t: float) -> float:
    """dP/dt at t, in the analytic commutator form i <[h, Pi]>_{rho_t}."""
    hmat = _matrix_of(h)
    Pi = rho.projection.matrix
    comm = hmat @ Pi - Pi @ hmat
    rho_t = evolve(rho, _eig_of(h), t)
    val = 1j * complex(np.trace(comm @ rho_t.matrix))
    if abs(val.imag) > 1e-9:
        raise AssertionError(f"decay derivative has imaginary part {val.imag:.3e}")
    return float(val.real)


def cross_term_decomposition(rho: DensityOperator, h, t: float):
    """Split P(t) into its diagonal and cross contributions.

    diag_part = sum_k w_k |<psi_k, U psi_k>|^2 is the weighted mixture of
    the component survival probabilities; cross_part collects the k != l
    overlap terms.  The two add up to P(t).
    """
    U = unitary_from_hamiltonian(_eig_of(h), t)
    overlaps = rho.vectors.conj().T @ U @ rho.vectors
    sq = np.abs(overlaps) ** 2
    w = rho.weights
    diag_part = float(np.sum(w * np.diag(sq)))
    cross = sq * w[None, :]
    cross_part = float(np.sum(cross) - np.sum(np.diag(cross)))
    return diag_part, cross_part


def second_derivative_at_zero(rho: DensityOperator, h) -> float:
    """-P''(0)/2, from the spectral components of rho.

    Equals sum_k w_k (Dh)^2_{psi_k} - sum_{k != l} w_l |<psi_k, h psi_l>|^2;
    for a pure state this is the variance of h.
    """
    hmat = _matrix_of(h)
    psi = rho.vectors
    h_psi = hmat @ psi
    H1 = psi.conj().T @ h_psi
    means = np.real(np.diag(H1))
    second_moments = np.sum(np.abs(h_psi) ** 2, axis=0)
    w = rho.weights
    within = float(np.sum(w * (second_moments - means**2)))
    sq = np.abs(H1) ** 2
    cross = sq * w[None, :]
    cross_sum = float(np.sum(cross) - np.sum(np.diag(cross)))
    return within - cross_sum
