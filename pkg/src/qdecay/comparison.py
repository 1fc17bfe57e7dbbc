"""Differential-inequality comparison machinery for decay curves.

In the dimensionless variable x = t * delta_h every survival probability
v satisfies v'(x) >= -2 sqrt(v (1-v)) with v(0) = 1.  The autonomous
equation y' = -2 sqrt(y (1-y)) has the one-parameter family of extremal
solutions

    z(x; shift) = 1                    for x < shift
                  cos^2(x - shift)     for shift <= x <= shift + pi/2
                  0                    for x > shift + pi/2

and the comparison theorem traps any admissible v above z(x; 0).  This
module evaluates that family, checks sampled curves against it, and
propagates strictness: once v clears the envelope at a single point, it
stays above a shifted cosine from there to pi/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InitialConditionViolation, NotStrict

# Finite-difference checks keep this distance from the kinks at shift and
# shift + pi/2, where the second derivative jumps.
KINK_EXCLUSION = 1e-3
FD_STEP = 1e-6


@dataclass
class ComparisonSample:
    """A decay curve rescaled to dimensionless time, ready for comparison.

    xs must be strictly increasing; vs must lie in [0, 1] up to roundoff.
    """

    xs: np.ndarray
    vs: np.ndarray

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.vs = np.asarray(self.vs, dtype=float)
        if self.xs.ndim != 1 or self.xs.shape != self.vs.shape:
            raise ValueError("xs and vs must be matching 1-d arrays")
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("xs must be strictly increasing")
        if np.any(self.vs < -1e-10) or np.any(self.vs > 1.0 + 1e-10):
            raise ValueError("vs must lie in [0, 1] up to roundoff")


def extremal_solution(x, shift: float = 0.0):
    """The clamped-cosine extremal solution z(x; shift).

    Accepts scalars or arrays; continuous everywhere, C^1 across the kinks.
    """
    x = np.asarray(x, dtype=float)
    u = x - shift
    out = np.where(u < 0.0, 1.0, np.where(u > np.pi / 2, 0.0, np.cos(np.clip(u, 0.0, np.pi / 2)) ** 2))
    if out.ndim == 0:
        return float(out)
    return out


def decay_ode_rhs(y: float) -> float:
    """Right-hand side -2 sqrt(y (1-y)) of the extremal decay equation.

    Inputs within 1e-12 of the boundary are clamped onto [0, 1].
    """
    if y < -1e-12 or y > 1.0 + 1e-12:
        raise DomainError(f"y = {y!r} outside [0, 1]")
    y = min(max(y, 0.0), 1.0)
    return -2.0 * np.sqrt(y * (1.0 - y))


def solution_residual(shift: float, grid) -> float:
    """Max |z' - f(z)| over the grid, z' by central differences.

    The grid must keep KINK_EXCLUSION away from the kinks at shift and
    shift + pi/2.
    """
    grid = np.asarray(grid, dtype=float)
    for kink in (shift, shift + np.pi / 2):
        if np.any(np.abs(grid - kink) < KINK_EXCLUSION):
            raise ValueError(f"grid point within {KINK_EXCLUSION} of kink at {kink}")
    worst = 0.0
    for x in grid:
        deriv = (extremal_solution(x + FD_STEP, shift) - extremal_solution(x - FD_STEP, shift)) / (2 * FD_STEP)
        worst = max(worst, abs(deriv - decay_ode_rhs(extremal_solution(x, shift))))
    return worst


@dataclass
class EnvelopeReport:
    """Margins of a sampled curve above the extremal solution z(x; 0)."""

    xs: np.ndarray
    margins: np.ndarray
    min_margin: float
    argmin_x: float
    passed: bool


def lower_envelope_check(sample: ComparisonSample, tol: float = 1e-9) -> EnvelopeReport:
    """Assert v(x) >= z(x; 0) - tol at every sample point.

    The sample must start at (0, 1); that is the initial condition the
    comparison theorem needs.
    """
    if abs(sample.xs[0]) > 1e-10 or abs(sample.vs[0] - 1.0) > 1e-10:
        raise InitialConditionViolation(
            f"sample starts at ({sample.xs[0]!r}, {sample.vs[0]!r}), not (0, 1)"
        )
    margins = sample.vs - extremal_solution(sample.xs)
    k = int(np.argmin(margins))
    return EnvelopeReport(
        xs=sample.xs,
        margins=margins,
        min_margin=float(margins[k]),
        argmin_x=float(sample.xs[k]),
        passed=bool(margins[k] >= -tol),
    )


@dataclass
class StrictnessReport:
    """Shifted-cosine floor recovered from one strictly-above point."""

    xi: float
    eta: float
    shift: float
    min_margin: float
    passed: bool


def strictness_propagation(sample: ComparisonSample, xi: float, tol: float = 1e-9) -> StrictnessReport:
    """Propagate strict excess at xi forward to pi/2.

    Reads eta = v(xi) off the sample (interpolating between grid points),
    solves cos^2(xi - shift) = eta for the shift, and checks
    v(x) >= cos^2(x - shift) - tol on all sampled x in [xi, pi/2].
    Raises NotStrict when eta does not clear cos^2(xi) + tol, in which
    case there is nothing to propagate.
    """
    if not 0.0 < xi < np.pi / 2:
        raise DomainError(f"xi = {xi!r} outside (0, pi/2)")
    eta = float(np.interp(xi, sample.xs, sample.vs))
    if eta <= np.cos(xi) ** 2 + tol:
        raise NotStrict(f"v({xi}) = {eta!r} does not exceed cos^2(xi) + {tol}")
    shift = xi - float(np.arccos(np.sqrt(min(eta, 1.0))))
    mask = (sample.xs >= xi) & (sample.xs <= np.pi / 2)
    xs = sample.xs[mask]
    margins = sample.vs[mask] - np.cos(xs - shift) ** 2
    min_margin = float(np.min(margins)) if margins.size else float("inf")
    return StrictnessReport(
        xi=xi,
        eta=eta,
        shift=shift,
        min_margin=min_margin,
        passed=bool(min_margin >= -tol),
    )
