"""The cosine decay bound, its saturation dichotomy, and passage times.

Every survival probability obeys P(t) >= cos^2(delta_h t) on the window
delta_h |t| <= pi/2 (hbar = 1 throughout).  For a state with delta_h > 0
exactly one of two things happens: the inequality is strict at every
interior time, or it is an equality for all real t.  The equality case is
decided structurally (see the intelligent module), never from curve data
alone: floating-point samples cannot tell "equal" from "within eps", the
algebraic characterization can.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .comparison import ComparisonSample
from .dynamics import DecayCurve, decay_curve, decay_derivative, _eig_of
from .errors import DomainError, InconsistentVerdict
from .intelligent import DETECTION_TOL, MixedIntelligentSpec, is_intelligent
from .states import DensityOperator, uncertainty

STATIONARY_TOL = 1e-12   # delta_h at or below this counts as zero
FLAT_CURVE_TOL = 1e-10   # max |P - 1| for the constant-curve test
EQ_TOL = 1e-9            # curve-equality tolerance for the dichotomy
BOUND_TOL = 1e-9         # margin below -this counts as a violation

STATIONARY = "Stationary"
STRICTLY_ABOVE = "StrictlyAbove"
SATURATING = "Saturating"


def fleming_bound(delta_h: float, t: float) -> float | None:
    """cos^2(delta_h t) inside the window, None outside.

    Outside delta_h |t| <= pi/2 no bound is asserted, so the honest answer
    is no value at all.  For delta_h = 0 the window is all of R and the
    bound is 1.
    """
    if delta_h < 0:
        raise DomainError(f"delta_h must be >= 0, got {delta_h!r}")
    if delta_h * abs(t) > np.pi / 2:
        return None
    return float(np.cos(delta_h * t) ** 2)


@dataclass
class BoundReport:
    """Outcome of checking one inequality over a grid.

    margins holds the per-point slack of the inequality being checked (the
    curve's own margin for the decay bound, rhs - |P'| for the derivative
    bound); violations lists (t, value, limit) wherever margin < -tol.
    """

    curve: DecayCurve
    margins: np.ndarray
    min_margin: float
    argmin_t: float
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations


def window_grid(delta_h: float, grid_points: int = 201) -> np.ndarray:
    """Uniform t grid covering the bound window, endpoints included.

    For delta_h = 0 there is no intrinsic scale; the grid spans [-1, 1].
    """
    if grid_points < 2:
        raise DomainError("grid_points must be >= 2")
    if delta_h <= STATIONARY_TOL:
        return np.linspace(-1.0, 1.0, grid_points)
    return np.linspace(-np.pi / 2, np.pi / 2, grid_points) / delta_h


def verify_fleming(
    rho: DensityOperator,
    h,
    grid_points: int = 201,
    tol: float = BOUND_TOL,
) -> BoundReport:
    """Sample P over the bound window and report margins against cos^2."""
    eig = _eig_of(h)
    times = window_grid(uncertainty(rho, eig.matrix()), grid_points)
    curve = decay_curve(rho, eig, times)
    margins = curve.margin
    k = int(np.argmin(margins))
    bad = np.flatnonzero(margins < -tol)
    violations = [(float(times[i]), float(curve.values[i]), float(curve.bound[i])) for i in bad]
    return BoundReport(curve, margins, float(margins[k]), float(times[k]), violations)


def verify_mt_inequality(
    rho: DensityOperator,
    h,
    grid=None,
    tol: float = BOUND_TOL,
) -> BoundReport:
    """Check |P'| <= 2 delta_h sqrt(P (1 - P)) pointwise on the grid.

    P' uses the analytic commutator form, not finite differences.
    """
    eig = _eig_of(h)
    delta_h = uncertainty(rho, eig.matrix())
    times = np.asarray(grid, dtype=float) if grid is not None else window_grid(delta_h)
    curve = decay_curve(rho, eig, times)
    lhs = np.array([abs(decay_derivative(rho, eig, t)) for t in times])
    rhs = 2.0 * delta_h * np.sqrt(np.maximum(curve.values * (1.0 - curve.values), 0.0))
    margins = rhs - lhs
    k = int(np.argmin(margins))
    bad = np.flatnonzero(margins < -tol)
    violations = [(float(times[i]), float(lhs[i]), float(rhs[i])) for i in bad]
    return BoundReport(curve, margins, float(margins[k]), float(times[k]), violations)


@dataclass
class DichotomyVerdict:
    """Classification of (rho, h) against the decay bound.

    witness is a (t, margin) pair documenting strict excess (StrictlyAbove
    only); structural_confirmation records the saturation detector's
    verdict (Saturating only); recovered_spec carries its reconstruction.
    """

    kind: str
    delta_h: float
    witness: tuple | None = None
    structural_confirmation: bool | None = None
    recovered_spec: MixedIntelligentSpec | None = None


def default_probe(delta_h: float, points_per_side: int = 16) -> np.ndarray:
    """Symmetric probe times with 0.05 pi/2 <= delta_h |t| <= pi/2.

    Margins shrink like t^2 toward 0, so points too close to 0 would make
    the single-point equality cross-check meaningless.
    """
    x = np.linspace(0.05 * np.pi / 2, np.pi / 2, points_per_side)
    return np.concatenate([-x[::-1], x]) / delta_h


def classify_dichotomy(
    rho: DensityOperator,
    h,
    probe=None,
    eq_tol: float = EQ_TOL,
    detection_tol: float = DETECTION_TOL,
) -> DichotomyVerdict:
    """Decide Stationary / StrictlyAbove / Saturating with witnesses.

    Saturating requires both curve equality at every probe point and the
    structural detector's confirmation.  The single-point theorem is
    exercised as a cross-check: near-equality at any one probe point must
    agree with the structural verdict, otherwise InconsistentVerdict flags
    a numerical red flag.
    """
    eig = _eig_of(h)
    delta_h = uncertainty(rho, eig.matrix())
    if delta_h <= STATIONARY_TOL:
        return DichotomyVerdict(STATIONARY, delta_h)
    times = np.asarray(probe, dtype=float) if probe is not None else default_probe(delta_h)
    if np.any(delta_h * np.abs(times) > (np.pi / 2) * (1 + 1e-12)) or np.any(times == 0.0):
        raise DomainError("probe points must satisfy 0 < delta_h |t| <= pi/2")
    curve = decay_curve(rho, eig, times)
    if float(np.max(np.abs(curve.values - 1.0))) <= FLAT_CURVE_TOL:
        return DichotomyVerdict(STATIONARY, delta_h)

    abs_margins = np.abs(curve.margin)
    equal_everywhere = bool(np.max(abs_margins) <= eq_tol)
    equal_somewhere = bool(np.min(abs_margins) <= eq_tol)
    structural, spec = is_intelligent(rho, eig, detection_tol)

    if equal_somewhere != structural or equal_somewhere != equal_everywhere:
        raise InconsistentVerdict(
            f"single-point equality ({equal_somewhere}), full-curve equality "
            f"({equal_everywhere}) and structural verdict ({structural}) disagree"
        )
    if structural:
        return DichotomyVerdict(
            SATURATING, delta_h, structural_confirmation=True, recovered_spec=spec
        )
    k = int(np.argmax(curve.margin))
    return DichotomyVerdict(
        STRICTLY_ABOVE, delta_h, witness=(float(times[k]), float(curve.margin[k]))
    )


def passage_time_lower_bound(delta_h: float, epsilon: float) -> float:
    """arccos(sqrt(epsilon)) / delta_h, the earliest time P can reach epsilon."""
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon = {epsilon!r} outside [0, 1]")
    if delta_h <= 0.0:
        raise DomainError(f"delta_h must be > 0, got {delta_h!r}")
    return float(np.arccos(np.sqrt(epsilon)) / delta_h)


# A refined local minimum counts as touching the level epsilon when it
# comes within this absolute slack; tangential crossings (epsilon = 0 in
# particular) never produce a sign change to bisect on.
TOUCH_TOL = 1e-12
_SCAN_MIN_SAMPLES = 1000
_SCAN_MAX_SAMPLES = 100_000


def find_passage_time(
    rho: DensityOperator,
    h,
    epsilon: float,
    t_max: float,
    tol_t: float = 1e-9,
):
    """Smallest t in (0, t_max] with P(t) <= epsilon, or None.

    A uniform scan (at least 1000 samples, approaching step tol_t up to a
    100000-sample cap) brackets the first crossing, which bisection then
    sharpens to tol_t.  Local minima ahead of the first crossing are
    refined by bounded minimization and accepted when they touch epsilon
    within TOUCH_TOL; that is what resolves tangential zeros, where P
    reaches the level without ever passing below it.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon = {epsilon!r} outside [0, 1]")
    if t_max <= 0.0 or tol_t <= 0.0:
        raise DomainError("t_max and tol_t must be positive")
    if epsilon >= 1.0:
        return 0.0  # P(0) = 1: every time qualifies, the infimum is 0

    eig = _eig_of(h)
    delta_h = uncertainty(rho, eig.matrix())
    n = int(max(_SCAN_MIN_SAMPLES, min(np.ceil(t_max / tol_t), _SCAN_MAX_SAMPLES)))
    times = np.linspace(0.0, t_max, n + 1)
    values = decay_curve(rho, eig, times).values

    def prob(t: float) -> float:
        return float(decay_curve(rho, eig, np.array([t])).values[0])

    below = np.flatnonzero(values[1:] <= epsilon) + 1
    first_cross = int(below[0]) if below.size else None

    result = None
    # Tangential touches can precede the first strict crossing; check grid
    # local minima in time order.  Near a touch of curvature P'' the grid
    # value exceeds epsilon by at most P'' step^2 / 2, and P'' stays below
    # 8 delta_h^2 for the curves this is meant to catch, so the filter
    # threshold (2 delta_h step)^2 has a factor-4 margin.  Refinement then
    # rejects anything that does not actually reach the level.
    step = times[1] - times[0]
    touch_filter = epsilon + max((2.0 * delta_h * step) ** 2, 1e-10)
    stop = first_cross if first_cross is not None else n + 1
    idx = np.arange(1, min(stop, n + 1))
    left_ok = values[idx] <= values[idx - 1]
    right_ok = np.where(idx < n, values[idx] <= values[np.minimum(idx + 1, n)], True)
    cand = idx[left_ok & right_ok & (values[idx] <= touch_filter)]
    for i in cand:
        res = minimize_scalar(
            prob,
            bounds=(times[i - 1], times[min(i + 1, n)]),
            method="bounded",
            options={"xatol": min(tol_t / 10.0, 1e-12)},
        )
        if res.fun <= epsilon + TOUCH_TOL:
            result = float(res.x)
            break

    if result is None and first_cross is not None:
        lo, hi = float(times[first_cross - 1]), float(times[first_cross])
        while hi - lo > tol_t:
            mid = 0.5 * (lo + hi)
            if prob(mid) <= epsilon:
                hi = mid
            else:
                lo = mid
        result = hi

    if result is not None and delta_h > 0.0:
        floor = passage_time_lower_bound(delta_h, epsilon)
        if result + tol_t < floor:
            raise AssertionError(
                f"passage time {result!r} undercuts the lower bound {floor!r}"
            )
    return result


def comparison_sample(curve: DecayCurve) -> ComparisonSample:
    """Rescale the nonnegative-time part of a curve to x = t * delta_h.

    The result feeds the differential-inequality envelope check; the curve
    must contain t = 0 so the initial condition (0, 1) is present.
    """
    mask = curve.times >= 0.0
    return ComparisonSample(curve.delta_h * curve.times[mask], curve.values[mask])
