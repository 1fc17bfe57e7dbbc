"""Survival-probability decay of quantum states on finite-dimensional
Hilbert spaces.

The package computes decay functions P(t) = Tr(Pi exp(-iht) rho exp(iht))
for pure and mixed states, verifies the cosine lower bound
P(t) >= cos^2(delta_h t) on the window delta_h |t| <= pi/2, classifies
states by the saturation dichotomy, and constructs/detects the exact
family of bound-saturating ("intelligent") states.  Units: hbar = 1.
"""

from .bounds import (
    BoundReport,
    DichotomyVerdict,
    SATURATING,
    STATIONARY,
    STRICTLY_ABOVE,
    classify_dichotomy,
    comparison_sample,
    find_passage_time,
    fleming_bound,
    passage_time_lower_bound,
    verify_fleming,
    verify_mt_inequality,
    window_grid,
)
from .comparison import (
    ComparisonSample,
    EnvelopeReport,
    StrictnessReport,
    decay_ode_rhs,
    extremal_solution,
    lower_envelope_check,
    solution_residual,
    strictness_propagation,
)
from .dynamics import (
    DecayCurve,
    PureSpectralRep,
    cross_term_decomposition,
    decay_curve,
    decay_derivative,
    evolve,
    pure_spectral_rep,
    second_derivative_at_zero,
    spectral_rep_eval,
    survival_amplitude,
    survival_probability_mixed,
    survival_probability_pure,
)
from .ensembles import random_density, random_hamiltonian, random_instance, random_unitary
from .intelligent import (
    MixedIntelligentSpec,
    VarianceMixing,
    construct_mixed_intelligent,
    construct_pure_intelligent,
    is_intelligent,
    variance_mixing,
)
from .linalg import (
    HermitianEigen,
    adjoint,
    eigenspace_partition,
    hermitian_eig,
    matmul,
    trace,
    unitary_from_hamiltonian,
)
from .states import (
    DensityOperator,
    Projector,
    expectation,
    pure_density,
    range_projection,
    uncertainty,
    validate_density,
    variance,
)

__version__ = "0.1.0"
