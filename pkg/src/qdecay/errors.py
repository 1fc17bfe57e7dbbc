"""Exception types shared across the package."""


class QDecayError(Exception):
    """Base class for all library-specific errors."""


class DimensionMismatch(QDecayError, ValueError):
    """Operands have incompatible shapes, or a matrix is not square."""


class NotHermitian(QDecayError, ValueError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class ConvergenceFailure(QDecayError, RuntimeError):
    """Iterative eigensolver hit its sweep cap; carries the residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class NotPositive(QDecayError, ValueError):
    """A density matrix has an eigenvalue below the negativity tolerance."""


class TraceNotOne(QDecayError, ValueError):
    """A density matrix does not have unit trace within tolerance."""


class NegativeVariance(QDecayError, ArithmeticError):
    """A variance came out below the roundoff floor; numerical fault."""


class NotEigenvector(QDecayError, ValueError):
    """A vector fails the eigenvector residual test for the given operator."""


class DegenerateEigenvalues(QDecayError, ValueError):
    """Two eigenvalues required to be distinct coincide within tolerance."""


class EigenspaceTooSmall(QDecayError, ValueError):
    """Requested more orthonormal vectors than an eigenspace can hold."""


class InvalidWeights(QDecayError, ValueError):
    """Mixture weights are not positive or do not sum to one."""


class InconsistentVerdict(QDecayError, RuntimeError):
    """Curve equality and the structural saturation test disagree."""


class DomainError(QDecayError, ValueError):
    """Scalar argument outside its admissible range."""


class NotStrict(QDecayError, ValueError):
    """Sampled curve does not lie strictly above the cosine envelope at xi."""


class InitialConditionViolation(QDecayError, ValueError):
    """Comparison sample does not start at (0, 1)."""


class IdentityViolation(QDecayError, ArithmeticError):
    """An exact algebraic identity failed beyond roundoff; numerical fault."""
