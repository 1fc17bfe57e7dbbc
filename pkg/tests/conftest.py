import numpy as np
import pytest

from qdecay import MixedIntelligentSpec, construct_mixed_intelligent, pure_density


@pytest.fixture
def two_level_h():
    """h = diag(0, 2): the canonical two-level Hamiltonian, delta_h = 1
    for the balanced superposition."""
    return np.diag([0.0, 2.0]).astype(complex)


@pytest.fixture
def balanced_phi():
    """(e1 + e2)/sqrt(2), the pure bound-saturating state for diag(0, 2)."""
    return np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)


@pytest.fixture
def balanced_rho(balanced_phi):
    return pure_density(balanced_phi)


@pytest.fixture
def mixed_intelligent_4d():
    """Canonical dim-4 mixed intelligent state: h = diag(0,0,2,2),
    components (e1+e3)/sqrt(2) and (e2+e4)/sqrt(2), weights (1/2, 1/2)."""
    h = np.diag([0.0, 0.0, 2.0, 2.0]).astype(complex)
    e = np.eye(4, dtype=complex)
    spec = MixedIntelligentSpec(
        dim=4,
        omega1=0.0,
        omega2=2.0,
        weights=np.array([0.5, 0.5]),
        basis1=e[:, :2],
        basis2=e[:, 2:],
    )
    return construct_mixed_intelligent(spec, h), h
