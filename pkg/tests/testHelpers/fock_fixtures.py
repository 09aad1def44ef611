# tests/testHelpers/fock_fixtures.py
import pytest
import numpy as np

from gaussfock.coords import ModeVector, mode_vector
from gaussfock.fock import FockSpec, StateKind, build_state
from gaussfock.gaussian import squeezed_params, thermal_params, vacuum_params, coherent_channel

# --- Specs ---

@pytest.fixture(scope="session")
def spec_30():
    """One mode, 30 levels: enough for vacuum and coherent(0.5)."""
    return FockSpec(1, 30)

@pytest.fixture(scope="session")
def spec_40():
    """One mode, 40 levels: thermal and squeezed fixtures need the extra room."""
    return FockSpec(1, 40)

@pytest.fixture(scope="session")
def two_mode_spec():
    return FockSpec(2, 12)


# --- Fixture States (state, analytic params) ---

@pytest.fixture(scope="session")
def vacuum_state(spec_30):
    return build_state(spec_30, StateKind.vacuum()), vacuum_params(1)

@pytest.fixture(scope="session")
def coherent_state(spec_30):
    alpha = mode_vector(0.5)
    return build_state(spec_30, StateKind.coherent(alpha)), coherent_channel(vacuum_params(1), alpha)

@pytest.fixture(scope="session")
def thermal_half_state(spec_40):
    return build_state(spec_40, StateKind.thermal(0.5)), thermal_params(0.5)

@pytest.fixture(scope="session")
def thermal_one_state(spec_40):
    return build_state(spec_40, StateKind.thermal(1.0)), thermal_params(1.0)

@pytest.fixture(scope="session")
def squeezed_state(spec_40):
    return build_state(spec_40, StateKind.squeezed(0.5)), squeezed_params(0.5)

@pytest.fixture(scope="session")
def two_mode_vacuum_state(two_mode_spec):
    return build_state(two_mode_spec, StateKind.vacuum()), vacuum_params(2)

@pytest.fixture(scope="session")
def two_mode_coherent_state(two_mode_spec):
    """alpha = (0.5, 0.3i), so w = (-i, 0.6)."""
    alpha = mode_vector([0.5, 0.3j])
    return build_state(two_mode_spec, StateKind.coherent(alpha)), coherent_channel(vacuum_params(2), alpha)

@pytest.fixture(scope="session")
def two_mode_thermal_state(two_mode_spec):
    return build_state(two_mode_spec, StateKind.thermal([0.5, 0.5])), thermal_params([0.5, 0.5])


# --- Random Helpers ---

@pytest.fixture(scope="function")
def rng():
    """Fresh seeded generator per test so sweeps are reproducible."""
    return np.random.default_rng(20240611)


def random_mode_vector(rng, n, radius):
    """Isotropic direction, norm drawn uniformly from [0, radius]."""
    v = rng.normal(size=2 * n)
    v *= radius * rng.uniform() / np.linalg.norm(v)
    return ModeVector(v[:n] + 1j * v[n:])


def random_density(rng, dim):
    """Full-rank random density matrix G G^dag / tr."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, dim, spectral_radius):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = 0.5 * (x + x.conj().T)
    return h * (spectral_radius / np.max(np.abs(np.linalg.eigvalsh(h))))


def random_normal(rng, dim, max_modulus):
    """U diag(lambda) U^dag with complex eigenvalues of modulus <= max_modulus."""
    u = random_unitary(rng, dim)
    lam = max_modulus * np.sqrt(rng.uniform(size=dim)) * np.exp(2j * np.pi * rng.uniform(size=dim))
    return (u * lam) @ u.conj().T
