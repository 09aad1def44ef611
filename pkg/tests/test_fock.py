# tests/test_fock.py

import math

import pytest
import numpy as np

try:
    from gaussfock.coords import mode_vector
    from gaussfock.errors import DimensionMismatchError, InvalidParametersError, TruncationError
    from gaussfock.fock import (
        DensityMatrix,
        FockSpec,
        FockVector,
        StateKind,
        apply_channel,
        build_state,
        commutator,
        density_matrix,
        displacement_residual,
        exponential_vector,
        field_commutator_residual,
        field_operator,
        field_operator_from_quadratures,
        identity,
        ladder,
        number_operator,
        quadrature_ccr_residual,
        quadratures,
        trace_pair,
        unitarity_residual,
        vacuum_vector,
        variance,
        weyl_operator,
        weyl_relation_residual,
    )
except ImportError as e:
    pytest.fail(f"Failed to import gaussfock.fock: {e}. Ensure the package sits in the project root.")

from tests.testHelpers.fock_fixtures import random_mode_vector

# entrywise agreement for p(z) sums; rounding keeps them from being bit-identical
LINEARITY_ATOL = 1e-13

SWEEP_INTERIOR = 8


# --- FockSpec ---

def test_fock_spec_validation():
    """Mode count, cutoff and total dimension are checked."""
    with pytest.raises(InvalidParametersError):
        FockSpec(0, 10)
    with pytest.raises(InvalidParametersError):
        FockSpec(1, 1)
    with pytest.raises(TruncationError):
        FockSpec(2, 1001)
    assert FockSpec(3, 10).dim == 1000


def test_basis_order_is_row_major():
    """Mode 1 is the slowest index."""
    occ = FockSpec(2, 3).occupations()
    np.testing.assert_array_equal(occ[1], [0, 1])
    np.testing.assert_array_equal(occ[3], [1, 0])
    np.testing.assert_array_equal(occ[-1], [2, 2])


def test_interior_mask_bounds():
    spec = FockSpec(1, 10)
    assert spec.interior_mask().sum() == 5
    assert spec.interior_mask(3).sum() == 3
    with pytest.raises(InvalidParametersError):
        spec.interior_mask(0)


# --- Ladder and Quadratures ---

def test_ladder_action_and_truncated_commutator():
    """a|k> = sqrt(k)|k-1>; [a, a^dag] = I except at the top level."""
    spec = FockSpec(1, 6)
    a, a_dag = ladder(spec, 1)
    basis = np.eye(6)
    np.testing.assert_allclose(a.matrix @ basis[3], math.sqrt(3) * basis[2])
    np.testing.assert_allclose(a_dag.matrix @ basis[2], math.sqrt(3) * basis[3])
    comm = commutator(a, a_dag).matrix
    np.testing.assert_allclose(np.diag(comm)[:-1], np.ones(5))
    assert comm[-1, -1] == pytest.approx(-(spec.d - 1))


def test_ladder_rejects_bad_mode():
    with pytest.raises(InvalidParametersError):
        ladder(FockSpec(2, 4), 3)


def test_quadratures_are_hermitian_and_satisfy_ccr(two_mode_spec):
    """[q_j, p_k] = i delta_jk on the interior block."""
    q, p = quadratures(two_mode_spec, 2)
    np.testing.assert_allclose(q.matrix, q.matrix.conj().T)
    np.testing.assert_allclose(p.matrix, p.matrix.conj().T)
    assert quadrature_ccr_residual(two_mode_spec) <= 1e-12


def test_number_operator_diagonal():
    spec = FockSpec(2, 3)
    n2 = number_operator(spec, 2).matrix
    np.testing.assert_allclose(np.diag(n2).real, spec.occupations()[:, 1])


# --- Field Operators ---

def test_field_operator_forms_agree(two_mode_spec, rng):
    """i sum (z a^dag - conj(z) a) = sqrt2 sum (x p - y q)."""
    for _ in range(10):
        z = random_mode_vector(rng, 2, 1.0)
        np.testing.assert_allclose(
            field_operator(two_mode_spec, z).matrix,
            field_operator_from_quadratures(two_mode_spec, z).matrix,
            atol=1e-13,
        )


def test_field_operator_is_real_linear(spec_30, rng):
    """p(z + u) = p(z) + p(u) and p(t z) = t p(z) for real t, entrywise within 1e-13."""
    z = random_mode_vector(rng, 1, 1.0)
    u = random_mode_vector(rng, 1, 1.0)
    np.testing.assert_allclose(
        field_operator(spec_30, z + u).matrix,
        (field_operator(spec_30, z) + field_operator(spec_30, u)).matrix,
        rtol=0, atol=LINEARITY_ATOL,
    )
    np.testing.assert_allclose(
        field_operator(spec_30, z.scale(-2.5)).matrix,
        field_operator(spec_30, z).scale(-2.5).matrix,
        rtol=0, atol=LINEARITY_ATOL,
    )


def test_field_commutator_two_modes(two_mode_spec, rng):
    """[p(z), p(u)] = 2i Im<z,u> I on the interior block."""
    for _ in range(20):
        z = random_mode_vector(rng, 2, 0.75)
        u = random_mode_vector(rng, 2, 0.75)
        assert field_commutator_residual(two_mode_spec, z, u) <= 1e-10


def test_field_operator_mode_mismatch(spec_30):
    with pytest.raises(DimensionMismatchError):
        field_operator(spec_30, mode_vector([1, 2]))


# --- Exponential Vectors ---

def test_exponential_vector_inner_products(spec_30, rng):
    """<eps_z, eps_u> = exp(<z, u>) for small amplitudes."""
    for _ in range(20):
        z = random_mode_vector(rng, 1, 0.75)
        u = random_mode_vector(rng, 1, 0.75)
        lhs = exponential_vector(spec_30, z).inner(exponential_vector(spec_30, u))
        rhs = np.exp(np.vdot(z.amplitudes, u.amplitudes))
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


def test_exponential_vector_of_zero_is_vacuum(spec_30):
    coeffs = vacuum_vector(spec_30).coefficients
    assert coeffs[0] == 1.0
    assert np.all(coeffs[1:] == 0)


def test_exponential_vector_cutoff_too_small():
    """|z_j|^2 / d above 0.5 is rejected."""
    with pytest.raises(TruncationError):
        exponential_vector(FockSpec(1, 4), mode_vector(2.0))


def test_normalized_exponential_vector_has_unit_norm(spec_30):
    v = exponential_vector(spec_30, mode_vector(0.5 + 0.5j), normalized=True)
    assert v.inner(v).real == pytest.approx(1.0, abs=1e-14)


# --- Weyl Operators ---

def test_weyl_ccr_sweep(spec_40, rng):
    """W_z W_u = exp(-i Im<z,u>) W_{z+u} on the interior block for 200 random pairs."""
    worst = 0.0
    for _ in range(200):
        z = random_mode_vector(rng, 1, 0.75)
        u = random_mode_vector(rng, 1, 0.75)
        worst = max(worst, weyl_relation_residual(spec_40, z, u, interior=SWEEP_INTERIOR))
    assert worst <= 1e-8


def test_weyl_displacement_sweep(spec_40, rng):
    """W_z eps_u = exp(-|z|^2/2 - <z,u>) eps_{z+u} on interior coefficients."""
    worst = 0.0
    for _ in range(200):
        z = random_mode_vector(rng, 1, 0.75)
        u = random_mode_vector(rng, 1, 0.75)
        worst = max(worst, displacement_residual(spec_40, z, u, interior=SWEEP_INTERIOR))
    assert worst <= 1e-8


def test_weyl_ccr_two_modes_small_amplitudes(two_mode_spec, rng):
    """Two modes at d=12 hold the Weyl relation for small displacements near the vacuum."""
    for _ in range(20):
        z = random_mode_vector(rng, 2, 0.3)
        u = random_mode_vector(rng, 2, 0.3)
        assert weyl_relation_residual(two_mode_spec, z, u, interior=2) <= 1e-8


def test_weyl_operator_is_unitary(spec_40, rng):
    """W_z^dag W_z = I, W_0 = I and W_z^dag = W_{-z}."""
    z = random_mode_vector(rng, 1, 0.75)
    w = weyl_operator(spec_40, z)
    assert unitarity_residual(w, interior=spec_40.d) <= 1e-12
    np.testing.assert_allclose(weyl_operator(spec_40, mode_vector(0)).matrix, identity(spec_40).matrix, atol=1e-15)
    np.testing.assert_allclose(w.dagger().matrix, weyl_operator(spec_40, -z).matrix, atol=1e-12)


def test_weyl_vacuum_expectation(spec_30):
    """<0|W_z|0> = exp(-|z|^2/2)."""
    for z in (0.5, 0.3j, 0.4 - 0.4j):
        w = weyl_operator(spec_30, mode_vector(z)).matrix
        assert w[0, 0] == pytest.approx(math.exp(-0.5 * abs(z) ** 2), abs=1e-12)


def test_weyl_operator_cutoff_too_small():
    """||z||^2 above d/4 is rejected."""
    with pytest.raises(TruncationError):
        weyl_operator(FockSpec(1, 8), mode_vector(1.5))


# --- State Builders ---

def test_vacuum_state(vacuum_state):
    rho, _ = vacuum_state
    assert rho.matrix[0, 0] == pytest.approx(1.0)
    assert rho.leakage == pytest.approx(0.0, abs=1e-15)


def test_coherent_state_amplitude(coherent_state):
    """tr(rho a) = alpha for W_alpha |0>."""
    rho, _ = coherent_state
    a, _ = ladder(rho.spec, 1)
    assert trace_pair(rho, a) == pytest.approx(0.5, abs=1e-10)
    assert rho.leakage <= 1e-12


def test_thermal_state_occupation(thermal_one_state):
    """Geometric populations with mean N-bar."""
    rho, _ = thermal_one_state
    diag = np.real(np.diag(rho.matrix))
    assert diag[1] / diag[0] == pytest.approx(0.5)
    assert trace_pair(rho, number_operator(rho.spec, 1)).real == pytest.approx(1.0, abs=1e-9)


def test_squeezed_state_variances(squeezed_state):
    """r = 0.5, phi = 0: Var(q) = e^{-1}/2, Var(p) = e/2, <n> = sinh(r)^2."""
    rho, _ = squeezed_state
    q, p = quadratures(rho.spec, 1)
    assert variance(rho, q) == pytest.approx(0.5 * math.exp(-1.0), abs=1e-9)
    assert variance(rho, p) == pytest.approx(0.5 * math.e, abs=1e-9)
    assert trace_pair(rho, number_operator(rho.spec, 1)).real == pytest.approx(math.sinh(0.5) ** 2, abs=1e-9)


def test_build_state_rejects_bad_parameters(spec_30):
    with pytest.raises(InvalidParametersError):
        build_state(spec_30, StateKind.thermal(-1.0))
    with pytest.raises(InvalidParametersError):
        build_state(spec_30, StateKind.squeezed(-0.1))
    with pytest.raises(InvalidParametersError):
        StateKind("cat")


def test_build_state_cutoff_too_small():
    with pytest.raises(TruncationError):
        build_state(FockSpec(1, 8), StateKind.squeezed(1.0))
    with pytest.raises(TruncationError):
        build_state(FockSpec(1, 8), StateKind.coherent(3.0))


def test_per_mode_parameters_must_match_modes(two_mode_spec):
    with pytest.raises(DimensionMismatchError):
        build_state(two_mode_spec, StateKind.thermal([0.5, 0.5, 0.5]))


def test_density_matrix_validation():
    spec = FockSpec(1, 2)
    with pytest.raises(InvalidParametersError):
        DensityMatrix(spec, np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(InvalidParametersError):
        DensityMatrix(spec, np.diag([1.0, 1.0]))
    with pytest.raises(InvalidParametersError):
        DensityMatrix(spec, np.diag([1.5, -0.5]))
    with pytest.raises(DimensionMismatchError):
        DensityMatrix(spec, np.eye(3) / 3)


def test_density_matrix_records_leakage():
    """Weight on the top level is reported, and the trace is renormalized."""
    spec = FockSpec(1, 3)
    rho = density_matrix(spec, np.diag([0.5, 0.4, 0.1]))
    assert rho.leakage == pytest.approx(0.1)

    scaled = density_matrix(spec, np.diag([0.5, 0.3, 0.1]))
    assert np.trace(scaled.matrix).real == pytest.approx(1.0)
    assert scaled.leakage == pytest.approx(0.1 / 0.9)


def test_apply_channel_shifts_the_amplitude(vacuum_state):
    """W_u |0><0| W_u^dag is the coherent state with amplitude u."""
    rho, _ = vacuum_state
    shifted = apply_channel(rho, mode_vector(0.3j))
    a, _ = ladder(rho.spec, 1)
    assert trace_pair(shifted, a) == pytest.approx(0.3j, abs=1e-10)


def test_fock_vector_dimension_check():
    with pytest.raises(DimensionMismatchError):
        FockVector(FockSpec(1, 4), np.ones(5))


# --- Worked Examples ---

def test_ladder_and_quadrature_small_matrices():
    """d=3 annihilation matrix and d=2 position matrix."""
    a, _ = ladder(FockSpec(1, 3), 1)
    np.testing.assert_allclose(a.matrix, [[0, 1, 0], [0, 0, math.sqrt(2)], [0, 0, 0]])
    q, _ = quadratures(FockSpec(1, 2), 1)
    np.testing.assert_allclose(q.matrix, [[0, 1 / math.sqrt(2)], [1 / math.sqrt(2), 0]])


def test_field_operator_on_basis_vectors(two_mode_spec):
    """p(delta_j) = sqrt2 p_j and p(i delta_j) = -sqrt2 q_j."""
    q2, p2 = quadratures(two_mode_spec, 2)
    np.testing.assert_allclose(field_operator(two_mode_spec, mode_vector([0, 1])).matrix, math.sqrt(2) * p2.matrix, atol=1e-13)
    np.testing.assert_allclose(field_operator(two_mode_spec, mode_vector([0, 1j])).matrix, -math.sqrt(2) * q2.matrix, atol=1e-13)


def test_exponential_vector_norm_is_e():
    """<eps_1, eps_1> = <eps_i, eps_i> = e at d=40."""
    spec = FockSpec(1, 40)
    for z in (1.0, 1j):
        v = exponential_vector(spec, mode_vector(z))
        assert v.inner(v).real == pytest.approx(math.e, abs=1e-10)


def test_weyl_vacuum_element_at_unit_amplitude(spec_30):
    w = weyl_operator(spec_30, mode_vector(1.0)).matrix
    assert w[0, 0].real == pytest.approx(math.exp(-0.5), abs=1e-9)


def test_weyl_relation_trivial_cases(spec_40):
    """Zero arguments and z = u leave no residual."""
    z = mode_vector(0.5)
    assert weyl_relation_residual(spec_40, z, mode_vector(0)) <= 1e-12
    assert weyl_relation_residual(spec_40, mode_vector(0), z) <= 1e-12
    assert weyl_relation_residual(spec_40, z, z) <= 1e-10
    assert weyl_relation_residual(spec_40, z, mode_vector(0.5j), interior=SWEEP_INTERIOR) <= 1e-8


def test_coherent_position_mean(coherent_state):
    """<q> = sqrt2 Re(alpha)."""
    rho, _ = coherent_state
    q, p = quadratures(rho.spec, 1)
    assert trace_pair(rho, q).real == pytest.approx(math.sqrt(2) * 0.5, abs=1e-8)
    assert abs(trace_pair(rho, p)) <= 1e-10


def test_thermal_occupation_at_cutoff_30():
    """N-bar = 1 at d=30 and N-bar = 0.5 at d=40."""
    rho = build_state(FockSpec(1, 30), StateKind.thermal(1.0))
    assert trace_pair(rho, number_operator(rho.spec, 1)).real == pytest.approx(1.0, abs=1e-6)
    rho = build_state(FockSpec(1, 40), StateKind.thermal(0.5))
    assert trace_pair(rho, number_operator(rho.spec, 1)).real == pytest.approx(0.5, abs=1e-6)
    assert trace_pair(rho, identity(rho.spec)) == pytest.approx(1.0)
