# tests/test_coords.py

import pytest
import numpy as np

try:
    from gaussfock.coords import (
        ModeVector,
        apply_J,
        basis_vector,
        complex_inner,
        from_delta_e_coordinates,
        from_real_form,
        from_stacked,
        j_matrix,
        matrix_from_delta_e_basis,
        matrix_to_delta_e_basis,
        mode_vector,
        real_bilinear,
        real_inner,
        stacked,
        symplectic,
        to_delta_e_coordinates,
        to_real_form,
    )
    from gaussfock.errors import DimensionMismatchError, InvalidParametersError
except ImportError as e:
    pytest.fail(f"Failed to import gaussfock.coords: {e}. Ensure the package sits in the project root.")

from tests.testHelpers.fock_fixtures import random_mode_vector


# --- Inner Products ---

def test_real_inner_examples():
    """Real inner product on the worked examples."""
    assert real_inner(mode_vector(1), mode_vector(1)) == 1.0
    assert real_inner(mode_vector(1), mode_vector(1j)) == 0.0
    assert real_inner(mode_vector(1 + 2j), mode_vector(3 - 1j)) == pytest.approx(1.0)


def test_symplectic_examples():
    """Symplectic form on the worked examples, including antisymmetry."""
    assert symplectic(mode_vector(1), mode_vector(1j)) == 1.0
    assert symplectic(mode_vector(1j), mode_vector(1)) == -1.0
    assert symplectic(mode_vector(1), mode_vector(1)) == 0.0
    assert symplectic(mode_vector(1 + 2j), mode_vector(3 - 1j)) == pytest.approx(-7.0)


def test_complex_inner_is_antilinear_in_first_argument():
    """<i z, u> = -i <z, u>."""
    z, u = mode_vector([1 + 2j, 0.5]), mode_vector([0.3 - 1j, 2j])
    assert complex_inner(z.scale(1j), u) == pytest.approx(-1j * complex_inner(z, u))
    assert complex_inner(z, u.scale(1j)) == pytest.approx(1j * complex_inner(z, u))


def test_polarization_identity_random_pairs(rng):
    """<z, u> = (z, u) + i Im<z, u> across many random pairs."""
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        z = random_mode_vector(rng, n, 3.0)
        u = random_mode_vector(rng, n, 3.0)
        inner = complex_inner(z, u)
        assert abs(inner - (real_inner(z, u) + 1j * symplectic(z, u))) <= 1e-13 * max(1.0, abs(inner))


def test_mismatched_modes_raise():
    """Mode counts must agree."""
    with pytest.raises(DimensionMismatchError):
        real_inner(mode_vector([1, 2]), mode_vector([1]))
    with pytest.raises(DimensionMismatchError):
        symplectic(mode_vector([1, 2]), mode_vector([1, 2, 3]))
    with pytest.raises(DimensionMismatchError):
        mode_vector([1, 2]) + mode_vector([1])


def test_mode_vector_rejects_non_finite():
    with pytest.raises(InvalidParametersError):
        mode_vector([1.0, np.nan])
    with pytest.raises(InvalidParametersError):
        ModeVector(np.array([], dtype=complex))


# --- Complex Structure ---

def test_apply_j_examples():
    """J z = -i z; J twice is -1."""
    assert apply_J(mode_vector(1)).amplitudes[0] == -1j
    assert apply_J(mode_vector(1 + 2j)).amplitudes[0] == pytest.approx(2 - 1j)
    z = mode_vector([0.3 + 0.1j, -2j])
    np.testing.assert_allclose(apply_J(apply_J(z)).amplitudes, -z.amplitudes)


def test_j_is_isometric_and_matches_matrix(rng):
    """||Jz|| = ||z||, and j_matrix acts on stacked (x, y) like apply_J."""
    for n in (1, 2, 3):
        j = j_matrix(n)
        np.testing.assert_allclose(j @ j, -np.eye(2 * n))
        for _ in range(20):
            z = random_mode_vector(rng, n, 2.0)
            assert apply_J(z).norm() == pytest.approx(z.norm())
            np.testing.assert_allclose(j @ stacked(z), stacked(apply_J(z)), atol=1e-15)


def test_symplectic_through_j(rng):
    """Im<z, u> = (z, J u) = z^T J u on the stacked coordinates."""
    for _ in range(50):
        z = random_mode_vector(rng, 2, 2.0)
        u = random_mode_vector(rng, 2, 2.0)
        assert symplectic(z, u) == pytest.approx(real_inner(z, apply_J(u)), abs=1e-14)
        assert symplectic(z, u) == pytest.approx(real_bilinear(j_matrix(2), z, u), abs=1e-14)


def test_j_matrix_rejects_zero_modes():
    with pytest.raises(InvalidParametersError):
        j_matrix(0)


# --- Conversions ---

def test_real_form_and_stacked_round_trip():
    z = mode_vector([1 + 2j, -0.5j])
    form = to_real_form(z)
    np.testing.assert_array_equal(form.x, [1.0, 0.0])
    np.testing.assert_array_equal(form.y, [2.0, -0.5])
    np.testing.assert_array_equal(from_real_form(form).amplitudes, z.amplitudes)
    np.testing.assert_array_equal(from_stacked(stacked(z)).amplitudes, z.amplitudes)


def test_from_stacked_odd_length_raises():
    with pytest.raises(DimensionMismatchError):
        from_stacked([1.0, 2.0, 3.0])


def test_delta_e_coordinates_flip_the_imaginary_part():
    """Coordinates in the {delta, e = -i delta} basis are (x, -y)."""
    z = mode_vector(1 + 2j)
    np.testing.assert_array_equal(to_delta_e_coordinates(z), [1.0, -2.0])
    np.testing.assert_array_equal(from_delta_e_coordinates([1.0, -2.0]).amplitudes, z.amplitudes)
    assert basis_vector(1, 1, -1j).amplitudes[0] == -1j
    np.testing.assert_array_equal(to_delta_e_coordinates(basis_vector(1, 1, -1j)), [0.0, 1.0])


def test_matrix_basis_change_flips_off_diagonal_blocks():
    """P M P with P = diag(I, -I) negates the xy blocks only."""
    m = np.array([[2.0, 0.3], [0.3, 0.5]])
    stored = matrix_from_delta_e_basis(m)
    np.testing.assert_array_equal(stored, [[2.0, -0.3], [-0.3, 0.5]])
    np.testing.assert_array_equal(matrix_to_delta_e_basis(stored), m)


def test_real_bilinear_shape_mismatch_raises():
    with pytest.raises(DimensionMismatchError):
        real_bilinear(np.eye(4), mode_vector(1), mode_vector(1))


def test_basis_vector_range():
    with pytest.raises(InvalidParametersError):
        basis_vector(2, 3)
