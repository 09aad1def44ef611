# coords.py - Complex mode vectors and their real-Hilbert-space view (x, y)

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from gaussfock.errors import DimensionMismatchError, InvalidParametersError

# Real (2n)x(2n) matrices act on stacked (x, y) blocks; S and the matrix of J use this.
RealMatrix2n = NDArray[np.float64]

SYMMETRY_TOL = 1e-12


# --- Domain Types ---

@dataclass(frozen=True, eq=False)
class ModeVector:
    """
    A complex amplitude vector z = x + iy over n modes.

    Inner products are antilinear in the FIRST argument: <z, u> = sum conj(z_j) u_j.
    """
    amplitudes: NDArray[np.complex128]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size < 1:
            raise InvalidParametersError("A ModeVector needs at least one mode.")
        if not np.all(np.isfinite(amps)):
            raise InvalidParametersError(f"ModeVector amplitudes must be finite, got {amps}.")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n(self) -> int:
        return int(self.amplitudes.size)

    def __add__(self, other: "ModeVector") -> "ModeVector":
        _check_same_modes(self, other)
        return ModeVector(self.amplitudes + other.amplitudes)

    def __neg__(self) -> "ModeVector":
        return ModeVector(-self.amplitudes)

    def __sub__(self, other: "ModeVector") -> "ModeVector":
        return self + (-other)

    def scale(self, factor: complex) -> "ModeVector":
        return ModeVector(complex(factor) * self.amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class RealForm:
    """
    Storage view of a ModeVector: z = x + iy, stored in (x, y) block order.

    The basis {delta_j, e_j = -i delta_j} has coordinates (x_j, -y_j); see
    to_delta_e_coordinates / from_delta_e_coordinates.
    """
    x: NDArray[np.float64]
    y: NDArray[np.float64]

    def stacked(self) -> NDArray[np.float64]:
        return np.concatenate([self.x, self.y])


# --- Constructors and Conversions ---

def mode_vector(values) -> ModeVector:
    """Builds a ModeVector from a scalar or any sequence of complex numbers."""
    return ModeVector(np.atleast_1d(np.asarray(values, dtype=np.complex128)))


def basis_vector(n: int, j: int, coefficient: complex = 1.0) -> ModeVector:
    """coefficient * delta_j for 1 <= j <= n (modes are 1-indexed)."""
    if not 1 <= j <= n:
        raise InvalidParametersError(f"Mode index {j} out of range 1..{n}.")
    amps = np.zeros(n, dtype=np.complex128)
    amps[j - 1] = coefficient
    return ModeVector(amps)


def to_real_form(z: ModeVector) -> RealForm:
    return RealForm(x=z.amplitudes.real.copy(), y=z.amplitudes.imag.copy())


def from_real_form(form: RealForm) -> ModeVector:
    if np.shape(form.x) != np.shape(form.y):
        raise DimensionMismatchError(f"x and y blocks differ in length: {np.shape(form.x)} vs {np.shape(form.y)}.")
    return ModeVector(np.asarray(form.x, dtype=float) + 1j * np.asarray(form.y, dtype=float))


def stacked(z: ModeVector) -> NDArray[np.float64]:
    """The (x, y) column used with RealMatrix2n."""
    return np.concatenate([z.amplitudes.real, z.amplitudes.imag])


def from_stacked(r) -> ModeVector:
    r = np.asarray(r, dtype=float).reshape(-1)
    if r.size % 2:
        raise DimensionMismatchError(f"A stacked real vector needs even length, got {r.size}.")
    n = r.size // 2
    return ModeVector(r[:n] + 1j * r[n:])


def to_delta_e_coordinates(z: ModeVector) -> NDArray[np.float64]:
    """Coordinates in the {delta_j, e_j} basis: (x, -y)."""
    return np.concatenate([z.amplitudes.real, -z.amplitudes.imag])


def from_delta_e_coordinates(coefficients) -> ModeVector:
    c = np.asarray(coefficients, dtype=float).reshape(-1)
    if c.size % 2:
        raise DimensionMismatchError(f"Coordinates in the {{delta, e}} basis need even length, got {c.size}.")
    n = c.size // 2
    return ModeVector(c[:n] - 1j * c[n:])


def delta_e_basis_change(n: int) -> RealMatrix2n:
    """
    The involution diag(I, -I) between (x, y) storage and {delta, e} coordinates.

    A real matrix M_delta_e in the {delta, e} basis is stored as P @ M_delta_e @ P.
    """
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)]))


def matrix_from_delta_e_basis(m_delta_e) -> RealMatrix2n:
    m_delta_e = np.asarray(m_delta_e, dtype=float)
    p = delta_e_basis_change(m_delta_e.shape[0] // 2)
    return p @ m_delta_e @ p


def matrix_to_delta_e_basis(m_storage) -> RealMatrix2n:
    # P is its own inverse
    return matrix_from_delta_e_basis(m_storage)


# --- Inner Products and the Complex Structure ---

def _check_same_modes(z: ModeVector, u: ModeVector):
    if z.n != u.n:
        raise DimensionMismatchError(f"Mode counts differ: {z.n} vs {u.n}.")


def complex_inner(z: ModeVector, u: ModeVector) -> complex:
    """<z, u>, antilinear in z."""
    _check_same_modes(z, u)
    return complex(np.vdot(z.amplitudes, u.amplitudes))


def real_inner(z: ModeVector, u: ModeVector) -> float:
    """
    The real inner product (z, u) = Re<z, u> = x.x' + y.y'.

    Args:
        z, u (ModeVector): Vectors with the same mode count.

    Returns:
        float: Re<z, u>.

    Raises:
        DimensionMismatchError: If the mode counts differ.
    """
    _check_same_modes(z, u)
    return float(np.dot(stacked(z), stacked(u)))


def symplectic(z: ModeVector, u: ModeVector) -> float:
    """
    The symplectic form Im<z, u> = x.y' - y.x'; antisymmetric in (z, u).

    Raises:
        DimensionMismatchError: If the mode counts differ.
    """
    _check_same_modes(z, u)
    x, y = z.amplitudes.real, z.amplitudes.imag
    xp, yp = u.amplitudes.real, u.amplitudes.imag
    return float(np.dot(x, yp) - np.dot(y, xp))


def apply_J(z: ModeVector) -> ModeVector:
    """J z = -i z; on (x, y) this is (y, -x)."""
    return ModeVector(-1j * z.amplitudes)


def j_matrix(n: int) -> RealMatrix2n:
    """Real representation [[0, I], [-I, 0]] of multiplication by -i."""
    if n < 1:
        raise InvalidParametersError(f"Mode count must be >= 1, got {n}.")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


# --- Real Matrices on (x, y) ---

def check_real_matrix(m, n: int, symmetric: bool = False) -> RealMatrix2n:
    """Validates shape (2n, 2n), finiteness and (optionally) symmetry; returns a float copy."""
    m = np.array(m, dtype=float)
    if m.shape != (2 * n, 2 * n):
        raise DimensionMismatchError(f"Expected a ({2 * n}, {2 * n}) real matrix, got {m.shape}.")
    if not np.all(np.isfinite(m)):
        raise InvalidParametersError("Real matrix entries must be finite.")
    if symmetric:
        asym = float(np.max(np.abs(m - m.T)))
        if asym > SYMMETRY_TOL:
            raise InvalidParametersError(f"Matrix is not symmetric: max |M - M^T| = {asym:.3e}.")
    return m


def real_bilinear(m: RealMatrix2n, z: ModeVector, u: ModeVector) -> float:
    """(z, M u) for a real matrix M acting on (x, y) storage."""
    _check_same_modes(z, u)
    m = np.asarray(m, dtype=float)
    if m.shape != (2 * z.n, 2 * z.n):
        raise DimensionMismatchError(f"Matrix shape {m.shape} does not match {z.n} modes.")
    return float(stacked(z) @ m @ stacked(u))
