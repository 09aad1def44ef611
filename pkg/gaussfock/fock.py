# fock.py - Truncated n-mode Fock space: ladder, field and Weyl operators, exponential
# vectors and density-matrix state builders (dense matrices)

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from gaussfock.coords import ModeVector, complex_inner, mode_vector, symplectic
from gaussfock.errors import DimensionMismatchError, InvalidParametersError, TruncationError

# --- Configuration ---
MAX_DIMENSION = 10**6           # largest accepted D = d**n
HERMITIAN_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
TRACE_TOL = 1e-10
EXPONENTIAL_SANITY = 0.5        # per mode |z_j|^2 / d
WEYL_SANITY = 0.25              # ||z||^2 / d
SQUEEZE_SANITY = 0.125          # per mode sinh(r)^2 / d

STATE_KINDS = ("vacuum", "coherent", "thermal", "squeezed")


# --- Domain Types ---

@dataclass(frozen=True)
class FockSpec:
    """n modes, d number levels (0..d-1) per mode; basis ordered row-major, k_1 slowest."""
    n: int
    d: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParametersError(f"Mode count must be >= 1, got {self.n}.")
        if self.d < 2:
            raise InvalidParametersError(f"Cutoff must be >= 2, got {self.d}.")
        if self.d ** self.n > MAX_DIMENSION:
            raise TruncationError(f"Fock dimension {self.d}**{self.n} exceeds the budget {MAX_DIMENSION}.")

    @property
    def dim(self) -> int:
        return self.d ** self.n

    def occupations(self) -> NDArray[np.int64]:
        """(D, n) table of occupation tuples in basis order."""
        return np.array(list(itertools.product(range(self.d), repeat=self.n)), dtype=np.int64).reshape(self.dim, self.n)

    def interior_mask(self, interior: Optional[int] = None) -> NDArray[np.bool_]:
        """Basis states with every mode occupation < interior (default d // 2)."""
        bound = self.d // 2 if interior is None else int(interior)
        if not 1 <= bound <= self.d:
            raise InvalidParametersError(f"Interior bound must lie in 1..{self.d}, got {bound}.")
        return np.all(self.occupations() < bound, axis=1)


@dataclass(frozen=True, eq=False)
class FockOperator:
    spec: FockSpec
    matrix: NDArray[np.complex128]
    hermitian_hint: Optional[bool] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (self.spec.dim, self.spec.dim):
            raise DimensionMismatchError(f"Operator shape {m.shape} does not match Fock dimension {self.spec.dim}.")
        if self.hermitian_hint:
            herm = float(np.max(np.abs(m - m.conj().T)))
            if herm > HERMITIAN_TOL:
                raise InvalidParametersError(f"Operator flagged Hermitian but max |M - M^dag| = {herm:.3e}.")
        object.__setattr__(self, "matrix", m)

    def dagger(self) -> "FockOperator":
        return FockOperator(self.spec, self.matrix.conj().T, self.hermitian_hint)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        _check_same_spec(self.spec, other.spec)
        hint = bool(self.hermitian_hint and other.hermitian_hint) or None
        return FockOperator(self.spec, self.matrix + other.matrix, hint)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        _check_same_spec(self.spec, other.spec)
        hint = bool(self.hermitian_hint and other.hermitian_hint) or None
        return FockOperator(self.spec, self.matrix - other.matrix, hint)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        _check_same_spec(self.spec, other.spec)
        return FockOperator(self.spec, self.matrix @ other.matrix)

    def scale(self, factor: complex) -> "FockOperator":
        hint = True if (self.hermitian_hint and np.isreal(factor)) else None
        return FockOperator(self.spec, complex(factor) * self.matrix, hint)

    def power(self, k: int) -> "FockOperator":
        return FockOperator(self.spec, np.linalg.matrix_power(self.matrix, k), self.hermitian_hint)


@dataclass(frozen=True, eq=False)
class FockVector:
    spec: FockSpec
    coefficients: NDArray[np.complex128]

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128).reshape(-1)
        if c.size != self.spec.dim:
            raise DimensionMismatchError(f"Vector length {c.size} does not match Fock dimension {self.spec.dim}.")
        if not np.all(np.isfinite(c)):
            raise InvalidParametersError("FockVector coefficients must be finite.")
        object.__setattr__(self, "coefficients", c)

    def inner(self, other: "FockVector") -> complex:
        _check_same_spec(self.spec, other.spec)
        return complex(np.vdot(self.coefficients, other.coefficients))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A unit-trace positive state; leakage records the truncation defect found at construction."""
    spec: FockSpec
    matrix: NDArray[np.complex128]
    leakage: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (self.spec.dim, self.spec.dim):
            raise DimensionMismatchError(f"Density matrix shape {m.shape} does not match Fock dimension {self.spec.dim}.")
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > HERMITIAN_TOL:
            raise InvalidParametersError(f"Density matrix is not Hermitian: max |M - M^dag| = {herm:.3e}.")
        min_eig = float(np.min(linalg.eigvalsh(m)))
        if min_eig < EIGENVALUE_FLOOR:
            raise InvalidParametersError(f"Density matrix has a negative eigenvalue {min_eig:.3e}.")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidParametersError(f"Density matrix trace {tr:.12f} is not 1.")
        object.__setattr__(self, "matrix", m)


def _check_same_spec(a: FockSpec, b: FockSpec):
    if a != b:
        raise DimensionMismatchError(f"Fock specs differ: {a} vs {b}.")


def _check_modes(spec: FockSpec, z: ModeVector):
    if z.n != spec.n:
        raise DimensionMismatchError(f"Vector has {z.n} modes but the Fock space has {spec.n}.")


# --- Ladder, Quadrature and Field Operators ---

def _single_mode_annihilation(d: int) -> NDArray[np.float64]:
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1)


def _embed(spec: FockSpec, j: int, single: NDArray) -> NDArray[np.complex128]:
    """single acting on mode j (1-indexed), identity elsewhere; mode 1 is the slowest factor."""
    out = np.ones((1, 1), dtype=np.complex128)
    eye = np.eye(spec.d)
    for mode in range(1, spec.n + 1):
        out = np.kron(out, single if mode == j else eye)
    return out


def _check_mode_index(spec: FockSpec, j: int):
    if not 1 <= j <= spec.n:
        raise InvalidParametersError(f"Mode {j} out of range 1..{spec.n}.")


def ladder(spec: FockSpec, j: int) -> tuple[FockOperator, FockOperator]:
    """
    Annihilation and creation operators (a_j, a_j^dag) on the truncated space.

    a|k> = sqrt(k)|k-1>; [a_j, a_k^dag] = delta_jk I holds on levels 0..d-2 only.
    """
    _check_mode_index(spec, j)
    a = _embed(spec, j, _single_mode_annihilation(spec.d))
    return FockOperator(spec, a), FockOperator(spec, a.conj().T)


def quadratures(spec: FockSpec, j: int) -> tuple[FockOperator, FockOperator]:
    """Position and momentum q_j = (a + a^dag)/sqrt2, p_j = -i(a - a^dag)/sqrt2."""
    a, a_dag = ladder(spec, j)
    q = (a.matrix + a_dag.matrix) / np.sqrt(2.0)
    p = -1j * (a.matrix - a_dag.matrix) / np.sqrt(2.0)
    return FockOperator(spec, q, hermitian_hint=True), FockOperator(spec, p, hermitian_hint=True)


def number_operator(spec: FockSpec, j: int) -> FockOperator:
    a, a_dag = ladder(spec, j)
    return FockOperator(spec, a_dag.matrix @ a.matrix, hermitian_hint=True)


def identity(spec: FockSpec) -> FockOperator:
    return FockOperator(spec, np.eye(spec.dim, dtype=np.complex128), hermitian_hint=True)


def field_operator(spec: FockSpec, z: ModeVector) -> FockOperator:
    """
    The field operator p(z) = i sum_j (z_j a_j^dag - conj(z_j) a_j).

    Real-linear in z: each entry is a single product of z_j (or its conjugate) with a
    fixed ladder entry, so p(z + u) and p(z) + p(u) agree entrywise to within 1e-13.
    Bit-identity is not guaranteed: z_j + u_j is rounded before the product.

    Args:
        spec (FockSpec): The truncated space.
        z (ModeVector): Amplitudes, one per mode.

    Returns:
        FockOperator: Hermitian generator of t -> W_{tz}.
    """
    _check_modes(spec, z)
    m = np.zeros((spec.dim, spec.dim), dtype=np.complex128)
    for j, zj in enumerate(z.amplitudes, start=1):
        if zj == 0:
            continue
        a = _embed(spec, j, _single_mode_annihilation(spec.d))
        m += 1j * (zj * a.T - np.conj(zj) * a)
    return FockOperator(spec, m, hermitian_hint=True)


def field_operator_from_quadratures(spec: FockSpec, z: ModeVector) -> FockOperator:
    """The same operator written as sqrt2 sum_j (x_j p_j - y_j q_j)."""
    _check_modes(spec, z)
    m = np.zeros((spec.dim, spec.dim), dtype=np.complex128)
    for j, zj in enumerate(z.amplitudes, start=1):
        q, p = quadratures(spec, j)
        m += np.sqrt(2.0) * (zj.real * p.matrix - zj.imag * q.matrix)
    return FockOperator(spec, m, hermitian_hint=True)


# --- Exponential Vectors ---

def _check_exponential_sanity(spec: FockSpec, z: ModeVector):
    ratios = np.abs(z.amplitudes) ** 2 / spec.d
    if np.any(ratios > EXPONENTIAL_SANITY):
        raise TruncationError(
            f"Cutoff too small: |z_j|^2/d = {float(np.max(ratios)):.3f} exceeds {EXPONENTIAL_SANITY} (d={spec.d})."
        )


def _single_mode_exponential(d: int, zj: complex) -> NDArray[np.complex128]:
    coeffs = np.empty(d, dtype=np.complex128)
    coeffs[0] = 1.0
    for k in range(1, d):
        coeffs[k] = coeffs[k - 1] * zj / np.sqrt(k)
    return coeffs


def exponential_vector(spec: FockSpec, z: ModeVector, normalized: bool = False) -> FockVector:
    """
    The exponential vector eps_z with coefficients prod_j z_j^{k_j} / sqrt(k_j!).

    <eps_z, eps_u> = exp(<z, u>) up to truncation. With normalized=True the vector is
    rescaled to unit norm (the coherent vector).

    Raises:
        TruncationError: If |z_j|^2 / d > 0.5 for some mode.
    """
    _check_modes(spec, z)
    _check_exponential_sanity(spec, z)
    coeffs = np.ones(1, dtype=np.complex128)
    for zj in z.amplitudes:
        coeffs = np.kron(coeffs, _single_mode_exponential(spec.d, zj))
    if normalized:
        coeffs = coeffs / np.linalg.norm(coeffs)
    return FockVector(spec, coeffs)


def vacuum_vector(spec: FockSpec) -> FockVector:
    return exponential_vector(spec, mode_vector(np.zeros(spec.n)))


# --- Weyl Operators ---

def _unitary_from_generator(h: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """exp(-iH) for Hermitian H through its eigendecomposition."""
    evals, evecs = linalg.eigh(h)
    return (evecs * np.exp(-1j * evals)) @ evecs.conj().T


def weyl_operator(spec: FockSpec, z: ModeVector) -> FockOperator:
    """
    The Weyl operator W_z = exp(sum_j z_j a_j^dag - conj(z_j) a_j) = exp(-i p(z)).

    Raises:
        TruncationError: If ||z||^2 > d / 4.
    """
    _check_modes(spec, z)
    if z.norm() ** 2 > WEYL_SANITY * spec.d:
        raise TruncationError(f"Cutoff too small: ||z||^2 = {z.norm() ** 2:.3f} exceeds d/4 = {spec.d / 4:.3f}.")
    w = _unitary_from_generator(field_operator(spec, z).matrix)
    return FockOperator(spec, w)


def _interior_block(spec: FockSpec, m: NDArray, interior: Optional[int]) -> NDArray:
    mask = spec.interior_mask(interior)
    return m[np.ix_(mask, mask)]


def weyl_relation_residual(spec: FockSpec, z: ModeVector, u: ModeVector, interior: Optional[int] = None) -> float:
    """max |W_z W_u - exp(-i Im<z,u>) W_{z+u}| over the interior block."""
    w_z = weyl_operator(spec, z).matrix
    w_u = weyl_operator(spec, u).matrix
    w_zu = weyl_operator(spec, z + u).matrix
    diff = w_z @ w_u - np.exp(-1j * symplectic(z, u)) * w_zu
    return float(np.max(np.abs(_interior_block(spec, diff, interior))))


def displacement_residual(spec: FockSpec, z: ModeVector, u: ModeVector, interior: Optional[int] = None) -> float:
    """max |W_z eps_u - exp(-||z||^2/2 - <z,u>) eps_{z+u}| over interior coefficients."""
    lhs = weyl_operator(spec, z).matrix @ exponential_vector(spec, u).coefficients
    factor = np.exp(-0.5 * z.norm() ** 2 - complex_inner(z, u))
    rhs = factor * exponential_vector(spec, z + u).coefficients
    mask = spec.interior_mask(interior)
    return float(np.max(np.abs((lhs - rhs)[mask])))


def unitarity_residual(op: FockOperator, interior: Optional[int] = None) -> float:
    """max |W^dag W - I| over the interior block."""
    prod = op.matrix.conj().T @ op.matrix - np.eye(op.spec.dim)
    return float(np.max(np.abs(_interior_block(op.spec, prod, interior))))


def commutator(a: FockOperator, b: FockOperator) -> FockOperator:
    _check_same_spec(a.spec, b.spec)
    return FockOperator(a.spec, a.matrix @ b.matrix - b.matrix @ a.matrix)


def quadrature_ccr_residual(spec: FockSpec, interior: Optional[int] = None) -> float:
    """max over j, k of |[q_j, p_k] - i delta_jk I| on the interior block."""
    worst = 0.0
    eye = np.eye(spec.dim)
    for j in range(1, spec.n + 1):
        q_j, _ = quadratures(spec, j)
        for k in range(1, spec.n + 1):
            _, p_k = quadratures(spec, k)
            target = 1j * eye if j == k else 0.0 * eye
            diff = commutator(q_j, p_k).matrix - target
            worst = max(worst, float(np.max(np.abs(_interior_block(spec, diff, interior)))))
    return worst


def field_commutator_residual(spec: FockSpec, z: ModeVector, u: ModeVector, interior: Optional[int] = None) -> float:
    """max |[p(z), p(u)] - 2i Im<z,u> I| on the interior block."""
    diff = commutator(field_operator(spec, z), field_operator(spec, u)).matrix
    diff = diff - 2j * symplectic(z, u) * np.eye(spec.dim)
    return float(np.max(np.abs(_interior_block(spec, diff, interior))))


# --- State Builders ---

@dataclass(frozen=True, eq=False)
class StateKind:
    """Which test state to build; per-mode parameters are broadcast from scalars."""
    name: str
    alpha: Optional[ModeVector] = None
    nbar: Sequence[float] = field(default_factory=tuple)
    squeeze_r: Sequence[float] = field(default_factory=tuple)
    squeeze_phi: Sequence[float] = field(default_factory=tuple)

    def __post_init__(self):
        if self.name not in STATE_KINDS:
            raise InvalidParametersError(f"Unknown state kind '{self.name}'. Expected one of {STATE_KINDS}.")

    @classmethod
    def vacuum(cls) -> "StateKind":
        return cls("vacuum")

    @classmethod
    def coherent(cls, alpha) -> "StateKind":
        return cls("coherent", alpha=alpha if isinstance(alpha, ModeVector) else mode_vector(alpha))

    @classmethod
    def thermal(cls, nbar) -> "StateKind":
        return cls("thermal", nbar=tuple(np.atleast_1d(np.asarray(nbar, dtype=float))))

    @classmethod
    def squeezed(cls, r, phi=0.0) -> "StateKind":
        return cls(
            "squeezed",
            squeeze_r=tuple(np.atleast_1d(np.asarray(r, dtype=float))),
            squeeze_phi=tuple(np.atleast_1d(np.asarray(phi, dtype=float))),
        )


def per_mode(values: Sequence[float], n: int, label: str) -> NDArray[np.float64]:
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.size == 1:
        arr = np.full(n, arr[0])
    if arr.size != n:
        raise DimensionMismatchError(f"{label} has {arr.size} entries for {n} modes.")
    if not np.all(np.isfinite(arr)):
        raise InvalidParametersError(f"{label} must be finite, got {arr}.")
    return arr


def top_level_weight(spec: FockSpec, matrix: NDArray) -> float:
    """Largest trace weight sitting on the top level d-1 of any single mode."""
    diag = np.real(np.diag(matrix))
    occ = spec.occupations()
    return float(max(diag[occ[:, j] == spec.d - 1].sum() for j in range(spec.n)))


def density_matrix(spec: FockSpec, matrix: NDArray) -> DensityMatrix:
    """
    Symmetrizes, renormalizes to unit trace and records the truncation leakage.

    leakage is the larger of the pre-normalization trace defect and the top-level weight.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    m = 0.5 * (m + m.conj().T)
    tr = float(np.trace(m).real)
    if tr <= 0:
        raise TruncationError(f"State has non-positive trace {tr:.3e} after truncation.")
    leakage = max(abs(1.0 - tr), top_level_weight(spec, m) / tr)
    return DensityMatrix(spec, m / tr, leakage=leakage)


def pure_state(vector: FockVector) -> DensityMatrix:
    c = vector.coefficients
    return density_matrix(vector.spec, np.outer(c, c.conj()))


def _squeeze_generator(d: int, r: float, phi: float) -> NDArray[np.complex128]:
    # U = exp(1/2 (conj(zeta) a^2 - zeta a^dag^2)) = exp(-iH) with H = i/2 (conj(zeta) a^2 - zeta a^dag^2)
    a = _single_mode_annihilation(d)
    zeta = r * np.exp(1j * phi)
    a2 = a @ a
    return 0.5j * (np.conj(zeta) * a2 - zeta * a2.T)


def build_state(spec: FockSpec, kind: StateKind) -> DensityMatrix:
    """
    Builds a vacuum, coherent, thermal or squeezed density matrix on the truncated space.

    Args:
        spec (FockSpec): The truncated space.
        kind (StateKind): The state and its parameters.

    Returns:
        DensityMatrix: Renormalized state with its leakage recorded.

    Raises:
        TruncationError: If the cutoff is too small for the requested parameters.
        InvalidParametersError: For negative N-bar or squeezing r.
    """
    if kind.name == "vacuum":
        return pure_state(vacuum_vector(spec))

    if kind.name == "coherent":
        if kind.alpha is None:
            raise InvalidParametersError("Coherent state needs an amplitude vector.")
        w = weyl_operator(spec, kind.alpha).matrix
        return pure_state(FockVector(spec, w @ vacuum_vector(spec).coefficients))

    if kind.name == "thermal":
        nbar = per_mode(kind.nbar, spec.n, "nbar")
        if np.any(nbar < 0):
            raise InvalidParametersError(f"Mean occupation must be non-negative, got {nbar}.")
        diag = np.ones(1)
        levels = np.arange(spec.d)
        for nb in nbar:
            nu = nb / (nb + 1.0)
            diag = np.kron(diag, (1.0 - nu) * nu ** levels)
        return density_matrix(spec, np.diag(diag))

    # squeezed
    r = per_mode(kind.squeeze_r, spec.n, "squeeze_r")
    phi = per_mode(kind.squeeze_phi, spec.n, "squeeze_phi")
    if np.any(r < 0):
        raise InvalidParametersError(f"Squeezing parameter must be non-negative, got {r}.")
    if np.any(np.sinh(r) ** 2 > SQUEEZE_SANITY * spec.d):
        raise TruncationError(f"Cutoff too small for squeezing r={r} at d={spec.d}.")
    u = np.ones((1, 1), dtype=np.complex128)
    for rj, phij in zip(r, phi):
        u = np.kron(u, _unitary_from_generator(_squeeze_generator(spec.d, rj, phij)))
    return pure_state(FockVector(spec, u @ vacuum_vector(spec).coefficients))


def apply_channel(rho: DensityMatrix, u: ModeVector) -> DensityMatrix:
    """The coherent channel on states: W_u rho W_u^dag."""
    w = weyl_operator(rho.spec, u).matrix
    return density_matrix(rho.spec, w @ rho.matrix @ w.conj().T)


# --- Traces ---

def trace_pair(rho: DensityMatrix, a: FockOperator) -> complex:
    """tr(rho A)."""
    _check_same_spec(rho.spec, a.spec)
    return complex(np.einsum("ij,ji->", rho.matrix, a.matrix))


def variance(rho: DensityMatrix, a: FockOperator) -> float:
    """V(A)^2 = tr(rho A^2) - tr(rho A)^2 for Hermitian A."""
    mean = trace_pair(rho, a).real
    second = trace_pair(rho, a @ a).real
    return second - mean ** 2
