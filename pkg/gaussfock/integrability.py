# integrability.py - rho-integrability at matrix scale: Yosida approximations, the
# four-positive-parts split of a normal operator, the rho-norm, and moments computed
# by epsilon-limits and by t-derivatives

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from gaussfock import numerics
from gaussfock.errors import InvalidParametersError, NonConvergenceError, NonNormalOperatorError
from gaussfock.fock import DensityMatrix, FockOperator, FockSpec, density_matrix, _check_same_spec

# --- Configuration ---
NORMALITY_TOL = 1e-9
HERMITIAN_TOL = 1e-10
POSITIVE_FLOOR = -1e-10
RHO_EIGEN_THRESHOLD = 1e-12
RICHARDSON_POINTS = 4
YOSIDA_MAX_RELATIVE_ERROR = 1e-4
DERIVATIVE_MAX_ORDER = 6
DERIVATIVE_RELATIVE_TOL = 1e-5

EXTRAPOLATIONS = ("none", "richardson")


def _default_epsilons() -> tuple[float, ...]:
    return tuple(2.0 ** -k for k in range(3, 17))


# --- Domain Types ---

@dataclass(frozen=True)
class YosidaSchedule:
    """Decreasing epsilons (default 2^-3 .. 2^-16) and the limit policy."""
    epsilons: tuple[float, ...] = field(default_factory=_default_epsilons)
    extrapolation: str = "richardson"

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        if not eps:
            raise InvalidParametersError("A Yosida schedule needs at least one epsilon.")
        if any(e <= 0 for e in eps):
            raise InvalidParametersError(f"Yosida epsilons must be positive, got {eps}.")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise InvalidParametersError(f"Yosida epsilons must be strictly decreasing, got {eps}.")
        if self.extrapolation not in EXTRAPOLATIONS:
            raise InvalidParametersError(f"Unknown extrapolation '{self.extrapolation}'. Expected one of {EXTRAPOLATIONS}.")
        object.__setattr__(self, "epsilons", eps)


@dataclass(frozen=True, eq=False)
class NormalSplit:
    """A = re_plus - re_minus + i (im_plus - im_minus), all four built on one eigenbasis."""
    re_plus: FockOperator
    re_minus: FockOperator
    im_plus: FockOperator
    im_minus: FockOperator
    eigenvalues: NDArray[np.complex128]
    eigenvectors: NDArray[np.complex128]

    def parts(self) -> tuple[FockOperator, FockOperator, FockOperator, FockOperator]:
        return self.re_plus, self.re_minus, self.im_plus, self.im_minus

    def reconstruct(self) -> FockOperator:
        m = self.re_plus.matrix - self.re_minus.matrix + 1j * (self.im_plus.matrix - self.im_minus.matrix)
        return FockOperator(self.re_plus.spec, m)


# --- Matrix Wrappers ---

def as_operator(matrix, hermitian: bool = None) -> FockOperator:
    """Wraps a square matrix as an operator on a single mode with d = dimension."""
    m = np.asarray(matrix, dtype=np.complex128)
    return FockOperator(FockSpec(1, m.shape[0]), m, hermitian_hint=hermitian)


def as_state(matrix) -> DensityMatrix:
    m = np.asarray(matrix, dtype=np.complex128)
    return density_matrix(FockSpec(1, m.shape[0]), m)


# --- Spectral Helpers ---

def normality_residual(a: FockOperator) -> float:
    m = a.matrix
    return float(np.max(np.abs(m @ m.conj().T - m.conj().T @ m)))


def _check_normal(a: FockOperator):
    res = normality_residual(a)
    if res > NORMALITY_TOL:
        raise NonNormalOperatorError(f"Operator is not normal: max |AA^dag - A^dag A| = {res:.3e}.")


def _check_hermitian(a: FockOperator):
    herm = float(np.max(np.abs(a.matrix - a.matrix.conj().T)))
    if herm > HERMITIAN_TOL:
        raise InvalidParametersError(f"Operator is not Hermitian: max |A - A^dag| = {herm:.3e}.")


def _normal_eig(a: FockOperator) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Eigenvalues and a unitary eigenbasis of a normal operator (complex Schur form)."""
    _check_normal(a)
    t, z = linalg.schur(a.matrix, output="complex")
    return np.diag(t).copy(), z


def _rebuild(spec: FockSpec, vecs: NDArray, values: NDArray, hermitian: bool = None) -> FockOperator:
    return FockOperator(spec, (vecs * values) @ vecs.conj().T, hermitian_hint=hermitian)


def _state_weights(rho: DensityMatrix, vecs: NDArray) -> NDArray[np.float64]:
    """c_k = <v_k, rho v_k> for the columns of vecs."""
    return np.real(np.einsum("ik,ij,jk->k", vecs.conj(), rho.matrix, vecs))


def normal_function(a: FockOperator, f: Callable[[NDArray], NDArray]) -> FockOperator:
    """f(A) for normal A through its eigenbasis."""
    evals, vecs = _normal_eig(a)
    return _rebuild(a.spec, vecs, f(evals))


# --- Normal Split ---

def normal_split(a: FockOperator) -> NormalSplit:
    """
    Splits a normal operator into (Re A)_+, (Re A)_-, (Im A)_+, (Im A)_-.

    All four parts come from a single eigendecomposition, so their spectral projections
    commute and each positive/negative pair has complementary support.

    Raises:
        NonNormalOperatorError: If ||AA^dag - A^dag A||_max > 1e-9.
    """
    evals, vecs = _normal_eig(a)
    re, im = evals.real, evals.imag
    return NormalSplit(
        re_plus=_rebuild(a.spec, vecs, np.maximum(re, 0.0), hermitian=True),
        re_minus=_rebuild(a.spec, vecs, np.maximum(-re, 0.0), hermitian=True),
        im_plus=_rebuild(a.spec, vecs, np.maximum(im, 0.0), hermitian=True),
        im_minus=_rebuild(a.spec, vecs, np.maximum(-im, 0.0), hermitian=True),
        eigenvalues=evals,
        eigenvectors=vecs,
    )


# --- Yosida Approximations ---

def _check_epsilon(eps: float):
    if not eps > 0:
        raise InvalidParametersError(f"Yosida epsilon must be positive, got {eps}.")


def yosida(a: FockOperator, eps: float) -> FockOperator:
    """(iA)_eps = iA (I + i eps A)^-1 for Hermitian A; eigenvalues map to i l / (1 + i eps l)."""
    _check_epsilon(eps)
    _check_hermitian(a)
    evals, vecs = linalg.eigh(a.matrix)
    return _rebuild(a.spec, vecs, 1j * evals / (1.0 + 1j * eps * evals))


def positive_yosida(p: FockOperator, eps: float) -> FockOperator:
    """P_eps = P (I + eps P)^-1 for positive P; increases to P as eps decreases."""
    _check_epsilon(eps)
    _check_hermitian(p)
    evals, vecs = linalg.eigh(p.matrix)
    if np.min(evals) < POSITIVE_FLOOR:
        raise InvalidParametersError(f"Operator is not positive: min eigenvalue {np.min(evals):.3e}.")
    evals = np.maximum(evals, 0.0)
    return _rebuild(p.spec, vecs, evals / (1.0 + eps * evals), hermitian=True)


def yosida_trace_sequence(rho: DensityMatrix, a: FockOperator, n: int, epsilons) -> list[complex]:
    """tr(rho ((iA)_eps)^n) along the given epsilons."""
    _check_same_spec(rho.spec, a.spec)
    _check_hermitian(a)
    evals, vecs = linalg.eigh(a.matrix)
    weights = _state_weights(rho, vecs)
    values = []
    for eps in epsilons:
        _check_epsilon(eps)
        values.append(complex(np.sum(weights * (1j * evals / (1.0 + 1j * eps * evals)) ** n)))
    return values


def _limit(sequence: list[complex], schedule: YosidaSchedule) -> tuple[complex, float]:
    if schedule.extrapolation == "none" or len(sequence) == 1:
        err = abs(sequence[-1] - sequence[-2]) if len(sequence) > 1 else math.inf
        return sequence[-1], err
    eps = schedule.epsilons
    ratio = eps[-2] / eps[-1]
    return numerics.richardson_extrapolate(sequence[-RICHARDSON_POINTS:], p=1, r=ratio)


def _check_converged(value: complex, err: float, what: str, max_relative_error: float):
    if not np.isfinite(value):
        raise NonConvergenceError(f"{what} produced a non-finite value {value}.")
    # a single-point schedule carries no estimate
    if math.isinf(err):
        return
    if err > max_relative_error * max(1.0, abs(value)):
        raise NonConvergenceError(f"{what} did not converge: error estimate {err:.3e} for value {value}.")


def moment_via_yosida(
        rho: DensityMatrix,
        a: FockOperator,
        n: int,
        schedule: YosidaSchedule = None,
        max_relative_error: float = YOSIDA_MAX_RELATIVE_ERROR,
) -> tuple[float, float]:
    """
    <A^n> = (-i)^n lim_{eps -> 0} tr(rho ((iA)_eps)^n), extrapolated along the schedule.

    Returns:
        tuple: (value, error_estimate) where the estimate is the last extrapolation increment.

    Raises:
        NonConvergenceError: If the error estimate exceeds max_relative_error * max(1, |value|).
    """
    if n < 0:
        raise InvalidParametersError(f"Moment order must be non-negative, got {n}.")
    if n == 0:
        return 1.0, 0.0
    schedule = schedule or YosidaSchedule()
    sequence = [(-1j) ** n * v for v in yosida_trace_sequence(rho, a, n, schedule.epsilons)]
    value, err = _limit(sequence, schedule)
    _check_converged(value, err, f"Yosida moment of order {n}", max_relative_error)
    return float(value.real), err


def positive_trace_sequence(rho: DensityMatrix, p: FockOperator, epsilons) -> list[float]:
    """
    sum_k rho_k ||P_eps^{1/2} u_k||^2 over the eigenpairs of rho with rho_k > 1e-12.

    This is tr(rho P_eps) = <rho^{1/2}, P_eps rho^{1/2}>_2 written through the eigenbasis of rho.
    """
    _check_same_spec(rho.spec, p.spec)
    _check_hermitian(p)
    rho_vals, rho_vecs = linalg.eigh(rho.matrix)
    keep = rho_vals > RHO_EIGEN_THRESHOLD
    rho_vals, rho_vecs = rho_vals[keep], rho_vecs[:, keep]
    p_vals, p_vecs = linalg.eigh(p.matrix)
    if np.min(p_vals) < POSITIVE_FLOOR:
        raise InvalidParametersError(f"Operator is not positive: min eigenvalue {np.min(p_vals):.3e}.")
    p_vals = np.maximum(p_vals, 0.0)
    # ||P_eps^{1/2} u_k||^2 = sum_m mu_m / (1 + eps mu_m) |<v_m, u_k>|^2
    overlaps = np.abs(p_vecs.conj().T @ rho_vecs) ** 2
    values = []
    for eps in epsilons:
        _check_epsilon(eps)
        norms = (p_vals / (1.0 + eps * p_vals)) @ overlaps
        values.append(float(np.sum(rho_vals * norms)))
    return values


def hilbert_schmidt_trace(rho: DensityMatrix, p: FockOperator) -> float:
    """<rho^{1/2}, P rho^{1/2}>_2 with the square root taken through eigh; no epsilon limit."""
    _check_same_spec(rho.spec, p.spec)
    rho_vals, rho_vecs = linalg.eigh(rho.matrix)
    root = (rho_vecs * np.sqrt(np.maximum(rho_vals, 0.0))) @ rho_vecs.conj().T
    return float(np.real(np.vdot(root, p.matrix @ root)))


def positive_trace(
        rho: DensityMatrix,
        p: FockOperator,
        schedule: YosidaSchedule = None,
        max_relative_error: float = YOSIDA_MAX_RELATIVE_ERROR,
) -> tuple[float, float]:
    """tr(rho P) for positive P as the Yosida limit of positive_trace_sequence; (value, error)."""
    schedule = schedule or YosidaSchedule()
    value, err = _limit([complex(v) for v in positive_trace_sequence(rho, p, schedule.epsilons)], schedule)
    _check_converged(value, err, "Positive-part trace", max_relative_error)
    return float(value.real), err


def rho_trace_normal(rho: DensityMatrix, a: FockOperator, schedule: YosidaSchedule = None) -> complex:
    """
    tr(rho A) for normal A as the four-part combination of positive-part Yosida limits.

    Raises:
        NonNormalOperatorError: If A is not normal.
        NonConvergenceError: If any part fails to converge.
    """
    _check_same_spec(rho.spec, a.spec)
    split = normal_split(a)
    re_p, re_m, im_p, im_m = (positive_trace(rho, part, schedule)[0] for part in split.parts())
    return complex(re_p - re_m, im_p - im_m)


# --- rho-Norm ---

def rho_norm(rho: DensityMatrix, a: FockOperator) -> float:
    """||A||_rho = tr(rho |A|), with |A| from the eigenvalue moduli."""
    _check_same_spec(rho.spec, a.spec)
    evals, vecs = _normal_eig(a)
    return max(float(np.sum(np.abs(evals) * _state_weights(rho, vecs))), 0.0)


# --- Derivative Route ---

def direct_moment(rho: DensityMatrix, a: FockOperator, n: int) -> float:
    """tr(rho A^n) by matrix powers."""
    _check_same_spec(rho.spec, a.spec)
    return float(np.real(np.einsum("ij,ji->", rho.matrix, np.linalg.matrix_power(a.matrix, n))))


def moment_via_derivative(rho: DensityMatrix, a: FockOperator, n: int) -> float:
    """
    tr(rho A^n) = d^n/dt^n tr(rho e^{tA}) at t = 0, by extrapolated central differences.

    Raises:
        InvalidParametersError: If n is negative or above 6.
        NonConvergenceError: If the stencil error estimate exceeds 1e-5 relative.
    """
    if not 0 <= n <= DERIVATIVE_MAX_ORDER:
        raise InvalidParametersError(f"Derivative order must lie in 0..{DERIVATIVE_MAX_ORDER}, got {n}.")
    _check_same_spec(rho.spec, a.spec)
    _check_hermitian(a)
    evals, vecs = linalg.eigh(a.matrix)
    weights = _state_weights(rho, vecs)
    if n == 0:
        return float(np.sum(weights))
    scale = math.sqrt(max(float(np.sum(weights * evals ** 2)), 0.0))
    value, err = numerics.derivative_at_zero(lambda t: np.sum(weights * np.exp(t * evals)), n, scale=scale)
    if err > DERIVATIVE_RELATIVE_TOL * max(1.0, abs(value), scale ** n):
        raise NonConvergenceError(f"Difference stencil for order {n} failed: error estimate {err:.3e}.")
    return float(value.real)
