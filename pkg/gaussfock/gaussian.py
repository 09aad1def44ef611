# gaussian.py - The abstract Gaussian state (w, S): characteristic function, Weyl moments,
# moment-generating function, coherent channel, uncertainty and bona-fide checks

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import linalg

from gaussfock import numerics
from gaussfock.coords import (
    ModeVector,
    RealMatrix2n,
    check_real_matrix,
    j_matrix,
    mode_vector,
    real_bilinear,
    real_inner,
    symplectic,
)
from gaussfock.errors import DimensionMismatchError, InvalidParametersError

# --- Configuration ---
PSD_FLOOR = -1e-10
BONA_FIDE_TOL = 1e-10
UNCERTAINTY_TOL = 1e-10
SINGULAR_TOL = 1e-14
INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


# --- Domain Types ---

@dataclass(frozen=True, eq=False)
class GaussianParams:
    """
    Mean vector w (complex, n modes) and covariance S (real symmetric 2n x 2n on (x, y)).

    (w, z) = Re<w, z> and (z, S z) are evaluated through the coords module.
    """
    w: ModeVector
    S: RealMatrix2n

    def __post_init__(self):
        s = check_real_matrix(self.S, self.w.n, symmetric=True)
        min_eig = float(np.min(linalg.eigvalsh(s)))
        if min_eig < PSD_FLOOR:
            raise InvalidParametersError(f"Covariance is not positive semidefinite: min eigenvalue {min_eig:.3e}.")
        s.setflags(write=False)
        object.__setattr__(self, "S", s)

    @property
    def n(self) -> int:
        return self.w.n

    @property
    def l(self) -> ModeVector:
        """Mean momentum vector: the delta-part of w / sqrt2 (real)."""
        return mode_vector(self.w.amplitudes.real / math.sqrt(2.0))

    @property
    def m(self) -> ModeVector:
        """Mean position vector: the e-part of w / sqrt2 (purely imaginary)."""
        return mode_vector(1j * self.w.amplitudes.imag / math.sqrt(2.0))


@dataclass(frozen=True)
class BonaFideReport:
    min_eig_S: float
    min_eig_S_minus_iJ_hermitian: float
    norm_S: float
    norm_S_inv: float
    passes_real_reading: bool
    passes_hermitian_reading: bool

    @property
    def readings_disagree(self) -> bool:
        return self.passes_real_reading != self.passes_hermitian_reading

    @property
    def norm_bounds_hold(self) -> bool:
        """0 < ||S^-1|| <= 1 <= ||S|| < inf, with the bona-fide slack."""
        return (0.0 < self.norm_S_inv <= 1.0 + BONA_FIDE_TOL) and (1.0 - BONA_FIDE_TOL <= self.norm_S < math.inf)


class UncertaintyCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


# --- Constructors ---

def gaussian_params(w, S) -> GaussianParams:
    return GaussianParams(w if isinstance(w, ModeVector) else mode_vector(w), np.asarray(S, dtype=float))


def vacuum_params(n: int) -> GaussianParams:
    return GaussianParams(mode_vector(np.zeros(n)), np.eye(2 * n))


def thermal_params(nbar) -> GaussianParams:
    """S = (2 N-bar + 1) I per mode."""
    nbar = np.atleast_1d(np.asarray(nbar, dtype=float))
    if np.any(nbar < 0):
        raise InvalidParametersError(f"Mean occupation must be non-negative, got {nbar}.")
    diag = np.concatenate([2 * nbar + 1, 2 * nbar + 1])
    return GaussianParams(mode_vector(np.zeros(nbar.size)), np.diag(diag))


def squeezed_params(r, phi=0.0) -> GaussianParams:
    """Squeezed vacuum exp(1/2 (conj(zeta) a^2 - zeta a^dag^2)), zeta = r e^{i phi}, per mode."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    phi = np.broadcast_to(np.atleast_1d(np.asarray(phi, dtype=float)), r.shape)
    if np.any(r < 0):
        raise InvalidParametersError(f"Squeezing parameter must be non-negative, got {r}.")
    n = r.size
    s = np.zeros((2 * n, 2 * n))
    for j, (rj, phij) in enumerate(zip(r, phi)):
        c, sh = math.cosh(2 * rj), math.sinh(2 * rj)
        s[j, j] = c + sh * math.cos(phij)
        s[n + j, n + j] = c - sh * math.cos(phij)
        s[j, n + j] = s[n + j, j] = sh * math.sin(phij)
    return GaussianParams(mode_vector(np.zeros(n)), s)


# --- Pairings ---

def _check_modes(params: GaussianParams, z: ModeVector):
    if z.n != params.n:
        raise DimensionMismatchError(f"Vector has {z.n} modes but the parameters have {params.n}.")


def mean_pairing(params: GaussianParams, z: ModeVector) -> float:
    """(w, z)."""
    _check_modes(params, z)
    return real_inner(params.w, z)


def covariance_form(params: GaussianParams, z: ModeVector, u: ModeVector = None) -> float:
    """(z, S u); u defaults to z."""
    _check_modes(params, z)
    return real_bilinear(params.S, z, z if u is None else u)


# --- Characteristic Function ---

def char_fn(params: GaussianParams, z: ModeVector) -> complex:
    """F[rho](z) = pi^{-1/2} exp(-i (w, z) - 1/2 (z, S z))."""
    exponent = -1j * mean_pairing(params, z) - 0.5 * covariance_form(params, z)
    return INV_SQRT_PI * complex(np.exp(exponent))


def characteristic_curve(params: GaussianParams, z: ModeVector, t: float) -> complex:
    """phi_z(t) = F[rho](t z); negative t gives the reverse-time curve."""
    return char_fn(params, z.scale(t))


def weyl_moment_from_curve(params: GaussianParams, z: ModeVector, n: int) -> tuple[float, float]:
    """
    <p(z)^n> = (-i)^n d^n/dt^n [sqrt(pi) phi_z(-t)] at t = 0, by extrapolated differences.

    Returns:
        tuple: (moment, error_estimate).
    """
    if n < 0:
        raise InvalidParametersError(f"Moment order must be non-negative, got {n}.")
    scale = abs(mean_pairing(params, z)) + math.sqrt(max(covariance_form(params, z), 0.0))
    value, err = numerics.derivative_at_zero(
        lambda t: math.sqrt(math.pi) * characteristic_curve(params, z, -t), n, scale=scale
    )
    return float(((-1j) ** n * value).real), err


# --- Weyl Moments ---

def double_factorial(k: int) -> int:
    """k!! in exact integers, with (-1)!! = 0!! = 1."""
    if k < -1:
        raise InvalidParametersError(f"Double factorial is defined here for k >= -1, got {k}.")
    result = 1
    for factor in range(k, 0, -2):
        result *= factor
    return result


def central_weyl_moment(params: GaussianParams, z: ModeVector, k: int) -> float:
    """<(p(z) - (w,z))^k>: 0 for odd k, (z,Sz)^{k/2} (k-1)!! for even k."""
    if k < 0:
        raise InvalidParametersError(f"Moment order must be non-negative, got {k}.")
    if k % 2:
        return 0.0
    return covariance_form(params, z) ** (k // 2) * double_factorial(k - 1)


def raw_weyl_moments(params: GaussianParams, z: ModeVector, max_order: int) -> list[float]:
    """
    Non-central Weyl moments m_0..m_N of p(z).

    m_1 = (w, z), m_2 = (z, S z) + m_1^2, and for n >= 3
    m_n = 1_even(n) (m_2 - m_1^2)^{n/2} (n-1)!! + sum_{k=1}^{n} (-1)^{k+1} C(n,k) m_{n-k} m_1^k.
    """
    if max_order < 0:
        raise InvalidParametersError(f"Maximum order must be non-negative, got {max_order}.")
    m1 = mean_pairing(params, z)
    moments = [1.0]
    if max_order >= 1:
        moments.append(m1)
    if max_order >= 2:
        moments.append(central_weyl_moment(params, z, 2) + m1 ** 2)
    for n in range(3, max_order + 1):
        value = 0.0
        if n % 2 == 0:
            value += (moments[2] - m1 ** 2) ** (n // 2) * double_factorial(n - 1)
        for k in range(1, n + 1):
            value += (-1) ** (k + 1) * math.comb(n, k) * moments[n - k] * m1 ** k
        moments.append(value)
    return moments


def central_from_raw(moments: list[float], m1: float, n: int) -> float:
    """Binomial recombination sum_k (-1)^k C(n,k) m_{n-k} m_1^k."""
    return sum((-1) ** k * math.comb(n, k) * moments[n - k] * m1 ** k for k in range(n + 1))


# --- Moment-Generating Function ---

def mgf(params: GaussianParams, z: ModeVector, x: float) -> float:
    """g(x) = exp((w, z) x + 1/2 (z, S z) x^2); inf once the exponent overflows."""
    with np.errstate(over="ignore"):
        return float(np.exp(mean_pairing(params, z) * x + 0.5 * covariance_form(params, z) * x ** 2))


def mgf_series(params: GaussianParams, z: ModeVector, x: float, terms: int = 30) -> float:
    """Partial sum of sum_n m_n x^n / n!."""
    moments = raw_weyl_moments(params, z, terms - 1)
    return sum(m * x ** n / math.factorial(n) for n, m in enumerate(moments))


def mgf_derivative(params: GaussianParams, z: ModeVector, n: int) -> tuple[float, float]:
    """d^n/dx^n g(x) at 0 by extrapolated central differences; returns (value, error)."""
    scale = abs(mean_pairing(params, z)) + covariance_form(params, z)
    value, err = numerics.derivative_at_zero(lambda x: mgf(params, z, x), n, scale=scale)
    return float(value.real), err


# --- Coherent Channel ---

def coherent_channel(params: GaussianParams, u: ModeVector) -> GaussianParams:
    """T_u: mean w - 2iu, covariance unchanged."""
    _check_modes(params, u)
    return GaussianParams(ModeVector(params.w.amplitudes - 2j * u.amplitudes), params.S)


def center_params(params: GaussianParams) -> GaussianParams:
    """The centered state W_{-iw/2} rho W_{iw/2}: mean 0, same S."""
    return coherent_channel(params, params.w.scale(-0.5j))


# --- Uncertainty and Bona-Fide Checks ---

def uncertainty_check(params: GaussianParams, z: ModeVector, u: ModeVector) -> UncertaintyCheck:
    """(z,Sz)(u,Su) >= (z,Su)^2 + Im<z,u>^2."""
    lhs = covariance_form(params, z) * covariance_form(params, u)
    rhs = covariance_form(params, z, u) ** 2 + symplectic(z, u) ** 2
    return UncertaintyCheck(lhs, rhs, lhs >= rhs - UNCERTAINTY_TOL)


def bona_fide(params: GaussianParams) -> BonaFideReport:
    """
    Both readings of S - iJ >= 0, plus the operator norms of S and S^-1.

    The real reading (the real quadratic form, where (z, iJz) = ||z||^2) is lambda_min(S) >= 1.
    The Hermitian reading is lambda_min(S - iJ) >= 0 on the complexified 2n space.
    A singular S reports ||S^-1|| = inf and fails both readings.
    """
    s = params.S
    eig_s = linalg.eigvalsh(s)
    eig_herm = linalg.eigvalsh(s - 1j * j_matrix(params.n))
    abs_eig = np.abs(eig_s)
    norm_s = float(np.max(abs_eig))
    singular = float(np.min(abs_eig)) <= SINGULAR_TOL * max(norm_s, 1.0)
    norm_s_inv = math.inf if singular else float(1.0 / np.min(abs_eig))
    min_eig_s = float(np.min(eig_s))
    min_eig_herm = float(np.min(eig_herm))
    return BonaFideReport(
        min_eig_S=min_eig_s,
        min_eig_S_minus_iJ_hermitian=min_eig_herm,
        norm_S=norm_s,
        norm_S_inv=norm_s_inv,
        passes_real_reading=(not singular) and min_eig_s - 1.0 >= -BONA_FIDE_TOL,
        passes_hermitian_reading=(not singular) and min_eig_herm >= -BONA_FIDE_TOL,
    )
