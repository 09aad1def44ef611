# extract.py - Round-trip checks: pulls (w, S) out of a truncated density matrix with the
# trace formulas and compares it with the analytic GaussianParams

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy import linalg

from gaussfock.coords import ModeVector, RealMatrix2n, from_stacked, matrix_from_delta_e_basis, real_bilinear, symplectic
from gaussfock.errors import NonConvergenceError, TruncationError
from gaussfock.fock import (
    DensityMatrix,
    FockSpec,
    StateKind,
    per_mode,
    build_state,
    field_operator,
    quadratures,
    trace_pair,
    variance,
    weyl_operator,
)
from gaussfock.gaussian import (
    GaussianParams,
    char_fn,
    coherent_channel,
    raw_weyl_moments,
    squeezed_params,
    thermal_params,
    vacuum_params,
)
from gaussfock.integrability import NORMALITY_TOL, YosidaSchedule, normality_residual, rho_trace_normal

# --- Configuration ---
MIN_COVARIANCE_CUTOFF = 8
GRID_RADIUS = 0.75
GRID_POINTS = 25
MAX_GRID_SAMPLES = 200
DEFAULT_SEED = 42
INV_SQRT_PI = 1.0 / math.sqrt(math.pi)

# Truncation constants C in the tolerance C * ||z||^4 / d, keyed by (kind, modes).
# Two-mode thermal is calibrated for N-bar <= 0.5 at d >= 12.
TRUNCATION_CONSTANTS = {
    ("vacuum", 1): 1e-6,
    ("vacuum", 2): 1e-6,
    ("coherent", 1): 1e-6,
    ("coherent", 2): 1e-4,
    ("thermal", 1): 1e-4,
    ("thermal", 2): 5e-2,
    ("squeezed", 1): 1e-4,
    ("squeezed", 2): 5e-1,
}
DEFAULT_TRUNCATION_CONSTANT = 5e-2


# --- Domain Types ---

@dataclass(frozen=True, eq=False)
class ExtractionResult:
    """
    Extracted (w_hat, S_hat) and its residuals against analytic parameters.

    residual_S includes the asymmetry removed when S_hat was symmetrized. When the
    state could not be built the estimates are None, residuals are inf and errors
    holds the messages.
    """
    w_hat: Optional[ModeVector]
    S_hat: Optional[RealMatrix2n]
    residual_w: float
    residual_S: float
    char_fn_residual: float
    asymmetry: float = 0.0
    leakage: float = 0.0
    samples: int = 0
    errors: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.errors


class AmenabilityProbe(NamedTuple):
    trace_zu: complex
    sym_check: float
    normal_route: Optional[complex]
    normal_product: bool


class MomentBridgeRow(NamedTuple):
    n: int
    matrix_value: float
    recurrence_value: float
    relative_error: float


# --- Mean and Covariance ---

def extract_mean(rho: DensityMatrix) -> ModeVector:
    """
    w_j = sqrt2 (tr(rho p_j) - i tr(rho q_j)).

    This is w = sqrt2 sum_j (<p_j> delta_j + <q_j> e_j) with e_j = -i delta_j.
    """
    spec = rho.spec
    amps = np.zeros(spec.n, dtype=np.complex128)
    for j in range(1, spec.n + 1):
        q, p = quadratures(spec, j)
        amps[j - 1] = math.sqrt(2.0) * (trace_pair(rho, p).real - 1j * trace_pair(rho, q).real)
    return ModeVector(amps)


def second_moment_traces(rho: DensityMatrix) -> np.ndarray:
    """Raw complex traces tr(rho X_j Y_k) for X, Y in (p_1..p_n, q_1..q_n), in {delta, e} order."""
    spec = rho.spec
    ops = [quadratures(spec, j)[1].matrix for j in range(1, spec.n + 1)]
    ops += [quadratures(spec, j)[0].matrix for j in range(1, spec.n + 1)]
    size = len(ops)
    traces = np.zeros((size, size), dtype=np.complex128)
    for a in range(size):
        left = rho.matrix @ ops[a]
        for b in range(size):
            traces[a, b] = np.einsum("ij,ji->", left, ops[b])
    return traces


def _delta_e_covariance(rho: DensityMatrix) -> np.ndarray:
    """Unsymmetrized S in the {delta, e} basis: 2 (Re tr(rho X_j Y_k) - <X_j><Y_k>)."""
    if rho.spec.d < MIN_COVARIANCE_CUTOFF:
        raise TruncationError(f"Covariance extraction needs d >= {MIN_COVARIANCE_CUTOFF}, got d={rho.spec.d}.")
    traces = second_moment_traces(rho)
    spec = rho.spec
    means = [trace_pair(rho, quadratures(spec, j)[1]).real for j in range(1, spec.n + 1)]
    means += [trace_pair(rho, quadratures(spec, j)[0]).real for j in range(1, spec.n + 1)]
    means = np.asarray(means)
    return 2.0 * (traces.real - np.outer(means, means))


def extract_covariance(rho: DensityMatrix) -> RealMatrix2n:
    """
    S_hat in (x, y) storage, converted from the {delta, e} basis and symmetrized.

    Raises:
        TruncationError: If d < 8.
    """
    s_storage = matrix_from_delta_e_basis(_delta_e_covariance(rho))
    return 0.5 * (s_storage + s_storage.T)


def covariance_asymmetry(rho: DensityMatrix) -> float:
    m = _delta_e_covariance(rho)
    return float(np.max(np.abs(m - m.T)))


# --- Analytic Parameters ---

def analytic_params(kind: StateKind, n: int) -> GaussianParams:
    """The (w, S) a builder kind is expected to produce on n modes."""
    if kind.name == "vacuum":
        return vacuum_params(n)
    if kind.name == "coherent":
        return coherent_channel(vacuum_params(n), kind.alpha)
    if kind.name == "thermal":
        return thermal_params(per_mode(kind.nbar, n, "nbar"))
    return squeezed_params(per_mode(kind.squeeze_r, n, "squeeze_r"), per_mode(kind.squeeze_phi, n, "squeeze_phi"))


def truncation_constant(kind: str, n: int) -> float:
    return TRUNCATION_CONSTANTS.get((kind, n), DEFAULT_TRUNCATION_CONSTANT)


def truncation_tolerance(base: float, constant: float, z_norm: float, d: int) -> float:
    """max(base, C ||z||^4 / d): the fixed floor or the truncation term, whichever is larger."""
    return max(base, constant * z_norm ** 4 / d)


# --- Characteristic-Function Grid ---

def sample_grid(n: int, grid: int = GRID_POINTS, radius: float = GRID_RADIUS,
                max_samples: int = MAX_GRID_SAMPLES, seed: int = DEFAULT_SEED) -> list[ModeVector]:
    """
    Regular grid of `grid` points per real dimension inside the ball ||z|| <= radius.

    When more than max_samples points fall inside, a seeded subset is kept in grid order.
    """
    axis = np.linspace(-radius, radius, grid)
    mesh = np.stack(np.meshgrid(*([axis] * (2 * n)), indexing="ij"), axis=-1).reshape(-1, 2 * n)
    mesh = mesh[np.linalg.norm(mesh, axis=1) <= radius + 1e-12]
    if len(mesh) > max_samples:
        rng = np.random.default_rng(seed)
        keep = np.sort(rng.choice(len(mesh), size=max_samples, replace=False))
        mesh = mesh[keep]
    return [from_stacked(row) for row in mesh]


def numeric_char_fn(rho: DensityMatrix, z: ModeVector) -> complex:
    """pi^{-1/2} tr(rho W_z)."""
    return INV_SQRT_PI * trace_pair(rho, weyl_operator(rho.spec, z))


def parallel_map(fn, items: list, threads: int = 1) -> list:
    """Maps fn over items with a thread pool; results keep item order."""
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def char_fn_residuals(rho: DensityMatrix, params: GaussianParams, points: list[ModeVector],
                      threads: int = 1) -> list[float]:
    """|numeric - analytic| at each point, returned in point order."""
    return parallel_map(lambda z: abs(numeric_char_fn(rho, z) - char_fn(params, z)), points, threads)


# --- Round Trip ---

def verify_roundtrip(
        params: GaussianParams,
        kind: StateKind,
        spec: FockSpec,
        grid: int = GRID_POINTS,
        seed: int = DEFAULT_SEED,
        threads: int = 1,
        rho: DensityMatrix = None,
) -> ExtractionResult:
    """
    Builds (or takes) the state, extracts (w_hat, S_hat) and compares with params.

    Args:
        params (GaussianParams): Analytic side.
        kind (StateKind): Builder used when rho is not given.
        spec (FockSpec): Truncated space.
        grid (int): Points per real dimension for the characteristic-function sample.
        seed (int): Seed for subsampling the grid.
        threads (int): Width of the parallel map over grid points.
        rho (DensityMatrix, optional): A prebuilt state, e.g. loaded from disk.

    Returns:
        ExtractionResult: Truncation failures are reported in `errors`, not raised.
    """
    try:
        state = rho if rho is not None else build_state(spec, kind)
        w_hat = extract_mean(state)
        s_hat = extract_covariance(state)
        asym = covariance_asymmetry(state)
        points = sample_grid(spec.n, grid=grid, seed=seed)
        residuals = char_fn_residuals(state, params, points, threads=threads)
    except TruncationError as e:
        return ExtractionResult(None, None, math.inf, math.inf, math.inf, errors=(str(e),))

    residual_w = float(np.max(np.abs(w_hat.amplitudes - params.w.amplitudes)))
    residual_s = max(float(np.max(np.abs(s_hat - params.S))), asym)
    return ExtractionResult(
        w_hat=w_hat,
        S_hat=s_hat,
        residual_w=residual_w,
        residual_S=residual_s,
        char_fn_residual=max(residuals) if residuals else 0.0,
        asymmetry=asym,
        leakage=state.leakage,
        samples=len(points),
    )


# --- State-Level Identities ---

def amenability_probe(rho: DensityMatrix, z: ModeVector, u: ModeVector,
                      schedule: YosidaSchedule = None) -> AmenabilityProbe:
    """
    tr(rho p(z) p(u)) directly, and through rho_trace_normal when the product is normal.

    sym_check = |Im tr(rho p(z) p(u)) - Im<z, u>|. On the truncated space p(z) p(u) is
    only normal for (anti)parallel z and u; otherwise normal_route is None.
    """
    product = field_operator(rho.spec, z) @ field_operator(rho.spec, u)
    trace_zu = trace_pair(rho, product)
    sym_check = abs(trace_zu.imag - symplectic(z, u))
    if normality_residual(product) > NORMALITY_TOL:
        return AmenabilityProbe(trace_zu, sym_check, None, False)
    try:
        normal_route = rho_trace_normal(rho, product, schedule)
    except NonConvergenceError:
        normal_route = None
    return AmenabilityProbe(trace_zu, sym_check, normal_route, True)


def covariance_identity_residual(rho: DensityMatrix, s_hat: RealMatrix2n, z: ModeVector, u: ModeVector) -> float:
    """|Re tr(rho p(z) p(u)) - <p(z)><p(u)> - (z, S_hat u)|."""
    p_z = field_operator(rho.spec, z)
    p_u = field_operator(rho.spec, u)
    cov = trace_pair(rho, p_z @ p_u).real - trace_pair(rho, p_z).real * trace_pair(rho, p_u).real
    return abs(cov - real_bilinear(s_hat, z, u))


def variance_norm_residual(rho: DensityMatrix, z: ModeVector) -> float:
    """|V(p(z))^2 - ||(p(z) - <p(z)>) rho^{1/2}||_2^2|."""
    p_z = field_operator(rho.spec, z)
    mean = trace_pair(rho, p_z).real
    rho_vals, rho_vecs = linalg.eigh(rho.matrix)
    root = (rho_vecs * np.sqrt(np.maximum(rho_vals, 0.0))) @ rho_vecs.conj().T
    centered = p_z.matrix - mean * np.eye(rho.spec.dim)
    hs = float(np.sum(np.abs(centered @ root) ** 2))
    return abs(variance(rho, p_z) - hs)


def matrix_weyl_moments(rho: DensityMatrix, z: ModeVector, max_order: int) -> list[float]:
    """tr(rho p(z)^n) for n = 0..max_order."""
    p_z = field_operator(rho.spec, z).matrix
    power = np.eye(rho.spec.dim, dtype=np.complex128)
    moments = []
    for _ in range(max_order + 1):
        moments.append(float(np.real(np.einsum("ij,ji->", rho.matrix, power))))
        power = power @ p_z
    return moments


def weyl_moment_bridge(rho: DensityMatrix, params: GaussianParams, z: ModeVector,
                       max_order: int = 4) -> list[MomentBridgeRow]:
    """Matrix-level tr(rho p(z)^n) against the recurrence values from params."""
    matrix = matrix_weyl_moments(rho, z, max_order)
    recurrence = raw_weyl_moments(params, z, max_order)
    rows = []
    for n, (mv, rv) in enumerate(zip(matrix, recurrence)):
        rows.append(MomentBridgeRow(n, mv, rv, abs(mv - rv) / max(1.0, abs(rv))))
    return rows
