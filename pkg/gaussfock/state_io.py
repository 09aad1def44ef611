# state_io.py - Binary density-matrix files (little-endian complex128, row-major) with a
# JSON sidecar carrying the Fock spec, basis ordering, leakage and analytic parameters

import json
import os

import numpy as np

from gaussfock.errors import DimensionMismatchError, InvalidParametersError
from gaussfock.fock import DensityMatrix, FockSpec
from gaussfock.gaussian import GaussianParams, gaussian_params

# --- Configuration ---
FORMAT_VERSION = 1
STATE_FILE = "state.bin"
METADATA_FILE = "state.json"
BINARY_DTYPE = "<c16"
BASIS_ORDERING = "row-major occupation tuples (k_1, ..., k_n), mode 1 slowest"


# --- Metadata Helpers ---

def params_to_json(params: GaussianParams) -> dict:
    return {
        "w_re": [float(v) for v in params.w.amplitudes.real],
        "w_im": [float(v) for v in params.w.amplitudes.imag],
        "S": [[float(v) for v in row] for row in params.S],
    }


def params_from_json(data: dict) -> GaussianParams:
    w = np.asarray(data["w_re"], dtype=float) + 1j * np.asarray(data["w_im"], dtype=float)
    return gaussian_params(w, np.asarray(data["S"], dtype=float))


# --- Write / Read ---

def save_state(rho: DensityMatrix, out_dir: str, kind: dict = None, params: GaussianParams = None) -> tuple[str, str]:
    """
    Writes state.bin and state.json into out_dir (created if missing).

    Args:
        rho (DensityMatrix): The state to write.
        out_dir (str): Target directory.
        kind (dict, optional): Builder name and parameters, echoed into the sidecar.
        params (GaussianParams, optional): Analytic (w, S) recorded alongside the state.

    Returns:
        tuple: (binary_path, metadata_path).
    """
    os.makedirs(out_dir, exist_ok=True)
    bin_path = os.path.join(out_dir, STATE_FILE)
    meta_path = os.path.join(out_dir, METADATA_FILE)

    with open(bin_path, "wb") as f:
        f.write(np.ascontiguousarray(rho.matrix).astype(BINARY_DTYPE).tobytes(order="C"))

    metadata = {
        "format_version": FORMAT_VERSION,
        "modes": rho.spec.n,
        "cutoff": rho.spec.d,
        "dimension": rho.spec.dim,
        "dtype": BINARY_DTYPE,
        "basis_ordering": BASIS_ORDERING,
        "leakage": float(rho.leakage),
        "kind": kind or {},
        "analytic": params_to_json(params) if params is not None else None,
    }
    with open(meta_path, "w", encoding="utf-8") as f:
        json.dump(metadata, f, indent=2, sort_keys=True)
    return bin_path, meta_path


def load_metadata(state_dir: str) -> dict:
    meta_path = os.path.join(state_dir, METADATA_FILE)
    with open(meta_path, "r", encoding="utf-8") as f:
        metadata = json.load(f)
    if metadata.get("format_version") != FORMAT_VERSION:
        raise InvalidParametersError(
            f"Unsupported state format version {metadata.get('format_version')} in '{meta_path}'."
        )
    return metadata


def load_state(state_dir: str) -> tuple[DensityMatrix, dict]:
    """
    Reads a state directory written by save_state.

    Returns:
        tuple: (DensityMatrix, metadata dict).

    Raises:
        InvalidParametersError: Unknown format version.
        DimensionMismatchError: Binary size does not match the recorded dimension.
    """
    metadata = load_metadata(state_dir)
    spec = FockSpec(int(metadata["modes"]), int(metadata["cutoff"]))
    raw = np.fromfile(os.path.join(state_dir, STATE_FILE), dtype=BINARY_DTYPE)
    if raw.size != spec.dim * spec.dim:
        raise DimensionMismatchError(f"State file holds {raw.size} entries, expected {spec.dim}^2.")
    matrix = raw.reshape(spec.dim, spec.dim).astype(np.complex128)
    return DensityMatrix(spec, matrix, leakage=float(metadata.get("leakage", 0.0))), metadata
