# cli.py - Command-line front end: build fixture states, run verification sweeps,
# tabulate Weyl moments and sample the characteristic function

import argparse
import datetime
import json
import math
import os
import sys
import time
import traceback
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from dotenv import load_dotenv

from gaussfock import extract, fock, gaussian, integrability, results_store, state_io
from gaussfock.coords import ModeVector, basis_vector, mode_vector
from gaussfock.errors import (
    DimensionMismatchError,
    InvalidParametersError,
    NonConvergenceError,
    NonNormalOperatorError,
    TruncationError,
)

# --- Configuration ---
load_dotenv()

CONFIG = {
    "SEED": int(os.getenv("GAUSSFOCK_SEED", "42")),
    "RESULTS_DB": os.getenv("GAUSSFOCK_RESULTS_DB", "gaussfock_results.duckdb"),
    "RECORDS_TABLE": os.getenv("GAUSSFOCK_RECORDS_TABLE", "verification_records"),
    "RUNS_TABLE": os.getenv("GAUSSFOCK_RUNS_TABLE", "verification_runs"),
}

ARTIFACT_VERSION = 1
EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_TRUNCATION = 0, 1, 2, 3

# verify sweep sizes and base tolerances (scaled by --tol-scale)
SWEEP_PAIRS = 20
UNCERTAINTY_PAIRS = 100
SWEEP_RADIUS = 0.75
MOMENT_ORDER = 4
TOLERANCES = {
    "weyl_ccr": 1e-8,
    "weyl_displacement": 1e-8,
    "weyl_unitarity": 1e-8,
    "quadrature_ccr": 1e-10,
    "field_commutator": 1e-10,
    "mean_vector": 1e-7,
    "covariance_entries": 1e-5,
    "characteristic_function": 1e-7,
    "covariance_identity": 1e-6,
    "variance_identity": 1e-6,
    "uncertainty": 1e-10,
    "bona_fide_hermitian": 1e-10,
    "bona_fide_real": 1e-10,
    "norm_bounds": 1e-6,
    "weyl_moment_bridge": 1e-4,
    "yosida_moment": 1e-6,
    "amenability_symplectic": 1e-8,
    "normal_trace_route": 1e-8,
}

# Short tags naming the identity each record checks
ANCHORS = {
    "weyl_ccr": "weyl-ccr",
    "weyl_displacement": "weyl-displacement",
    "weyl_unitarity": "weyl-ccr",
    "quadrature_ccr": "commutation",
    "field_commutator": "commutation",
    "mean_vector": "mean-vector",
    "covariance_entries": "covariance-entries",
    "characteristic_function": "characteristic-function",
    "covariance_identity": "covariance-entries",
    "variance_identity": "variance-norm",
    "uncertainty": "uncertainty",
    "bona_fide_hermitian": "bona-fide",
    "bona_fide_real": "bona-fide",
    "norm_bounds": "norm-bounds",
    "weyl_moment_bridge": "moment-recurrence",
    "yosida_moment": "yosida-moment",
    "amenability_symplectic": "amenability",
    "normal_trace_route": "rho-integrable",
    "leakage": "plumbing",
}


# --- Run Configuration ---

@dataclass
class RunConfig:
    command: str
    modes: int = 1
    cutoff: int = 30
    kind: str = "vacuum"
    alpha: list = field(default_factory=lambda: [0.5 + 0j])
    nbar: list = field(default_factory=lambda: [1.0])
    squeeze_r: list = field(default_factory=lambda: [0.5])
    squeeze_phi: list = field(default_factory=lambda: [0.0])
    grid: int = extract.GRID_POINTS
    seed: int = 42
    tol_scale: float = 1.0
    paper_strict: bool = False
    fmt: str = "json"
    out: Optional[str] = None
    state_dir: Optional[str] = None
    z: Optional[list] = None
    points: list = field(default_factory=list)
    max_order: int = MOMENT_ORDER
    interior: Optional[int] = None
    db: Optional[str] = None

    def echo(self) -> dict:
        """Config fields that shape the numbers; output paths and thread count are left out."""
        return {
            "command": self.command,
            "modes": self.modes,
            "cutoff": self.cutoff,
            "kind": self.kind,
            "alpha": [[c.real, c.imag] for c in self.alpha],
            "nbar": list(self.nbar),
            "squeeze_r": list(self.squeeze_r),
            "squeeze_phi": list(self.squeeze_phi),
            "grid": self.grid,
            "seed": self.seed,
            "tol_scale": self.tol_scale,
            "paper_strict": self.paper_strict,
            "interior": self.interior,
            "state_dir": self.state_dir,
            "z": [[c.real, c.imag] for c in self.z] if self.z else None,
            "max_order": self.max_order,
        }


def parse_complex_list(text: str) -> list[complex]:
    """'0.5,1j,0.7071+0.7071j' -> [0.5, 1j, (0.7071+0.7071j)]."""
    try:
        values = [complex(part.strip().replace(" ", "")) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidParametersError(f"Could not parse complex list '{text}'.")
    if not values:
        raise InvalidParametersError(f"Empty complex list '{text}'.")
    return values


def parse_float_list(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidParametersError(f"Could not parse number list '{text}'.")
    if not values:
        raise InvalidParametersError(f"Empty number list '{text}'.")
    return values


def resolve_threads() -> int:
    """GAUSSFOCK_THREADS as a positive integer; all cores when unset."""
    raw = os.getenv("GAUSSFOCK_THREADS")
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        threads = int(raw)
    except ValueError:
        raise InvalidParametersError(f"GAUSSFOCK_THREADS must be a positive integer, got '{raw}'.")
    if threads < 1:
        raise InvalidParametersError(f"GAUSSFOCK_THREADS must be a positive integer, got '{raw}'.")
    return threads


def _broadcast(values: list, n: int, label: str) -> list:
    if len(values) == 1:
        return values * n
    if len(values) != n:
        raise DimensionMismatchError(f"--{label} has {len(values)} entries for {n} modes.")
    return values


def build_kind(config: RunConfig) -> fock.StateKind:
    if config.kind == "vacuum":
        return fock.StateKind.vacuum()
    if config.kind == "coherent":
        return fock.StateKind.coherent(_broadcast(config.alpha, config.modes, "alpha"))
    if config.kind == "thermal":
        return fock.StateKind.thermal(_broadcast(config.nbar, config.modes, "nbar"))
    if config.kind == "squeezed":
        return fock.StateKind.squeezed(
            _broadcast(config.squeeze_r, config.modes, "squeeze-r"),
            _broadcast(config.squeeze_phi, config.modes, "squeeze-phi"),
        )
    raise InvalidParametersError(f"Unknown state kind '{config.kind}'.")


def kind_to_json(config: RunConfig) -> dict:
    echo = config.echo()
    return {key: echo[key] for key in ("kind", "alpha", "nbar", "squeeze_r", "squeeze_phi")}


def apply_kind_json(config: RunConfig, kind_json: dict):
    """Inverse of kind_to_json: copies the recorded builder kind back onto config."""
    if kind_json.get("kind"):
        config.kind = kind_json["kind"]
    if kind_json.get("alpha"):
        config.alpha = [complex(re, im) for re, im in kind_json["alpha"]]
    for key in ("nbar", "squeeze_r", "squeeze_phi"):
        if kind_json.get(key):
            setattr(config, key, [float(v) for v in kind_json[key]])


def default_interior(spec: fock.FockSpec, config: RunConfig) -> int:
    """--interior, or d // 10 levels per mode; displaced low levels must stay clear of the cutoff."""
    if config.interior is not None:
        return config.interior
    return max(1, spec.d // 10)


def load_or_build(config: RunConfig) -> tuple[fock.DensityMatrix, gaussian.GaussianParams]:
    """The state from --state DIR (with its recorded analytic params) or from the builder flags."""
    if config.state_dir:
        rho, metadata = state_io.load_state(config.state_dir)
        config.modes, config.cutoff = rho.spec.n, rho.spec.d
        apply_kind_json(config, metadata.get("kind") or {})
        if metadata.get("analytic"):
            params = state_io.params_from_json(metadata["analytic"])
        else:
            params = extract.analytic_params(build_kind(config), rho.spec.n)
        return rho, params
    spec = fock.FockSpec(config.modes, config.cutoff)
    kind = build_kind(config)
    return fock.build_state(spec, kind), extract.analytic_params(kind, spec.n)


# --- Records ---

def _jsonable(value):
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    return value


def make_record(name: str, lhs, rhs, residual: float, tolerance: float,
                passed: bool = None, informational: bool = False) -> dict:
    if passed is None:
        passed = bool(residual <= tolerance)
    return {
        "name": name,
        "paper_anchor": ANCHORS.get(name, "plumbing"),
        "lhs": _jsonable(lhs),
        "rhs": _jsonable(rhs),
        "residual": float(residual),
        "tolerance": float(tolerance),
        "pass": bool(passed),
        "informational": bool(informational),
    }


def summarize(records: list[dict]) -> dict:
    passed = sum(1 for r in records if r["pass"])
    informational = sum(1 for r in records if not r["pass"] and r["informational"])
    failed = sum(1 for r in records if not r["pass"] and not r["informational"])
    return {"total": len(records), "passed": passed, "failed": failed, "informational": informational}


def random_mode_vectors(rng: np.random.Generator, n: int, count: int, radius: float = SWEEP_RADIUS) -> list[ModeVector]:
    """count vectors with uniformly drawn norm in [0, radius] and isotropic direction."""
    vectors = []
    for _ in range(count):
        v = rng.normal(size=2 * n)
        v *= radius * rng.uniform() / np.linalg.norm(v)
        vectors.append(mode_vector(v[:n] + 1j * v[n:]))
    return vectors


def probe_vectors(n: int) -> list[ModeVector]:
    """delta_1, i delta_1 and (delta_1 + i delta_1)/sqrt2."""
    return [
        basis_vector(n, 1),
        basis_vector(n, 1, 1j),
        basis_vector(n, 1, (1 + 1j) / math.sqrt(2.0)),
    ]


# --- Verification Checks ---

def operator_checks(spec: fock.FockSpec, config: RunConfig, rng: np.random.Generator, threads: int) -> list[dict]:
    """Weyl-form CCR, displacement action, unitarity and commutators on the interior block."""
    tol = lambda key: TOLERANCES[key] * config.tol_scale
    interior = default_interior(spec, config)
    pairs = list(zip(random_mode_vectors(rng, spec.n, SWEEP_PAIRS), random_mode_vectors(rng, spec.n, SWEEP_PAIRS)))

    ccr = extract.parallel_map(lambda zu: fock.weyl_relation_residual(spec, zu[0], zu[1], interior), pairs, threads)
    disp = extract.parallel_map(lambda zu: fock.displacement_residual(spec, zu[0], zu[1], interior), pairs, threads)
    unit = extract.parallel_map(lambda zu: fock.unitarity_residual(fock.weyl_operator(spec, zu[0]), interior), pairs, threads)
    comm = extract.parallel_map(lambda zu: fock.field_commutator_residual(spec, zu[0], zu[1], interior), pairs, threads)
    quad = fock.quadrature_ccr_residual(spec, interior)

    return [
        make_record("weyl_ccr", "W_z W_u", "exp(-i Im<z,u>) W_{z+u}", max(ccr), tol("weyl_ccr")),
        make_record("weyl_displacement", "W_z eps_u", "exp(-|z|^2/2 - <z,u>) eps_{z+u}", max(disp), tol("weyl_displacement")),
        make_record("weyl_unitarity", "W_z^dag W_z", "I", max(unit), tol("weyl_unitarity")),
        make_record("field_commutator", "[p(z), p(u)]", "2i Im<z,u> I", max(comm), tol("field_commutator")),
        make_record("quadrature_ccr", "[q_j, p_k]", "i delta_jk I", quad, tol("quadrature_ccr")),
    ]


def state_checks(rho: fock.DensityMatrix, params: gaussian.GaussianParams, config: RunConfig,
                 rng: np.random.Generator, threads: int) -> list[dict]:
    """Extraction round trip and the state-level identities against the extracted covariance."""
    spec = rho.spec
    constant = extract.truncation_constant(config.kind, spec.n)

    def tol(key: str, z_norm: float = None) -> float:
        base = TOLERANCES[key]
        if z_norm is not None:
            base = extract.truncation_tolerance(base, constant, z_norm, spec.d)
        return base * config.tol_scale

    records = []

    result = extract.verify_roundtrip(params, None, spec, grid=config.grid, seed=config.seed, threads=threads, rho=rho)
    if not result.ok:
        raise TruncationError("; ".join(result.errors))
    records.append(make_record("mean_vector", result.w_hat.amplitudes.tolist(), params.w.amplitudes.tolist(),
                               result.residual_w, tol("mean_vector", 1.0)))
    records.append(make_record("covariance_entries", "S_hat", "S", result.residual_S, tol("covariance_entries", 1.0)))
    records.append(make_record("characteristic_function", "pi^-1/2 tr(rho W_z)", "char_fn(w, S; z)",
                               result.char_fn_residual, tol("characteristic_function", extract.GRID_RADIUS)))

    s_hat = result.S_hat
    fitted = gaussian.GaussianParams(result.w_hat, s_hat)
    pairs = list(zip(random_mode_vectors(rng, spec.n, SWEEP_PAIRS), random_mode_vectors(rng, spec.n, SWEEP_PAIRS)))
    cov = extract.parallel_map(lambda zu: extract.covariance_identity_residual(rho, s_hat, zu[0], zu[1]), pairs, threads)
    records.append(make_record("covariance_identity", "Re tr(rho p(z)p(u)) - <p(z)><p(u)>", "(z, S_hat u)",
                               max(cov), tol("covariance_identity", SWEEP_RADIUS)))

    def variance_residual(z: ModeVector) -> float:
        form = gaussian.covariance_form(fitted, z)
        direct = fock.variance(rho, fock.field_operator(spec, z))
        negative = max(-form, 0.0)
        return max(abs(form - direct), extract.variance_norm_residual(rho, z), negative)

    var = extract.parallel_map(variance_residual, [zu[0] for zu in pairs], threads)
    records.append(make_record("variance_identity", "(z, S_hat z)", "V(p(z))^2", max(var),
                               tol("variance_identity", SWEEP_RADIUS)))

    worst_gap, worst = -math.inf, None
    violations = 0
    unc_pairs = zip(random_mode_vectors(rng, spec.n, UNCERTAINTY_PAIRS), random_mode_vectors(rng, spec.n, UNCERTAINTY_PAIRS))
    for z, u in unc_pairs:
        check = gaussian.uncertainty_check(fitted, z, u)
        gap = check.rhs - check.lhs
        if gap > tol("uncertainty"):
            violations += 1
        if gap > worst_gap:
            worst_gap, worst = gap, check
    records.append(make_record("uncertainty", worst.lhs, worst.rhs, max(worst_gap, 0.0), tol("uncertainty"),
                               passed=violations == 0))

    report = gaussian.bona_fide(fitted)
    records.append(make_record("bona_fide_hermitian", report.min_eig_S_minus_iJ_hermitian, 0.0,
                               max(-report.min_eig_S_minus_iJ_hermitian, 0.0), tol("bona_fide_hermitian"),
                               passed=report.passes_hermitian_reading))
    real_informational = not config.paper_strict and not report.passes_real_reading
    records.append(make_record("bona_fide_real", report.min_eig_S, 1.0, max(1.0 - report.min_eig_S, 0.0),
                               tol("bona_fide_real"), passed=report.passes_real_reading,
                               informational=real_informational))
    norm_tol = tol("norm_bounds")
    norm_ok = report.norm_S_inv <= 1.0 + norm_tol and 1.0 <= report.norm_S + 2.0 * norm_tol
    records.append(make_record("norm_bounds", [report.norm_S_inv, report.norm_S], [1.0, 1.0],
                               max(report.norm_S_inv - 1.0, 1.0 - report.norm_S, 0.0), norm_tol,
                               passed=norm_ok, informational=real_informational and not norm_ok))

    bridge_worst = 0.0
    for z in probe_vectors(spec.n):
        rows = extract.weyl_moment_bridge(rho, params, z, MOMENT_ORDER)
        bridge_worst = max(bridge_worst, max(row.relative_error for row in rows))
    records.append(make_record("weyl_moment_bridge", "tr(rho p(z)^n)", "recurrence m_n", bridge_worst,
                               tol("weyl_moment_bridge", 1.0)))

    z1 = basis_vector(spec.n, 1)
    p_z1 = fock.field_operator(spec, z1)
    direct = integrability.direct_moment(rho, p_z1, 2)
    value, err = integrability.moment_via_yosida(rho, p_z1, 2)
    records.append(make_record("yosida_moment", value, direct, abs(value - direct),
                               tol("yosida_moment") * max(1.0, abs(direct))))

    probe = extract.amenability_probe(rho, z1, basis_vector(spec.n, 1, 1j))
    records.append(make_record("amenability_symplectic", probe.trace_zu.imag, 1.0, probe.sym_check,
                               tol("amenability_symplectic", 1.0)))
    normal_probe = extract.amenability_probe(rho, z1, z1)
    route_gap = abs(normal_probe.normal_route - normal_probe.trace_zu) if normal_probe.normal_route is not None else math.inf
    records.append(make_record("normal_trace_route", normal_probe.normal_route, normal_probe.trace_zu, route_gap,
                               tol("normal_trace_route")))

    records.append(make_record("leakage", rho.leakage, 0.0, rho.leakage, 1.0, passed=True))
    return records


# --- Output ---

def write_json(payload: dict, path: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def write_table(df: pd.DataFrame, path: str, fmt: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    if fmt == "csv":
        df.to_csv(path, index=False, float_format="%.17g")
    else:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(df.to_dict(orient="records"), f, indent=2)
            f.write("\n")


# --- Commands ---

def cmd_build(config: RunConfig) -> int:
    spec = fock.FockSpec(config.modes, config.cutoff)
    kind = build_kind(config)
    print(f"Building {config.kind} state on {spec.n} mode(s), cutoff {spec.d} (D={spec.dim})...")
    rho = fock.build_state(spec, kind)
    params = extract.analytic_params(kind, spec.n)
    out_dir = config.out or f"{config.kind}_state"
    bin_path, meta_path = state_io.save_state(rho, out_dir, kind=kind_to_json(config), params=params)
    print(f"💾 Wrote '{bin_path}' and '{meta_path}' (leakage {rho.leakage:.3e}).")
    return EXIT_OK


def cmd_verify(config: RunConfig, threads: int = 1) -> tuple[dict, int]:
    """Runs every check on the state and writes the report; returns (report, exit code)."""
    started = datetime.datetime.now()
    t0 = time.perf_counter()
    rng = np.random.default_rng(config.seed)

    rho, params = load_or_build(config)
    print(f"Verifying {config.kind} state on {rho.spec.n} mode(s), cutoff {rho.spec.d}...")
    records = operator_checks(rho.spec, config, rng, threads)
    records += state_checks(rho, params, config, rng, threads)

    for record in records:
        if record["pass"]:
            continue
        marker = "⚠️" if record["informational"] else "❌"
        print(f"{marker} {record['name']}: residual {record['residual']:.3e} > tolerance {record['tolerance']:.3e}")

    summary = summarize(records)
    report = {
        "artifact_version": ARTIFACT_VERSION,
        "header": {
            "started_at": started.isoformat(),
            "wall_time_s": time.perf_counter() - t0,
        },
        "config": config.echo(),
        "tolerance_model": {
            "form": "max(base, C ||z||^4 / d) * tol_scale",
            "C": extract.truncation_constant(config.kind, rho.spec.n),
            "d": rho.spec.d,
        },
        "records": records,
        "summary": summary,
    }

    out_path = config.out or "verify_report.json"
    if config.fmt == "csv":
        write_table(pd.DataFrame(records), out_path, "csv")
    else:
        write_json(report, out_path)
    print(f"💾 Report written to '{out_path}'.")

    if config.db:
        results_store.save_report_to_duckdb(report, config.db, CONFIG["RECORDS_TABLE"], CONFIG["RUNS_TABLE"])

    if summary["failed"]:
        print(f"❌ {summary['failed']} of {summary['total']} check(s) failed.")
        return report, EXIT_FAILED
    print(f"✅ {summary['passed']} of {summary['total']} check(s) passed ({summary['informational']} informational).")
    return report, EXIT_OK


def moments_table(rho: fock.DensityMatrix, params: gaussian.GaussianParams, z: ModeVector, max_order: int) -> pd.DataFrame:
    """Recurrence, Yosida-limit and t-derivative values of <p(z)^n> for n = 0..max_order."""
    if not 0 <= max_order <= integrability.DERIVATIVE_MAX_ORDER:
        raise InvalidParametersError(
            f"--max-order must lie in 0..{integrability.DERIVATIVE_MAX_ORDER}, got {max_order}."
        )
    p_z = fock.field_operator(rho.spec, z)
    recurrence = gaussian.raw_weyl_moments(params, z, max_order)
    rows = []
    for n in range(max_order + 1):
        yosida_value, _ = integrability.moment_via_yosida(rho, p_z, n)
        derivative_value = integrability.moment_via_derivative(rho, p_z, n)
        rows.append({
            "n": n,
            "recurrence_value": recurrence[n],
            "yosida_value": yosida_value,
            "derivative_value": derivative_value,
            "abs_err_yosida": abs(yosida_value - recurrence[n]),
            "abs_err_derivative": abs(derivative_value - recurrence[n]),
        })
    return pd.DataFrame(rows)


def cmd_moments(config: RunConfig) -> int:
    rho, params = load_or_build(config)
    z = mode_vector(_broadcast(config.z, rho.spec.n, "z")) if config.z else basis_vector(rho.spec.n, 1)
    print(f"Computing Weyl moments up to order {config.max_order} for z={z.amplitudes.tolist()}...")
    df = moments_table(rho, params, z, config.max_order)
    out_path = config.out or ("moments.csv" if config.fmt == "csv" else "moments.json")
    write_table(df, out_path, config.fmt)
    print(f"💾 Moments written to '{out_path}'.")
    return EXIT_OK


def charfn_table(rho: fock.DensityMatrix, params: gaussian.GaussianParams, points: list[ModeVector],
                 threads: int = 1) -> pd.DataFrame:
    numeric = extract.parallel_map(lambda z: extract.numeric_char_fn(rho, z), points, threads)
    rows = []
    for z, num in zip(points, numeric):
        row = {}
        for j, zj in enumerate(z.amplitudes, start=1):
            row[f"z{j}_re"] = zj.real
            row[f"z{j}_im"] = zj.imag
        analytic = gaussian.char_fn(params, z)
        row.update({
            "analytic_re": analytic.real,
            "analytic_im": analytic.imag,
            "numeric_re": num.real,
            "numeric_im": num.imag,
            "abs_residual": abs(num - analytic),
        })
        rows.append(row)
    return pd.DataFrame(rows)


def cmd_charfn(config: RunConfig, threads: int = 1) -> int:
    rho, params = load_or_build(config)
    if config.points:
        points = [mode_vector(_broadcast(p, rho.spec.n, "point")) for p in config.points]
    else:
        if config.grid < 2:
            raise InvalidParametersError(f"--grid must be at least 2, got {config.grid}.")
        points = extract.sample_grid(rho.spec.n, grid=config.grid, seed=config.seed)
    print(f"Sampling the characteristic function at {len(points)} point(s)...")
    df = charfn_table(rho, params, points, threads)
    out_path = config.out or ("charfn.csv" if config.fmt == "csv" else "charfn.json")
    write_table(df, out_path, config.fmt)
    print(f"💾 Samples written to '{out_path}' (max residual {df['abs_residual'].max():.3e}).")
    return EXIT_OK


# --- Argument Parsing ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussfock", description="Truncated Fock-space checks for boson Gaussian states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, default_fmt: str):
        p.add_argument("--modes", type=int, default=1, help="Number of modes n (default: 1).")
        p.add_argument("--cutoff", type=int, default=30, help="Levels per mode d (default: 30).")
        p.add_argument("--kind", choices=fock.STATE_KINDS, default="vacuum", help="State builder.")
        p.add_argument("--alpha", type=str, default="0.5", help="Coherent amplitudes, comma-separated complex.")
        p.add_argument("--nbar", type=str, default="1", help="Thermal mean occupations, comma-separated.")
        p.add_argument("--squeeze-r", dest="squeeze_r", type=str, default="0.5", help="Squeezing magnitudes.")
        p.add_argument("--squeeze-phi", dest="squeeze_phi", type=str, default="0", help="Squeezing phases.")
        p.add_argument("--seed", type=int, default=CONFIG["SEED"], help="Seed for all sampling.")
        p.add_argument("--format", dest="fmt", choices=["json", "csv"], default=default_fmt)
        p.add_argument("-o", "--out", type=str, default=None, help="Output path.")

    def add_state_source(p: argparse.ArgumentParser):
        p.add_argument("--state", dest="state_dir", type=str, default=None, help="Directory written by 'build'.")

    p_build = sub.add_parser("build", help="Build a fixture density matrix and write it to disk.")
    add_common(p_build, "json")

    p_verify = sub.add_parser("verify", help="Run the verification sweep and write a report.")
    add_common(p_verify, "json")
    add_state_source(p_verify)
    p_verify.add_argument("--grid", type=int, default=extract.GRID_POINTS, help="Grid points per real dimension.")
    p_verify.add_argument("--tol-scale", dest="tol_scale", type=float, default=1.0, help="Multiplies every tolerance.")
    p_verify.add_argument("--paper-strict", dest="paper_strict", action="store_true",
                          help="Enforce the real reading of S - iJ >= 0.")
    p_verify.add_argument("--interior", type=int, default=None, help="Interior block level bound (default d // 10).")
    p_verify.add_argument("--db", type=str, default=None, help="Append the report to this DuckDB ledger.")

    p_moments = sub.add_parser("moments", help="Tabulate <p(z)^n> by recurrence, Yosida limit and t-derivative.")
    add_common(p_moments, "csv")
    add_state_source(p_moments)
    p_moments.add_argument("--z", type=str, default=None, help="Comma-separated complex components of z.")
    p_moments.add_argument("--max-order", dest="max_order", type=int, default=MOMENT_ORDER)

    p_charfn = sub.add_parser("charfn", help="Sample analytic and numeric characteristic functions.")
    add_common(p_charfn, "csv")
    add_state_source(p_charfn)
    p_charfn.add_argument("--grid", type=int, default=extract.GRID_POINTS, help="Grid points per real dimension.")
    p_charfn.add_argument("--point", dest="points", action="append", default=None,
                          help="Explicit sample point (comma-separated complex); repeatable.")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(
        command=args.command,
        modes=args.modes,
        cutoff=args.cutoff,
        kind=args.kind,
        alpha=parse_complex_list(args.alpha),
        nbar=parse_float_list(args.nbar),
        squeeze_r=parse_float_list(args.squeeze_r),
        squeeze_phi=parse_float_list(args.squeeze_phi),
        seed=args.seed,
        fmt=args.fmt,
        out=args.out,
    )
    config.state_dir = getattr(args, "state_dir", None)
    config.grid = getattr(args, "grid", config.grid)
    config.tol_scale = getattr(args, "tol_scale", 1.0)
    config.paper_strict = getattr(args, "paper_strict", False)
    config.interior = getattr(args, "interior", None)
    config.db = getattr(args, "db", None)
    config.max_order = getattr(args, "max_order", MOMENT_ORDER)
    if getattr(args, "z", None):
        config.z = parse_complex_list(args.z)
    if getattr(args, "points", None):
        config.points = [parse_complex_list(p) for p in args.points]
    if config.tol_scale <= 0:
        raise InvalidParametersError(f"--tol-scale must be positive, got {config.tol_scale}.")
    return config


# --- Main Execution ---

def main(argv: list[str] = None) -> int:
    """Parses argv, runs one command and returns its exit code."""
    args = build_parser().parse_args(argv)
    try:
        threads = resolve_threads()
        config = config_from_args(args)
        if config.command == "build":
            return cmd_build(config)
        if config.command == "verify":
            return cmd_verify(config, threads)[1]
        if config.command == "moments":
            return cmd_moments(config)
        return cmd_charfn(config, threads)
    except (TruncationError, NonConvergenceError) as e:
        print(f"❌ {type(e).__name__}: {e}")
        return EXIT_TRUNCATION
    except (InvalidParametersError, DimensionMismatchError, NonNormalOperatorError) as e:
        print(f"❌ Invalid configuration: {e}")
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError, KeyError) as e:
        print(f"❌ Could not read or write files: {e}")
        traceback.print_exc()
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
