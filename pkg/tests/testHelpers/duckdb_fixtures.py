# tests/testHelpers/duckdb_fixtures.py
import pytest
import duckdb
import os
import tempfile
import pandas as pd

# --- Fixtures for Database Connection and File ---

@pytest.fixture(scope="function")
def temp_duckdb_file():
    """Provides a path to a temporary DuckDB ledger file."""
    with tempfile.TemporaryDirectory() as tmpdir:
        # DuckDB creates the file on connect
        yield os.path.join(tmpdir, "test_results.duckdb")


@pytest.fixture(scope="function")
def temp_duckdb_con(temp_duckdb_file):
    """Provides a connection to the temporary ledger file."""
    con = duckdb.connect(database=temp_duckdb_file, read_only=False)
    yield con
    con.close()


# --- Sample Reports ---

def make_sample_record(name, residual, tolerance, passed, informational=False):
    return {
        "name": name,
        "paper_anchor": "plumbing",
        "lhs": residual,
        "rhs": [0.0, 1.0],
        "residual": residual,
        "tolerance": tolerance,
        "pass": passed,
        "informational": informational,
    }


@pytest.fixture(scope="function")
def sample_report():
    """A minimal verify report: two passing records, one informational failure."""
    records = [
        make_sample_record("mean_vector", 1e-12, 1e-7, True),
        make_sample_record("covariance_entries", 2e-9, 1e-5, True),
        make_sample_record("bona_fide_real", 0.63, 1e-10, False, informational=True),
    ]
    return {
        "artifact_version": 1,
        "header": {"started_at": "2026-01-01T12:00:00", "wall_time_s": 0.5},
        "config": {"command": "verify", "kind": "squeezed", "modes": 1, "cutoff": 40, "seed": 42},
        "records": records,
        "summary": {"total": 3, "passed": 2, "failed": 0, "informational": 1},
    }


# --- Database Interaction Helper Functions ---

def table_exists(con, table_name):
    """Checks if a table exists in the database."""
    result = con.execute(f"SELECT count(*) FROM information_schema.tables WHERE table_name = '{table_name}'").fetchone()
    return result[0] > 0

def get_row_count(con, table_name):
    """Gets the number of rows in a table."""
    if not table_exists(con, table_name):
        return 0
    result = con.execute(f"SELECT count(*) FROM {table_name}").fetchone()
    return result[0] if result else 0

def get_table_data(con, table_name):
    """Fetches all data from a table as a Pandas DataFrame."""
    if not table_exists(con, table_name):
        return pd.DataFrame()
    return con.execute(f"SELECT * FROM {table_name}").fetchdf()
