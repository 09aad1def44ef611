# results_store.py - Appends verification records and run summaries to a DuckDB ledger

import datetime
import os
import traceback

import duckdb
import pandas as pd

RECORD_COLUMNS = ["name", "paper_anchor", "lhs", "rhs", "residual", "tolerance", "pass", "informational"]


# --- Table Helpers ---

def table_exists(con, table_name: str) -> bool:
    result = con.execute(
        f"SELECT COUNT(*) FROM information_schema.tables WHERE table_name = '{table_name}'"
    ).fetchone()
    return result[0] > 0


def records_to_dataframe(report: dict) -> pd.DataFrame:
    """Flattens the report records into a frame; lhs/rhs are stored as text."""
    rows = []
    for record in report.get("records", []):
        rows.append({
            "name": record["name"],
            "paper_anchor": record["paper_anchor"],
            "lhs": str(record["lhs"]),
            "rhs": str(record["rhs"]),
            "residual": float(record["residual"]),
            "tolerance": float(record["tolerance"]),
            "pass": bool(record["pass"]),
            "informational": bool(record.get("informational", False)),
        })
    return pd.DataFrame(rows, columns=RECORD_COLUMNS)


# --- Loading ---

def load_records_to_duckdb(con, df: pd.DataFrame, table_name: str, run_id: str):
    """
    Appends record rows to a DuckDB table, tagging them with run_id and a load timestamp.
    Creates the table from the DataFrame schema if it does not exist.

    Args:
        con: Active DuckDB connection object.
        df (pd.DataFrame): Records, one row per check.
        table_name (str): Target table.
        run_id (str): Identifier shared by every record of one verify run.
    """
    if df.empty:
        print("🚫 No records to load, skipping DuckDB load.")
        return

    df = df.copy()
    df["run_id"] = run_id
    df["loaded_at"] = datetime.datetime.now()

    try:
        if not table_exists(con, table_name):
            print(f"Table '{table_name}' does not exist. Creating table...")
            con.execute(f"CREATE TABLE {table_name} AS SELECT * FROM df WHERE 1=0;")
        con.execute(f"INSERT INTO {table_name} SELECT * FROM df")
        print(f"✅ Loaded {len(df)} record(s) into '{table_name}'.")
    except duckdb.Error as e:
        print(f"❌ DuckDB Error loading records: {e}")
        traceback.print_exc()
        raise


def save_report_to_duckdb(report: dict, db_path: str, records_table: str, runs_table: str) -> str:
    """
    Writes one run row and all its records. Returns the run id.

    The run id is the report's command plus its wall-clock start, so repeated runs
    land as separate rows.
    """
    db_directory = os.path.dirname(db_path)
    if db_directory and not os.path.exists(db_directory):
        os.makedirs(db_directory, exist_ok=True)

    header = report.get("header", {})
    run_id = f"{report['config'].get('command', 'verify')}-{header.get('started_at', datetime.datetime.now().isoformat())}"
    summary = report["summary"]
    run_df = pd.DataFrame([{
        "run_id": run_id,
        "artifact_version": int(report["artifact_version"]),
        "kind": str(report["config"].get("kind", "")),
        "modes": int(report["config"].get("modes", 0)),
        "cutoff": int(report["config"].get("cutoff", 0)),
        "seed": int(report["config"].get("seed", 0)),
        "total": int(summary["total"]),
        "passed": int(summary["passed"]),
        "failed": int(summary["failed"]),
        "informational": int(summary["informational"]),
    }])

    with duckdb.connect(database=db_path, read_only=False) as con:
        load_records_to_duckdb(con, run_df.drop(columns=["run_id"]), runs_table, run_id)
        load_records_to_duckdb(con, records_to_dataframe(report), records_table, run_id)
    print(f"💾 Saved run '{run_id}' to '{db_path}'.")
    return run_id


# --- Queries ---

def query_run_summary(con, runs_table: str) -> pd.DataFrame:
    """Per-run pass/fail counts, newest first."""
    if not table_exists(con, runs_table):
        return pd.DataFrame()
    return con.execute(
        f"SELECT run_id, kind, modes, cutoff, seed, total, passed, failed, informational, loaded_at "
        f"FROM {runs_table} ORDER BY loaded_at DESC"
    ).fetchdf()
