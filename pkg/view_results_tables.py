# view_results_tables.py - Prints the verification runs and records stored in the DuckDB ledger

import os
import sys
import traceback

import duckdb
from dotenv import load_dotenv

# --- Configuration ---
load_dotenv()

DUCKDB_DATABASE_PATH = os.getenv("GAUSSFOCK_RESULTS_DB", "gaussfock_results.duckdb")
RECORDS_TABLE_NAME = os.getenv("GAUSSFOCK_RECORDS_TABLE", "verification_records")
RUNS_TABLE_NAME = os.getenv("GAUSSFOCK_RUNS_TABLE", "verification_runs")


# --- Helper Function to Query and Display a Table ---
def query_and_display_table(con, table_name: str, db_path: str, failed_only: bool = False):
    """Prints a ledger table; with failed_only, only records that did not pass."""
    print(f"\n--- Contents of table: '{table_name}' ---")
    try:
        table_exists = con.execute(
            f"SELECT COUNT(*) FROM information_schema.tables WHERE table_name = '{table_name}'"
        ).fetchone()[0] > 0
        if not table_exists:
            print(f"Table '{table_name}' does not exist in the database '{db_path}'.")
            return

        query = f"SELECT * FROM {table_name}"
        if failed_only:
            query += ' WHERE NOT "pass"'
        df = con.execute(query).fetchdf()
        if df.empty:
            print(f"Table '{table_name}' has no matching rows.")
        else:
            print(f"Found {len(df)} row(s) in '{table_name}':")
            print(df)
    except duckdb.Error as e:
        print(f"❌ DuckDB Error querying table '{table_name}': {e}")
        traceback.print_exc()


# --- Main Execution ---
if __name__ == "__main__":
    db_path = DUCKDB_DATABASE_PATH
    if not os.path.exists(db_path):
        print(f"❌ DuckDB database file not found at '{db_path}'. Run 'verify --db' or run_full_verification.py first.")
        sys.exit(1)

    failed_only = "--failed" in sys.argv[1:]
    with duckdb.connect(database=db_path, read_only=True) as con:
        query_and_display_table(con, RUNS_TABLE_NAME, db_path)
        query_and_display_table(con, RECORDS_TABLE_NAME, db_path, failed_only=failed_only)
