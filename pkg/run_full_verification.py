# run_full_verification.py - Runs every fixture state through build, verify, moments and charfn

import datetime
import os
import sys
import tempfile
import traceback

import duckdb
from dotenv import load_dotenv

# --- Path Setup ---
project_root = os.path.abspath(os.path.dirname(__file__))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

try:
    from gaussfock.cli import CONFIG, EXIT_OK, main as gaussfock_main
    from gaussfock.results_store import query_run_summary
except ImportError as e:
    print("Error: Could not import the gaussfock package.")
    print(f"Ensure 'gaussfock' sits in the project root ({project_root}). Details: {e}")
    sys.exit(1)

# --- Configuration ---
load_dotenv()

DUCKDB_DATABASE_PATH = CONFIG["RESULTS_DB"]
RUNS_TABLE_NAME = CONFIG["RUNS_TABLE"]

# name, builder flags, cutoff
FIXTURES = [
    {"name": "vacuum", "args": ["--kind", "vacuum"], "cutoff": 30},
    {"name": "coherent_0.5", "args": ["--kind", "coherent", "--alpha", "0.5"], "cutoff": 30},
    {"name": "thermal_0.5", "args": ["--kind", "thermal", "--nbar", "0.5"], "cutoff": 40},
    {"name": "thermal_1", "args": ["--kind", "thermal", "--nbar", "1"], "cutoff": 40},
    {"name": "squeezed_0.5", "args": ["--kind", "squeezed", "--squeeze-r", "0.5"], "cutoff": 40},
]


def run_fixture(fixture: dict, scratch_dir: str, db_path: str) -> dict:
    """Runs the four commands for one fixture; returns {step: exit_code}."""
    name = fixture["name"]
    state_dir = os.path.join(scratch_dir, name)
    common = ["--cutoff", str(fixture["cutoff"])]
    steps = {
        "build": ["build", *fixture["args"], *common, "-o", state_dir],
        "verify": ["verify", "--state", state_dir, "--db", db_path,
                   "-o", os.path.join(scratch_dir, f"{name}_report.json")],
        "moments": ["moments", "--state", state_dir, "-o", os.path.join(scratch_dir, f"{name}_moments.csv")],
        "charfn": ["charfn", "--state", state_dir, "-o", os.path.join(scratch_dir, f"{name}_charfn.csv")],
    }
    codes = {}
    for step, argv in steps.items():
        print(f"\n--- {name}: {step} ---")
        codes[step] = gaussfock_main(argv)
        if step == "build" and codes[step] != EXIT_OK:
            print(f"❌ Build failed for {name}; skipping its remaining steps.")
            break
    return codes


# --- Main Pipeline Execution ---
if __name__ == "__main__":
    print("Running the full verification pipeline...")
    pipeline_start_time = datetime.datetime.now()
    pipeline_success = True
    db_path = DUCKDB_DATABASE_PATH

    db_directory = os.path.dirname(db_path)
    if db_directory and not os.path.exists(db_directory):
        try:
            os.makedirs(db_directory, exist_ok=True)
            print(f"Ensured DuckDB directory exists: '{db_directory}'")
        except OSError as e:
            print(f"❌ Error creating DuckDB directory '{db_directory}': {e}. Exiting.")
            traceback.print_exc()
            sys.exit(1)

    results = {}
    with tempfile.TemporaryDirectory() as scratch_dir:
        for step_number, fixture in enumerate(FIXTURES, start=1):
            print(f"\n--- Step {step_number}: Fixture '{fixture['name']}' ---")
            try:
                codes = run_fixture(fixture, scratch_dir, db_path)
            except Exception as e:
                print(f"❌ An error occurred while running fixture '{fixture['name']}': {e}")
                traceback.print_exc()
                codes = {"error": 1}
            results[fixture["name"]] = codes
            if any(code != EXIT_OK for code in codes.values()) or len(codes) < 4:
                pipeline_success = False
                print(f"❌ Fixture '{fixture['name']}' finished with exit codes {codes}.")
            else:
                print(f"✅ Fixture '{fixture['name']}' passed every step.")

    # --- Ledger Summary ---
    print("\n--- Ledger Summary ---")
    try:
        with duckdb.connect(database=db_path, read_only=True) as con:
            summary_df = query_run_summary(con, RUNS_TABLE_NAME)
        if summary_df.empty:
            print(f"Table '{RUNS_TABLE_NAME}' is empty or missing.")
        else:
            print(summary_df.head(len(FIXTURES)))
    except Exception as e:
        print(f"❌ Error reading the ledger: {e}")
        traceback.print_exc()

    # --- Full Pipeline Summary ---
    print("\n--- Full Pipeline Summary ---")
    pipeline_end_time = datetime.datetime.now()
    print(f"Pipeline started at: {pipeline_start_time.isoformat()}")
    print(f"Pipeline finished at: {pipeline_end_time.isoformat()}")
    print(f"Total duration: {pipeline_end_time - pipeline_start_time}")
    for name, codes in results.items():
        print(f" - {name}: {codes}")

    if pipeline_success:
        print("\n🎉 Full verification pipeline executed successfully!")
    else:
        print("\n❌ One or more fixtures failed. Review the output above for details.")
        sys.exit(1)
