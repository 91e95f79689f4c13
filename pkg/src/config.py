"""
Configuration settings for the linearizability monitor.
"""
import logging
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Logging Configuration
LOG_LEVEL = os.getenv("LINMON_LOG_LEVEL", "WARNING").upper()
LOG_FORMAT = os.getenv("LINMON_LOG_FORMAT", "%(asctime)s %(levelname)s >>> %(message)s")

# Oracle Configuration (brute force, small histories only)
ORACLE_MAX_OPS = int(os.getenv("LINMON_ORACLE_MAX_OPS", "20"))
ORACLE_MAX_STATES = int(os.getenv("LINMON_ORACLE_MAX_STATES", "2000000"))

# Benchmark Configuration
BENCH_REPS = int(os.getenv("LINMON_BENCH_REPS", "5"))
BENCH_SOFT_BUDGET_S = float(os.getenv("LINMON_BENCH_SOFT_BUDGET_S", "10.0"))
BENCH_OUTPUT_PATH = os.getenv("LINMON_BENCH_OUTPUT_PATH", "./bench_results")

# Test Suite Configuration
DIFF_CASES = int(os.getenv("LINMON_DIFF_CASES", "5000"))
RUN_SCALING = os.getenv("LINMON_RUN_SCALING", "0").lower() in ("1", "true", "yes")

# Report format
JSON_SCHEMA_VERSION = 1

# Paths
PROJECT_ROOT = Path(__file__).parent.parent
DATA_PATH = PROJECT_ROOT / "data"
HISTORIES_PATH = DATA_PATH / "histories"


# Validate configuration
def validate_config():
    """Validate that configuration values are usable."""
    # getLevelName maps a known name back to its number
    if not isinstance(logging.getLevelName(LOG_LEVEL), int):
        raise ValueError(f"LINMON_LOG_LEVEL '{LOG_LEVEL}' is not a logging level.")
    if ORACLE_MAX_OPS <= 0 or ORACLE_MAX_STATES <= 0:
        raise ValueError("Oracle budgets must be positive.")
    if BENCH_REPS <= 0:
        raise ValueError("LINMON_BENCH_REPS must be positive.")
    if BENCH_SOFT_BUDGET_S <= 0:
        raise ValueError("LINMON_BENCH_SOFT_BUDGET_S must be positive.")
    return True
