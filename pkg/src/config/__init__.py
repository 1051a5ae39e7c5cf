import os
import logging

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE = os.getenv("LOG_FILE", "cumulative_activation.log")

# Oracle limits
ORACLE_EDGE_CAP = int(os.getenv("ORACLE_EDGE_CAP", "20"))
ORACLE_NODE_CAP = int(os.getenv("ORACLE_NODE_CAP", "12"))

# Solver defaults
DEFAULT_THETA = int(os.getenv("DEFAULT_THETA", "1000"))
DEFAULT_EPSILON = float(os.getenv("DEFAULT_EPSILON", "0.1"))
DEFAULT_C_IM = float(os.getenv("DEFAULT_C_IM", "1.7"))
DEFAULT_C_SM = float(os.getenv("DEFAULT_C_SM", "1.0"))

# Monte Carlo
DEFAULT_EVAL_RUNS = int(os.getenv("DEFAULT_EVAL_RUNS", "10000"))
RUN_BLOCK_SIZE = int(os.getenv("RUN_BLOCK_SIZE", "1000"))

RR_MEMORY_BUDGET = int(os.getenv("RR_MEMORY_BUDGET", str(2 * 1024 ** 3)))

PAGERANK_RESTART = float(os.getenv("PAGERANK_RESTART", "0.15"))
PAGERANK_TOL = float(os.getenv("PAGERANK_TOL", "1e-4"))
PAGERANK_MAX_ITER = int(os.getenv("PAGERANK_MAX_ITER", "10000"))

THRESHOLD_GUARD = float(os.getenv("THRESHOLD_GUARD", "1e-9"))

SWEEP_JOBS = int(os.getenv("SWEEP_JOBS", "1"))


def setup_logging(level=None, log_file=None):
    """
    Configure root logging for the entry points.

    Args:
        level (str): Log level name, defaults to LOG_LEVEL.
        log_file (str): File to mirror logs into, defaults to LOG_FILE. Empty string disables it.
    """
    handlers = [logging.StreamHandler()]
    log_file = LOG_FILE if log_file is None else log_file
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO),
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )
