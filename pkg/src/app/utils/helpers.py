import math

import numpy as np

from src.config import THRESHOLD_GUARD

# Stream namespaces. A generator is identified by (master seed, namespace, *index), so
# solver, evaluation and probability streams never overlap.
STREAM_RR = 1
STREAM_CASCADE = 2
STREAM_EVAL = 3
STREAM_TRIVALENCY = 4
STREAM_RANDOM_RANKING = 5
STREAM_LIVE_EDGE = 6
STREAM_SYNTHETIC = 7


def substream(master_seed, namespace, *index):
    """
    Returns an independent numpy Generator for (master_seed, namespace, *index).

    Args:
        master_seed (int): Run-level seed.
        namespace (int): One of the STREAM_* constants.
        *index (int): Further integers, e.g. a root node or a block number.

    Returns:
        numpy.random.Generator
    """
    key = (int(namespace),) + tuple(int(i) for i in index)
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=key)
    return np.random.default_rng(seq)


def requirement(tau, theta):
    """Number of RR sets that must be hit, ceil(tau * theta) with a float guard band."""
    raw = np.asarray(tau, dtype=np.float64) * theta - THRESHOLD_GUARD
    return np.ceil(raw).astype(np.int64)


def run_blocks(total_runs, block_size):
    """Splits total_runs into consecutive (block_index, runs_in_block) pairs."""
    blocks = []
    start = 0
    b = 0
    while start < total_runs:
        size = min(block_size, total_runs - start)
        blocks.append((b, size))
        start += size
        b += 1
    return blocks


def gather_ranges(ptr, items):
    """
    Concatenates the CSR slices ptr[i]:ptr[i+1] for every i in items.

    Returns an index array usable against the CSR payload arrays.
    """
    items = np.asarray(items, dtype=np.int64)
    if items.size == 0:
        return np.empty(0, dtype=np.int64)
    starts = ptr[items]
    lengths = ptr[items + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(lengths)[:-1])), lengths)
    return offsets + np.arange(total, dtype=np.int64)


def format_ms(seconds):
    return round(seconds * 1000.0, 3)


def log_ratio_bound(total, eps):
    """1 + ln(total / eps): the size factor of greedy submodular cover."""
    return 1.0 + math.log(total / eps)
