import logging

import numpy as np

logger = logging.getLogger(__name__)


def coverage_greedy(index, k, candidates=None, until_active=None):
    """
    Max-coverage greedy over the pooled live RR sets of every target.

    Each pick is the node in the most live sets (smallest id on ties); the
    sets it hits are then removed. Runs on a copy, the given index is untouched.

    Args:
        until_active (int): Stop early once this many targets reach their
            requirement on the working copy.

    Returns:
        list: seed ids in pick order, at most k of them.
    """
    if k > index.n:
        raise ValueError(f"k={k} exceeds n={index.n}")
    index = index.copy()
    seeds = []
    for _ in range(k):
        if until_active is not None and index.estimated_active >= until_active:
            break
        eligible = ~index.selected
        if candidates is not None:
            eligible &= candidates
        if not eligible.any():
            break
        covered = np.bincount(index.pair_v, weights=index.pair_count, minlength=index.n)
        covered = np.where(eligible, covered, -1.0)
        node = int(np.argmax(covered))
        if covered[node] <= 0:
            node = int(np.flatnonzero(eligible)[0])
        index.remove_hit_sets(node)
        seeds.append(node)
        logger.debug(f"Coverage greedy picked {node} covering {covered[node]:.0f} sets")
    return seeds


def prefix_reaching(index, order, eta):
    """
    Shortest prefix of order whose picks bring eta targets to req(u) <= 0
    on a copy of index.

    Returns:
        tuple: (prefix, reached) where reached tells whether eta was met.
    """
    index = index.copy()
    prefix = []
    for v in order:
        if index.estimated_active >= eta:
            break
        index.remove_hit_sets(int(v))
        prefix.append(int(v))
    return prefix, index.estimated_active >= eta
