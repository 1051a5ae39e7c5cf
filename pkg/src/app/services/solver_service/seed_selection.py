import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Selection:
    node: int
    inc: float
    tie_key: Optional[float] = None
    no_gain: bool = False


def _eligible(index, candidates):
    eligible = ~index.selected
    if candidates is not None:
        eligible = eligible & candidates
    if not eligible.any():
        raise ValueError("no unselected candidate node is left")
    return eligible


def _open_pairs(index):
    """Pair slots whose owner still needs sets and whose member is in one."""
    owner_req = index.req[index.pair_u]
    return (owner_req > 0) & (index.pair_count > 0), owner_req


def ssbt_select(index, c, candidates=None):
    """
    Balanced truncation pick.

    inc(v) sums min(overlap(v, R_u), c * req(u)) over targets u with
    req(u) > 0; the largest inc wins, smallest id on ties.

    Args:
        index (RRIndex): Current state, not modified.
        c (float): Truncation multiplier, at least 1.
        candidates (numpy.ndarray): Optional mask of selectable nodes.
    """
    eligible = _eligible(index, candidates)
    open_pairs, owner_req = _open_pairs(index)
    weights = np.minimum(index.pair_count[open_pairs], c * owner_req[open_pairs])
    inc = np.bincount(index.pair_v[open_pairs], weights=weights, minlength=index.n)
    inc = np.where(eligible, inc, -1.0)
    node = int(np.argmax(inc))
    if inc[node] <= 0:
        node = int(np.flatnonzero(eligible)[0])
        return Selection(node=node, inc=0.0, no_gain=True)
    return Selection(node=node, inc=float(inc[node]))


def ssad_select(index, candidates=None):
    """
    Activation-dominance pick, compared lexicographically on
    (number of targets v alone brings to req, truncated overlap sum, -id).
    """
    eligible = _eligible(index, candidates)
    open_pairs, owner_req = _open_pairs(index)
    members = index.pair_v[open_pairs]
    counts = index.pair_count[open_pairs]
    reqs = owner_req[open_pairs]
    key1 = np.bincount(members, weights=(counts >= reqs).astype(np.int64), minlength=index.n)
    key2 = np.bincount(members, weights=np.minimum(counts, reqs), minlength=index.n)

    key1 = np.where(eligible, key1, -1)
    best1 = key1.max()
    key2 = np.where(eligible & (key1 == best1), key2, -1)
    node = int(np.argmax(key2))
    if best1 <= 0 and key2[node] <= 0:
        node = int(np.flatnonzero(eligible)[0])
        return Selection(node=node, inc=0.0, tie_key=0.0, no_gain=True)
    return Selection(node=node, inc=float(key1[node]), tie_key=float(key2[node]))
