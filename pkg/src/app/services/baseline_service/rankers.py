import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix

from src.app.utils.exceptions import ConvergenceError
from src.app.utils.helpers import STREAM_RANDOM_RANKING, substream
from src.config import PAGERANK_MAX_ITER, PAGERANK_RESTART, PAGERANK_TOL

logger = logging.getLogger(__name__)

# scores closer than this are ordered by node id
SCORE_DECIMALS = 12


@dataclass(frozen=True, eq=False)
class Ranking:
    """A permutation of 0..n-1, best first, with optional per-node scores."""
    name: str
    order: np.ndarray
    scores: Optional[np.ndarray] = None

    def prefix(self, k):
        return [int(v) for v in self.order[:k]]

    def __len__(self):
        return int(self.order.shape[0])


def _descending(scores):
    ids = np.arange(scores.shape[0])
    return np.lexsort((ids, -np.round(scores, SCORE_DECIMALS)))


def rank_by_degree(graph):
    degree = graph.out_degree.astype(np.float64)
    return Ranking("degree", _descending(degree), degree)


def random_ranking(graph, seed=0):
    rng = substream(seed, STREAM_RANDOM_RANKING)
    return Ranking("random", rng.permutation(graph.n))


def reverse_transition(graph):
    """
    Row-stochastic matrix of the reversed chain: from v to each in-neighbour u
    with probability p_uv / sum_w p_wv. Rows without in-weight stay empty.
    """
    weight_in = np.bincount(graph.out_dst, weights=graph.out_prob, minlength=graph.n)
    rows = np.repeat(np.arange(graph.n), graph.in_degree)
    denom = weight_in[rows]
    data = np.divide(graph.in_prob, denom, out=np.zeros_like(graph.in_prob), where=denom > 0)
    matrix = csr_matrix((data, (rows, graph.in_src)), shape=(graph.n, graph.n))
    return matrix, weight_in <= 0


def pagerank(graph, restart=PAGERANK_RESTART, tol=PAGERANK_TOL, max_iter=PAGERANK_MAX_ITER):
    """
    Power iteration on the reversed, probability-weighted chain.

    Restart jumps uniformly; dangling nodes spread their mass uniformly.
    Stops once successive score vectors differ by at most tol in L1.

    Raises:
        ConvergenceError: when max_iter iterations do not reach tol.
    """
    if not 0.0 < restart < 1.0:
        raise ValueError("restart must be in (0,1)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = graph.n
    matrix, dangling = reverse_transition(graph)
    step = matrix.T.tocsr()
    scores = np.full(n, 1.0 / n)
    for iteration in range(1, max_iter + 1):
        walked = step.dot(scores) + scores[dangling].sum() / n
        updated = (1.0 - restart) * walked + restart / n
        updated /= updated.sum()
        delta = float(np.abs(updated - scores).sum())
        scores = updated
        if delta <= tol:
            logger.info(f"PageRank converged after {iteration} iterations (L1 change {delta:.3g})")
            return Ranking("pagerank", _descending(scores), scores)
    raise ConvergenceError(f"PageRank did not reach tol={tol} within {max_iter} iterations")
