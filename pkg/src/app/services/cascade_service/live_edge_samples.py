import logging

import numpy as np
from scipy.sparse import csr_matrix

from src.app.utils.helpers import STREAM_LIVE_EDGE, run_blocks, substream
from src.config import RUN_BLOCK_SIZE

logger = logging.getLogger(__name__)


class LiveEdgeSamples:
    """
    R live-edge graphs drawn once and reused for every seed set.

    Evaluating many seed sets against the same samples makes the activation
    frequencies a coverage function of S, so the truncated sum built on them
    stays monotone and submodular.
    """

    def __init__(self, graph, runs, seed=0, block_size=RUN_BLOCK_SIZE):
        if runs < 1:
            raise ValueError("run count R must be at least 1")
        self.graph = graph
        self.runs = runs
        blocks = []
        for b, size in run_blocks(runs, block_size):
            rng = substream(seed, STREAM_LIVE_EDGE, b)
            blocks.append(rng.random((size, graph.m)) < graph.out_prob)
        self.live = np.concatenate(blocks, axis=0) if blocks else np.zeros((0, graph.m), dtype=bool)
        self._src = graph.edge_src
        self._to_dst = csr_matrix(
            (np.ones(graph.m, dtype=np.float32), (np.arange(graph.m), graph.out_dst)),
            shape=(graph.m, graph.n),
        )
        logger.debug(f"Drew {runs} live-edge samples over {graph.m} edges")

    def counts(self, seeds):
        """Number of samples in which each node is reachable from seeds."""
        n = self.graph.n
        seeds = np.asarray(sorted(set(int(s) for s in seeds)), dtype=np.int64)
        if seeds.size == 0:
            return np.zeros(n, dtype=np.int64)
        active = np.zeros((self.runs, n), dtype=bool)
        active[:, seeds] = True
        frontier = active.copy()
        while frontier.any():
            fired = frontier[:, self._src] & self.live
            reached = np.asarray(fired.astype(np.float32) @ self._to_dst) > 0
            frontier = reached & ~active
            active |= frontier
        return active.sum(axis=0).astype(np.int64)

    def probs(self, seeds):
        return self.counts(seeds) / float(self.runs)
