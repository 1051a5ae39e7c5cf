import logging
from dataclasses import dataclass

import numpy as np

from src.app.utils.exceptions import OracleCapExceeded
from src.config import ORACLE_EDGE_CAP, THRESHOLD_GUARD

logger = logging.getLogger(__name__)

WEIGHT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class ExactProbs:
    probs: np.ndarray
    seeds: frozenset


def _bit_dtype(width):
    if width <= 16:
        return np.uint16
    if width <= 32:
        return np.uint32
    return np.uint64


class LiveEdgeOracle:
    """
    Exact activation probabilities by enumerating all 2^m live-edge graphs.

    For every live-edge graph the reachable set of each edge-incident node is
    kept as a bitmask, so P_u(S) for any S costs one OR per seed and one
    weighted sum per node.
    """

    def __init__(self, graph, edge_cap=ORACLE_EDGE_CAP):
        if graph.m > edge_cap:
            raise OracleCapExceeded(f"graph has {graph.m} edges, oracle cap is {edge_cap}")
        if not graph.has_probabilities:
            raise ValueError("graph has unassigned edge probabilities")
        self.graph = graph
        m = graph.m
        src = graph.edge_src
        dst = graph.out_dst

        self.incident = np.unique(np.concatenate((src, dst)))
        width = self.incident.shape[0]
        self.position = np.full(graph.n, -1, dtype=np.int64)
        self.position[self.incident] = np.arange(width)
        dtype = _bit_dtype(max(width, 1))

        masks = np.arange(1 << m, dtype=np.int64)
        self.weights = np.ones(masks.shape[0])
        live = []
        for e in range(m):
            bit = ((masks >> e) & 1).astype(bool)
            live.append(bit)
            p = graph.out_prob[e]
            self.weights *= np.where(bit, p, 1.0 - p)
        self.weight_total = float(self.weights.sum())
        if not abs(self.weight_total - 1.0) <= WEIGHT_TOLERANCE:
            raise ValueError(f"live-edge weights sum to {self.weight_total}, expected 1")

        one = dtype(1)
        self.reach = np.tile(
            np.left_shift(one, np.arange(width, dtype=dtype)), (masks.shape[0], 1)
        )
        a = self.position[src]
        b = self.position[dst]
        changed = True
        while changed:
            changed = False
            for e in range(m):
                merged = self.reach[:, a[e]] | np.where(live[e], self.reach[:, b[e]], dtype(0))
                if np.any(merged != self.reach[:, a[e]]):
                    self.reach[:, a[e]] = merged
                    changed = True
        self._dtype = dtype
        logger.debug(f"Oracle enumerated {masks.shape[0]} live-edge graphs")

    def activation_probs(self, seeds):
        seeds = sorted(set(int(s) for s in seeds))
        probs = np.zeros(self.graph.n)
        if not seeds:
            return ExactProbs(probs, frozenset())
        bits = np.zeros(self.weights.shape[0], dtype=self._dtype)
        for s in seeds:
            if self.position[s] >= 0:
                bits |= self.reach[:, self.position[s]]
        for j, u in enumerate(self.incident):
            hit = ((bits >> self._dtype(j)) & self._dtype(1)).astype(bool)
            probs[u] = float(self.weights[hit].sum())
        probs[seeds] = 1.0
        np.clip(probs, 0.0, 1.0, out=probs)
        return ExactProbs(probs, frozenset(seeds))


def _oracle(graph_or_oracle):
    if isinstance(graph_or_oracle, LiveEdgeOracle):
        return graph_or_oracle
    return LiveEdgeOracle(graph_or_oracle)


def exact_activation_probs(graph, seeds):
    """Exact P_u(S) for every node. graph may also be a prebuilt LiveEdgeOracle."""
    return _oracle(graph).activation_probs(seeds)


def exact_rho(graph, seeds, thresholds, target):
    """Number of target nodes with P_u(S) >= tau_u, using a 1e-9 guard band."""
    probs = _oracle(graph).activation_probs(seeds).probs
    active = probs >= thresholds.tau - THRESHOLD_GUARD
    return int(np.count_nonzero(active & target.mask))


def exact_truncated_sum(graph, seeds, thresholds, c=1.0, target=None):
    """
    Exact F(S) = sum of min(P_u(S), c * tau_u).

    c = 1 gives f(S); tau = 1 with c = 1 gives the expected influence sigma(S).
    Sums over all nodes unless a target set is given.
    """
    if c < 1.0:
        raise ValueError("c must be at least 1")
    probs = _oracle(graph).activation_probs(seeds).probs
    values = np.minimum(probs, c * thresholds.tau)
    if target is not None:
        values = values[target.mask]
    return float(values.sum())
