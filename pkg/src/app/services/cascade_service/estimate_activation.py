import math
import logging
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from src.app.services.cascade_service.simulate_cascade import CascadeSimulator
from src.app.services.oracle_service import exact_activation_probs
from src.app.utils.helpers import STREAM_CASCADE, run_blocks, substream
from src.config import RUN_BLOCK_SIZE

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ActivationEstimate:
    """X_u activation counts after R runs; P_hat_u = X_u / R."""
    runs: int
    counts: np.ndarray
    seeds: frozenset

    @property
    def probs(self):
        return self.counts / float(self.runs)

    def sigma(self, target=None):
        """Estimated expected influence, summed over the target set when given."""
        probs = self.probs
        if target is not None:
            probs = probs[target.mask]
        return float(probs.sum())


def _simulate_block(graph, seeds, runs, master_seed, namespace, stream, block):
    rng = substream(master_seed, namespace, *stream, block)
    simulator = CascadeSimulator(graph)
    counts = np.zeros(graph.n, dtype=np.int64)
    for _ in range(runs):
        counts[simulator.run(seeds, rng)] += 1
    return counts


def activation_counts(graph, seeds, runs, seed=0, namespace=STREAM_CASCADE,
                      block_size=RUN_BLOCK_SIZE, n_jobs=1, stream=()):
    """
    Runs R cascades and counts how often every node ends up active.

    Runs are grouped in blocks; block b always draws from substream
    (seed, namespace, *stream, b), so any n_jobs gives the same counts.
    stream keeps callers such as sweep grid points on disjoint streams.
    """
    if runs < 1:
        raise ValueError("run count R must be at least 1")
    seeds = sorted(set(int(s) for s in seeds))
    if not seeds:
        return ActivationEstimate(runs, np.zeros(graph.n, dtype=np.int64), frozenset())

    blocks = run_blocks(runs, block_size)
    if n_jobs == 1 or len(blocks) == 1:
        partials = [_simulate_block(graph, seeds, size, seed, namespace, stream, b) for b, size in blocks]
    else:
        partials = Parallel(n_jobs=n_jobs)(
            delayed(_simulate_block)(graph, seeds, size, seed, namespace, stream, b) for b, size in blocks
        )
    counts = np.sum(partials, axis=0).astype(np.int64)
    return ActivationEstimate(runs, counts, frozenset(seeds))


def estimate(graph, seeds, thresholds, target, runs, c=1.0, seed=0,
             namespace=STREAM_CASCADE, n_jobs=1, stream=()):
    """
    Monte-Carlo estimate of P_u(S), f(S), F(S) and rho_U(S).

    Returns:
        tuple: (ActivationEstimate, f_hat, F_hat, rho_hat) where
        f_hat = sum over U of min(P_hat_u, tau_u), F_hat uses c * tau_u and
        rho_hat counts u in U with P_hat_u >= tau_u.
    """
    result = activation_counts(graph, seeds, runs, seed=seed, namespace=namespace, n_jobs=n_jobs, stream=stream)
    probs = result.probs[target.mask]
    tau = thresholds.tau[target.mask]
    f_hat = float(np.minimum(probs, tau).sum())
    big_f_hat = float(np.minimum(probs, c * tau).sum())
    rho_hat = int(np.count_nonzero(probs >= tau))
    return result, f_hat, big_f_hat, rho_hat


def required_runs(n, gamma, delta):
    """
    Smallest R with R >= n^2 ln(2 n^(delta+1)) / (2 gamma^2).

    The value is advisory: it grows quadratically with n.
    """
    if n < 1 or gamma <= 0 or delta <= 0:
        raise ValueError("need n >= 1, gamma > 0 and delta > 0")
    log_term = math.log(2.0) + (delta + 1.0) * math.log(n)
    value = n * n * log_term / (2.0 * gamma * gamma)
    if not math.isfinite(value):
        raise OverflowError(f"run count for n={n}, gamma={gamma}, delta={delta} overflows")
    return max(1, math.ceil(value))


def error_bound(n, runs, delta=1.0):
    """The gamma guaranteed by R runs, inverting required_runs."""
    log_term = math.log(2.0) + (delta + 1.0) * math.log(max(n, 1))
    return n * math.sqrt(log_term / (2.0 * runs))


def frequency_check(graph, seeds, u, runs, tau_u, seed=0, oracle=None):
    """
    Compares the empirical activation frequency of u against tau_u.

    When P_u(S) > tau_u the frequency should reach tau_u, otherwise it should
    stay at or below it. The boundary P_u(S) == tau_u is rejected.

    Returns:
        bool: whether the predicted event happened.
    """
    exact = exact_activation_probs(oracle or graph, seeds).probs[u]
    if abs(exact - tau_u) <= 1e-12:
        raise ValueError(f"tau_u equals P_u(S)={exact}; the boundary case is excluded")
    frequency = activation_counts(graph, seeds, runs, seed=seed).probs[u]
    if exact > tau_u:
        return bool(frequency >= tau_u)
    return bool(frequency <= tau_u)
