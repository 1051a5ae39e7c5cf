import logging

import numpy as np

from src.app.models.problem_models import EvaluationSummary
from src.app.services.cascade_service import estimate
from src.app.services.oracle_service import LiveEdgeOracle
from src.app.utils.helpers import STREAM_EVAL
from src.config import DEFAULT_EVAL_RUNS, ORACLE_EDGE_CAP, THRESHOLD_GUARD

logger = logging.getLogger(__name__)


def evaluate_seeds(graph, thresholds, target, seeds, runs=DEFAULT_EVAL_RUNS, eval_seed=0, n_jobs=1, stream=()):
    """
    Scores a seed set by fresh Monte-Carlo cascades.

    The cascades draw from the evaluation namespace only, so no solver RR set
    or solver stream is reused and a fixed eval_seed gives the same numbers
    whatever seed the solver ran with. stream adds further substream keys,
    e.g. the grid index of a sweep point.

    Returns:
        tuple: (EvaluationSummary, numpy.ndarray of P_hat_u for every node)
    """
    result, _, _, rho_hat = estimate(
        graph, seeds, thresholds, target, runs, seed=eval_seed, namespace=STREAM_EVAL, n_jobs=n_jobs, stream=stream,
    )
    summary = EvaluationSummary(
        rho_hat=rho_hat,
        sigma_hat=result.sigma(target),
        runs=runs,
        eval_seed=eval_seed,
    )
    logger.debug(f"Evaluated {len(result.seeds)} seeds: rho_hat={rho_hat}, sigma_hat={summary.sigma_hat:.4f}")
    return summary, result.probs


def boundary_targets(graph, thresholds, target, seeds, oracle=None):
    """
    Targets whose exact P_u(S) equals tau_u, where Monte-Carlo evaluation is
    a coin flip. Only computed for graphs the oracle can enumerate.

    Returns:
        list or None: node ids, or None when the graph is too large to check.
    """
    if oracle is None:
        if graph.m > ORACLE_EDGE_CAP:
            return None
        oracle = LiveEdgeOracle(graph)
    probs = oracle.activation_probs(seeds).probs
    # P_u = 1 is hit by every run, so tau_u = 1 is not a coin flip
    close = (np.abs(probs - thresholds.tau) <= THRESHOLD_GUARD) & (probs < 1.0 - THRESHOLD_GUARD)
    nodes = [int(u) for u in np.flatnonzero(close & target.mask)]
    if nodes:
        logger.warning(f"Seeds {sorted(seeds)} put targets {nodes} exactly on their threshold")
    return nodes
