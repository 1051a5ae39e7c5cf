import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import numpy as np

from src.app.models.problem_models import ProblemKind
from src.app.services.oracle_service.live_edge_oracle import LiveEdgeOracle, exact_rho
from src.app.utils.exceptions import OracleCapExceeded
from src.config import ORACLE_EDGE_CAP, ORACLE_NODE_CAP

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BruteForceResult:
    seeds: Tuple[int, ...]
    objective: int
    feasible: bool = True

    @property
    def size(self):
        return len(self.seeds)


def brute_force_optimal(graph, problem, oracle=None):
    """
    Reference optimum by exhaustive search over candidate seed sets.

    Sets are visited by size, then lexicographically, so the first optimum
    found is the lexicographically smallest one.

    Returns:
        BruteForceResult: for SM-CA an infeasible instance gives feasible=False
        and the objective reached with every candidate selected.
    """
    if graph.n > ORACLE_NODE_CAP or graph.m > ORACLE_EDGE_CAP:
        raise OracleCapExceeded(
            f"brute force needs n <= {ORACLE_NODE_CAP} and m <= {ORACLE_EDGE_CAP}, "
            f"got n={graph.n}, m={graph.m}"
        )
    oracle = oracle or LiveEdgeOracle(graph)
    candidates = [int(v) for v in np.flatnonzero(problem.candidate_mask())]

    def rho(seeds):
        return exact_rho(oracle, seeds, problem.thresholds, problem.target)

    if problem.kind == ProblemKind.IM_CA:
        if problem.k > len(candidates):
            raise ValueError(f"k={problem.k} exceeds the {len(candidates)} candidates")
        best, best_value = None, -1
        for seeds in combinations(candidates, problem.k):
            value = rho(seeds)
            if value > best_value:
                best, best_value = seeds, value
        logger.info(f"Brute-force IM-CA optimum {best} with rho={best_value}")
        return BruteForceResult(tuple(best), best_value)

    for size in range(1, len(candidates) + 1):
        for seeds in combinations(candidates, size):
            value = rho(seeds)
            if value >= problem.eta:
                logger.info(f"Brute-force SM-CA optimum {seeds} with rho={value}")
                return BruteForceResult(tuple(seeds), value)
    achieved = rho(candidates)
    logger.info(f"SM-CA infeasible: all candidates reach rho={achieved} < eta={problem.eta}")
    return BruteForceResult(tuple(candidates), achieved, feasible=False)
