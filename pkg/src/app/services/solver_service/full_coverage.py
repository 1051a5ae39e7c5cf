import heapq
import math
import time
import logging

import numpy as np

from src.app.models.problem_models import Estimator, RunReport, StepRecord
from src.app.services.cascade_service import LiveEdgeSamples, error_bound
from src.app.services.oracle_service import LiveEdgeOracle
from src.app.services.rr_service import build_index
from src.app.services.solver_service.greedy_framework import check_index
from src.app.utils.exceptions import InfeasibleError
from src.app.utils.helpers import format_ms
from src.config import THRESHOLD_GUARD

logger = logging.getLogger(__name__)

# marginal gains are compared after rounding to this many decimals
GAIN_DECIMALS = 12


class ExactObjective:
    gamma = 0.0

    def __init__(self, graph):
        self.oracle = LiveEdgeOracle(graph)

    def probs(self, seeds):
        return self.oracle.activation_probs(seeds).probs


class CoverageObjective:
    """P_u(S) estimated as the fraction of R_u hit by S."""

    def __init__(self, index):
        self.index = index
        self.gamma = index.target_mask.sum() * math.sqrt(math.log(2.0 * index.n) / (2.0 * index.theta))

    def probs(self, seeds):
        return self.index.coverage_counts(seeds) / float(self.index.theta)


class SampleObjective:
    """P_u(S) as reach frequency over a fixed batch of live-edge samples."""

    def __init__(self, graph, runs, seed):
        self.samples = LiveEdgeSamples(graph, runs, seed=seed)
        self.gamma = error_bound(graph.n, runs)

    def probs(self, seeds):
        return self.samples.probs(seeds)


def make_objective(graph, spec, index=None):
    if spec.estimator == Estimator.EXACT:
        return ExactObjective(graph)
    if spec.estimator == Estimator.MONTE_CARLO:
        return SampleObjective(graph, spec.runs, spec.seed)
    if index is None:
        index = build_index(
            graph, spec.target, spec.thresholds, spec.theta,
            seed=spec.seed, memory_budget=spec.memory_budget,
        )
    else:
        check_index(index, spec)
    return CoverageObjective(index)


class TruncatedSum:
    """f_hat(S): sum over U of min(P_hat_u(S), tau_u)."""

    def __init__(self, objective, spec):
        self.objective = objective
        self.mask = spec.target.mask
        self.tau = spec.thresholds.tau[self.mask]
        self.evaluations = 0

    def __call__(self, seeds):
        self.evaluations += 1
        probs = self.objective.probs(seeds)[self.mask]
        return float(np.minimum(probs, self.tau).sum())

    def active(self, seeds):
        probs = self.objective.probs(seeds)[self.mask]
        return int(np.count_nonzero(probs >= self.tau - THRESHOLD_GUARD))


def _quantize(gain):
    return round(gain, GAIN_DECIMALS)


def _naive_pick(f, seeds, value, pool):
    best, best_gain = None, -math.inf
    for v in pool:
        gain = _quantize(f(seeds + [v]) - value)
        if gain > best_gain:
            best, best_gain = v, gain
    return best, best_gain


class LazyQueue:
    """
    CELF queue of (-bound, node, round). A popped entry whose bound was
    computed this round is the true argmax because marginals only shrink.
    """

    def __init__(self, f, pool):
        self.f = f
        self.heap = []
        base = f([])
        for v in pool:
            heapq.heappush(self.heap, (-_quantize(f([v]) - base), v, 0))

    def pick(self, seeds, value, step):
        while self.heap:
            neg_gain, v, stamp = heapq.heappop(self.heap)
            if stamp == step:
                return v, -neg_gain
            gain = _quantize(self.f(seeds + [v]) - value)
            heapq.heappush(self.heap, (-gain, v, step))
        return None, -math.inf


def solve_full_coverage(graph, spec, index=None, lazy=True):
    """
    Greedy on the truncated sum until f_hat(S) >= sum(tau_u) - epsilon.

    Args:
        graph (Graph): Graph with probabilities.
        spec (ProblemSpec): Supplies target, thresholds, epsilon, estimator,
            theta or runs, seed and the candidate pool. eta is ignored.
        index (RRIndex): Optional prebuilt index for the rr-index estimator.
        lazy (bool): CELF lazy evaluation; False recomputes every marginal.

    Returns:
        RunReport: estimated_value holds the final f_hat.

    Raises:
        InfeasibleError: the candidate pool ran out below the stopping level.
    """
    report = RunReport(algorithm="GREEDY-FULL", kind="full-coverage", master_seed=spec.seed)
    start = time.perf_counter()
    objective = make_objective(graph, spec, index)
    f = TruncatedSum(objective, spec)
    report.timings_ms["estimator"] = format_ms(time.perf_counter() - start)

    goal = float(f.tau.sum()) - spec.epsilon
    pool = [int(v) for v in np.flatnonzero(spec.candidate_mask())]
    start = time.perf_counter()
    seeds = []
    value = f(seeds)
    queue = LazyQueue(f, pool) if lazy else None
    remaining = set(pool)

    while value < goal and remaining:
        step = len(seeds) + 1
        if lazy:
            v, gain = queue.pick(seeds, value, len(seeds))
        else:
            v, gain = _naive_pick(f, seeds, value, sorted(remaining))
        low_signal = bool(gain < 2.0 * objective.gamma)
        if low_signal:
            logger.warning(
                f"Step {step}: best marginal {gain} is below the estimator noise floor "
                f"{2.0 * objective.gamma:.4g}"
            )
        seeds.append(v)
        remaining.discard(v)
        value = f(seeds)
        record = StepRecord(
            step=step, node=v, label=graph.label(v), inc=gain,
            est_active=f.active(seeds), no_gain=gain <= 0, low_signal=low_signal,
        )
        logger.debug(f"Step {step}: picked {record.label} gain={gain} f={value}")
        report.steps.append(record)
        report.seeds.append(v)
        report.seed_labels.append(record.label)

    report.timings_ms["select"] = format_ms(time.perf_counter() - start)
    report.estimated_value = value
    report.estimated_active = f.active(seeds)
    if value < goal:
        report.status = "infeasible"
        raise InfeasibleError(
            f"f_hat={value:.6g} stays below {goal:.6g} with every candidate selected",
            achieved=report.estimated_active,
            report=report,
        )
    logger.info(
        f"Full-coverage greedy finished: {len(seeds)} seeds, f_hat={value:.6g}, "
        f"{f.evaluations} evaluations, {report.timings_ms}"
    )
    return report
