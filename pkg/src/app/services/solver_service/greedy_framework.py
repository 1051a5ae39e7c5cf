import time
import logging

from src.app.models.problem_models import ProblemKind, RunReport, StepRecord, Strategy
from src.app.services.rr_service import build_index
from src.app.services.solver_service.seed_selection import ssad_select, ssbt_select
from src.app.utils.exceptions import IndexMismatchError, InfeasibleError
from src.app.utils.helpers import format_ms

logger = logging.getLogger(__name__)


def algorithm_name(spec):
    kind = "IM-CA" if spec.kind == ProblemKind.IM_CA else "SM-CA"
    return f"{spec.strategy.value.upper()}-{kind}"


def prepare_index(graph, spec, index=None, progress=False):
    """
    Fresh RR index for spec: built from scratch, or a reset copy of a given
    index carrying the problem thresholds.
    """
    if index is None:
        return build_index(
            graph, spec.target, spec.thresholds, spec.theta,
            seed=spec.seed, memory_budget=spec.memory_budget, progress=progress,
        )
    check_index(index, spec)
    return index.with_thresholds(spec.thresholds)


def check_index(index, spec):
    """
    Raises IndexMismatchError unless index holds theta sets for exactly the
    problem's target set. The sampling seed is not compared: any seed gives
    a valid sample.
    """
    reasons = index.mismatches(spec.target, theta=spec.theta)
    if reasons:
        raise IndexMismatchError("; ".join(reasons))


def _select(index, spec, candidates):
    if spec.strategy == Strategy.BTG:
        return ssbt_select(index, spec.c, candidates)
    return ssad_select(index, candidates)


def _greedy_step(graph, index, spec, candidates, report):
    picked = _select(index, spec, candidates)
    index.remove_hit_sets(picked.node)
    step = StepRecord(
        step=len(report.steps) + 1,
        node=picked.node,
        label=graph.label(picked.node),
        inc=picked.inc,
        tie_key=picked.tie_key,
        est_active=index.estimated_active,
        no_gain=picked.no_gain,
    )
    if picked.no_gain:
        logger.warning(f"Step {step.step}: no marginal gain left, picked {step.label}")
    logger.debug(
        f"Step {step.step}: picked {step.label} inc={step.inc} "
        f"tie={step.tie_key} active={step.est_active}"
    )
    report.steps.append(step)
    report.seeds.append(picked.node)
    report.seed_labels.append(step.label)


def solve_im_ca(graph, spec, index=None, progress=False):
    """
    Greedy IM-CA: k picks on the RR index, each followed by removal of the
    sets the pick hits.

    Args:
        graph (Graph): Graph with probabilities.
        spec (ProblemSpec): kind IM-CA.
        index (RRIndex): Optional prebuilt index; it is copied, never mutated.

    Returns:
        RunReport: k distinct seeds with one StepRecord per pick.
    """
    if spec.kind != ProblemKind.IM_CA:
        raise ValueError("solve_im_ca needs an IM-CA problem")
    candidates = spec.candidate_mask()
    available = int(candidates.sum())
    if spec.k > available:
        raise ValueError(f"k={spec.k} exceeds the {available} selectable nodes")

    report = RunReport(algorithm=algorithm_name(spec), kind=spec.kind.value, master_seed=spec.seed)
    start = time.perf_counter()
    index = prepare_index(graph, spec, index, progress)
    report.timings_ms["index"] = format_ms(time.perf_counter() - start)

    start = time.perf_counter()
    for _ in range(spec.k):
        _greedy_step(graph, index, spec, candidates, report)
    report.timings_ms["select"] = format_ms(time.perf_counter() - start)
    report.estimated_active = index.estimated_active
    logger.info(
        f"{report.algorithm} finished: k={spec.k}, estimated active {report.estimated_active}, "
        f"{report.timings_ms}"
    )
    return report


def solve_sm_ca(graph, spec, index=None, progress=False):
    """
    Greedy SM-CA: picks until at least eta targets have req(u) <= 0.

    A pick need not activate anything when U is a strict subset of V, so the
    loop is bounded by the number of selectable nodes rather than eta.

    Raises:
        InfeasibleError: every selectable node was picked and fewer than eta
        targets are estimated active. The partial report rides along.
    """
    if spec.kind != ProblemKind.SM_CA:
        raise ValueError("solve_sm_ca needs an SM-CA problem")
    candidates = spec.candidate_mask()
    available = int(candidates.sum())

    report = RunReport(algorithm=algorithm_name(spec), kind=spec.kind.value, master_seed=spec.seed)
    start = time.perf_counter()
    index = prepare_index(graph, spec, index, progress)
    report.timings_ms["index"] = format_ms(time.perf_counter() - start)

    start = time.perf_counter()
    while index.estimated_active < spec.eta and len(report.seeds) < available:
        _greedy_step(graph, index, spec, candidates, report)
    report.timings_ms["select"] = format_ms(time.perf_counter() - start)
    report.estimated_active = index.estimated_active

    if report.estimated_active < spec.eta:
        report.status = "infeasible"
        logger.warning(
            f"{report.algorithm} infeasible: {report.estimated_active} of eta={spec.eta} "
            f"after selecting all {available} candidates"
        )
        raise InfeasibleError(
            f"only {report.estimated_active} targets reach their threshold, eta={spec.eta}",
            achieved=report.estimated_active,
            report=report,
        )
    logger.info(
        f"{report.algorithm} finished: {len(report.seeds)} seeds for eta={spec.eta}, "
        f"{report.timings_ms}"
    )
    return report


def solve(graph, spec, index=None, progress=False):
    if spec.kind == ProblemKind.IM_CA:
        return solve_im_ca(graph, spec, index, progress)
    return solve_sm_ca(graph, spec, index, progress)
