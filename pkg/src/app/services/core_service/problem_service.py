import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor

from src.app.models.graph_models import TargetSet, Thresholds
from src.app.models.problem_models import ProblemKind, ProblemSpec
from src.app.services.baseline_service import coverage_greedy, pagerank, random_ranking, rank_by_degree
from src.app.services.experiment_service import evaluate_seeds
from src.app.services.graph_service import (
    assign_probabilities,
    load_edge_list_file,
    load_target_set,
    load_thresholds,
    parse_prob_model,
    validate,
)
from src.app.services.rr_service import build_index
from src.app.services.solver_service import solve, solve_full_coverage
from src.app.utils.exceptions import CaError, GraphFormatError, InfeasibleError

logger = logging.getLogger(__name__)

executor = ThreadPoolExecutor(max_workers=2)


def open_problem(graph_path, directed=True, prob_model=None, prob_seed=0, tau=1.0,
                 threshold_path=None, target_path=None):
    """
    Loads graph, thresholds and target set from files and checks them.

    Raises:
        GraphFormatError: unreadable files or failed validation.
    """
    graph = load_edge_list_file(graph_path, directed=directed)
    if prob_model:
        graph = assign_probabilities(graph, parse_prob_model(prob_model), rng_seed=prob_seed)
    if threshold_path:
        with open(threshold_path, "r") as f:
            thresholds = load_thresholds(f, graph, base_tau=tau)
    else:
        thresholds = Thresholds.uniform(graph.n, tau)
    if target_path:
        with open(target_path, "r") as f:
            target = load_target_set(f, graph)
    else:
        target = TargetSet.all_nodes(graph.n)
    report = validate(graph, thresholds, target)
    if not report.ok:
        raise GraphFormatError("; ".join(report.findings))
    logger.info(f"Loaded {graph_path}: n={graph.n}, m={graph.m}, |U|={target.size}")
    return graph, thresholds, target


def _open(data):
    return open_problem(
        data.graph_path, data.directed, data.prob_model, data.prob_seed,
        data.tau, data.threshold_path, data.target_path,
    )


def _solve(data):
    graph, thresholds, target = _open(data)
    candidates = [graph.node(label) for label in data.candidates] if data.candidates else None
    kind = ProblemKind.IM_CA if data.kind == "im-ca" else ProblemKind.SM_CA
    eta = data.eta if data.kind != "full-coverage" else target.size
    spec = ProblemSpec(
        kind=kind, target=target, thresholds=thresholds, k=data.k, eta=eta,
        strategy=data.strategy, c=data.c, theta=data.theta, seed=data.seed,
        epsilon=data.epsilon, estimator=data.estimator, runs=data.runs, candidates=candidates,
    )
    if data.kind == "full-coverage":
        report = solve_full_coverage(graph, spec)
    else:
        report = solve(graph, spec)
    if data.eval_runs:
        eval_seed = data.seed if data.eval_seed is None else data.eval_seed
        report.evaluation, _ = evaluate_seeds(graph, thresholds, target, report.seeds, data.eval_runs, eval_seed)
    return report


def _baseline(data):
    graph, thresholds, target = _open(data)
    if data.name == "coverage-greedy":
        index = build_index(graph, target, thresholds, data.theta, seed=data.seed)
        seeds = coverage_greedy(index, data.k or graph.n)
        return {"name": data.name, "seeds": [graph.label(v) for v in seeds]}
    if data.name == "degree":
        ranking = rank_by_degree(graph)
    elif data.name == "pagerank":
        ranking = pagerank(graph, restart=data.restart, tol=data.tol)
    else:
        ranking = random_ranking(graph, data.seed)
    order = ranking.prefix(data.k or graph.n)
    scores = None if ranking.scores is None else [float(ranking.scores[v]) for v in order]
    return {"name": data.name, "seeds": [graph.label(v) for v in order], "scores": scores}


def _evaluate(data):
    graph, thresholds, target = _open(data)
    seeds = [graph.node(label) for label in data.seeds]
    summary, probs = evaluate_seeds(graph, thresholds, target, seeds, data.runs, data.eval_seed)
    return {
        "evaluation": summary.model_dump(),
        "probabilities": {graph.label(u): float(probs[u]) for u in range(graph.n)},
    }


async def _run(work, data):
    loop = asyncio.get_running_loop()
    try:
        return {"status": True, **(await loop.run_in_executor(executor, work, data))}
    except InfeasibleError as e:
        logger.warning(f"Infeasible request: {e}")
        payload = {"status": False, "message": str(e), "achieved": e.achieved}
        if e.report is not None:
            payload["report"] = e.report.model_dump(mode="json")
        return payload
    except (CaError, ValueError, KeyError, OSError) as e:
        logger.error(f"Request failed: {e}")
        return {"status": False, "message": str(e)}


async def solve_problem(data):
    """
    Solves an IM-CA, SM-CA or full-coverage instance described by a SolveInput.

    Returns:
        dict: status True with the run report, or status False and a message.
    """
    return await _run(lambda d: {"report": _solve(d).model_dump(mode="json")}, data)


async def rank_baseline(data):
    return await _run(_baseline, data)


async def evaluate_seed_set(data):
    return await _run(_evaluate, data)
