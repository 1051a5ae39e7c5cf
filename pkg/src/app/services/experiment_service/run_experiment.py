import time
import logging

from joblib import Parallel, delayed
from tqdm import tqdm

from src.app.models.graph_models import TargetSet, Thresholds
from src.app.models.problem_models import ProblemKind, ProblemSpec, Strategy
from src.app.services.baseline_service import (
    coverage_greedy,
    pagerank,
    prefix_reaching,
    random_ranking,
    rank_by_degree,
)
from src.app.services.experiment_service.evaluation import boundary_targets, evaluate_seeds
from src.app.services.graph_service import (
    assign_probabilities,
    load_edge_list_file,
    load_target_set,
    load_thresholds,
    validate,
)
from src.app.services.oracle_service import LiveEdgeOracle
from src.app.services.rr_service import build_index
from src.app.services.solver_service import solve_im_ca, solve_sm_ca
from src.app.utils.exceptions import ConfigError, InfeasibleError
from src.app.utils.helpers import format_ms
from src.config import ORACLE_EDGE_CAP

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "algorithm", "tau", "c", "budget_or_eta", "seeds", "seed_count",
    "rho_eval", "runtime_ms", "status", "master_seed",
)
TUNE_COLUMNS = ("tau", "c", "k", "rho_eval", "gain_vs_c1")

RANKERS = {
    "degree": lambda graph, config: rank_by_degree(graph),
    "pagerank": lambda graph, config: pagerank(graph),
    "random": lambda graph, config: random_ranking(graph, config.seed),
}


def load_inputs(config):
    """Graph with probabilities and the target set named by config."""
    graph = load_edge_list_file(config.graph, directed=config.directed)
    model = config.probability_model
    if model is not None:
        graph = assign_probabilities(graph, model, rng_seed=config.prob_seed)
    elif not graph.has_probabilities:
        raise ConfigError(f"{config.graph} has no edge probabilities and no prob_model is set")
    if config.target_file:
        with open(config.target_file, "r") as f:
            target = load_target_set(f, graph)
    else:
        target = TargetSet.all_nodes(graph.n)
    _check_valid(graph, target=target)
    return graph, target


def thresholds_for(config, graph, tau):
    if config.threshold_file:
        with open(config.threshold_file, "r") as f:
            thresholds = load_thresholds(f, graph, base_tau=tau)
    else:
        thresholds = Thresholds.uniform(graph.n, tau)
    _check_valid(graph, thresholds=thresholds)
    return thresholds


def _check_valid(graph, thresholds=None, target=None):
    report = validate(graph, thresholds, target)
    if not report.ok:
        raise ConfigError("invalid experiment input: " + "; ".join(report.findings))


class GridPoint:
    """
    Everything evaluated at one tau: solver and baseline rows share thresholds.

    Rows of one point share the evaluation stream keyed by grid_index, so
    algorithms are compared on common cascades; different points draw
    disjoint cascades.
    """

    def __init__(self, config, graph, target, grid_index, tau, index, rankings, oracle):
        self.config = config
        self.grid_index = grid_index
        self.graph = graph
        self.target = target
        self.tau = tau
        self.thresholds = thresholds_for(config, graph, tau)
        self.index = index.with_thresholds(self.thresholds) if index is not None else None
        self.rankings = rankings
        self.oracle = oracle
        self.rows = []

    def add_row(self, algorithm, c, budget, seeds, runtime_ms, status="ok"):
        evaluation, _ = evaluate_seeds(
            self.graph, self.thresholds, self.target, seeds,
            runs=self.config.eval_runs, eval_seed=self.config.eval_seed, stream=(self.grid_index,),
        )
        if status == "ok" and self.oracle is not None:
            if boundary_targets(self.graph, self.thresholds, self.target, seeds, self.oracle):
                status = "boundary"
        self.rows.append({
            "algorithm": algorithm,
            "tau": f"{self.tau:g}",
            "c": "" if c is None else f"{c:g}",
            "budget_or_eta": budget,
            "seeds": " ".join(self.graph.label(v) for v in seeds),
            "seed_count": len(seeds),
            "rho_eval": evaluation.rho_hat,
            "runtime_ms": runtime_ms,
            "status": status,
            "master_seed": self.config.seed,
        })

    def spec(self, strategy, c, budget):
        kwargs = {"k": budget} if self.config.kind == ProblemKind.IM_CA else {"eta": budget}
        return ProblemSpec(
            kind=self.config.kind, target=self.target, thresholds=self.thresholds,
            strategy=strategy, c=c, theta=self.config.theta, seed=self.config.seed, **kwargs,
        )

    def run_solver(self, strategy, c):
        budgets = self.config.budgets
        spec = self.spec(strategy, c, budgets[-1])
        if self.config.kind == ProblemKind.IM_CA:
            report = solve_im_ca(self.graph, spec, index=self.index)
        else:
            try:
                report = solve_sm_ca(self.graph, spec, index=self.index)
            except InfeasibleError as e:
                report = e.report
        runtime = round(sum(report.timings_ms.values()), 3)
        name = report.algorithm
        for budget in budgets:
            if self.config.kind == ProblemKind.IM_CA:
                self.add_row(name, c, budget, report.seeds[:budget], runtime)
                continue
            # SM-CA sequences are prefix consistent: eta is met at the first step reaching it
            reached = [s.step for s in report.steps if s.est_active >= budget]
            if reached:
                self.add_row(name, c, budget, report.seeds[:reached[0]], runtime)
            else:
                self.add_row(name, c, budget, report.seeds, runtime, status="infeasible")

    def run_sequence(self, name, order, runtime):
        for budget in self.config.budgets:
            if self.config.kind == ProblemKind.IM_CA:
                self.add_row(name, None, budget, [int(v) for v in order[:budget]], runtime)
                continue
            prefix, reached = prefix_reaching(self.index, order, budget)
            self.add_row(name, None, budget, prefix, runtime, status="ok" if reached else "infeasible")

    def run(self):
        for algorithm in self.config.algorithms:
            if algorithm == "btg":
                for c in self.config.c:
                    self.run_solver(Strategy.BTG, c)
            elif algorithm == "adg":
                self.run_solver(Strategy.ADG, None)
            elif algorithm == "coverage-greedy":
                start = time.perf_counter()
                if self.config.kind == ProblemKind.IM_CA:
                    order = coverage_greedy(self.index, self.config.budgets[-1])
                else:
                    order = coverage_greedy(self.index, self.graph.n, until_active=self.config.budgets[-1])
                self.run_sequence("COVERAGE-GREEDY", order, format_ms(time.perf_counter() - start))
            else:
                ranking, runtime = self.rankings[algorithm]
                self.run_sequence(algorithm.upper(), ranking.order, runtime)
        logger.info(f"Grid point tau={self.tau:g} produced {len(self.rows)} rows")
        return self.rows


def _run_point(config, graph, target, grid_index, tau, index, rankings, oracle):
    return GridPoint(config, graph, target, grid_index, tau, index, rankings, oracle).run()


def _check_budgets(config, graph, target):
    limit = graph.n if config.kind == ProblemKind.IM_CA else target.size
    if config.budgets[-1] > limit:
        name = "k" if config.kind == ProblemKind.IM_CA else "eta"
        raise ConfigError(f"{name}={config.budgets[-1]} exceeds its limit {limit}")


def _shared_state(config, graph, target):
    """RR index and baseline rankings computed once for the whole grid."""
    index = None
    if config.kind == ProblemKind.SM_CA or any(a in ("btg", "adg", "coverage-greedy") for a in config.algorithms):
        # thresholds are replaced per grid point; sets do not depend on them
        index = build_index(
            graph, target, Thresholds.uniform(graph.n, 1.0), config.theta,
            seed=config.seed, progress=True,
        )
    rankings = {}
    for name, ranker in RANKERS.items():
        if name in config.algorithms:
            start = time.perf_counter()
            ranking = ranker(graph, config)
            rankings[name] = (ranking, format_ms(time.perf_counter() - start))
    oracle = LiveEdgeOracle(graph) if graph.m <= ORACLE_EDGE_CAP else None
    return index, rankings, oracle


def run_experiment(config):
    """
    Solves and evaluates every grid point of config.

    Every seed set is scored by independent Monte-Carlo cascades from the
    evaluation stream. Infeasible SM-CA points become rows with
    status=infeasible; the run carries on.

    Returns:
        list: row dicts keyed by CSV_COLUMNS, ordered by tau, then algorithm
        as listed, then c, then k or eta.
    """
    graph, target = load_inputs(config)
    _check_budgets(config, graph, target)
    for tau in config.tau:
        thresholds_for(config, graph, tau)
    index, rankings, oracle = _shared_state(config, graph, target)

    if config.jobs == 1:
        results = [
            _run_point(config, graph, target, i, tau, index, rankings, oracle)
            for i, tau in enumerate(tqdm(config.tau, desc="sweep", disable=len(config.tau) == 1))
        ]
    else:
        results = Parallel(n_jobs=config.jobs)(
            delayed(_run_point)(config, graph, target, i, tau, index, rankings, oracle)
            for i, tau in enumerate(config.tau)
        )
    rows = [row for point in results for row in point]
    logger.info(f"Experiment finished with {len(rows)} rows")
    return rows


def tune_c(config, k=None):
    """
    BTG-IM-CA at a fixed k for every (tau, c), reported as the evaluated
    rho_hat and its gain over c = 1 at the same tau.
    """
    graph, target = load_inputs(config)
    for tau in config.tau:
        thresholds_for(config, graph, tau)
    k = k or config.budgets[-1]
    if k > graph.n:
        raise ConfigError(f"k={k} exceeds n={graph.n}")
    index = build_index(graph, target, Thresholds.uniform(graph.n, 1.0), config.theta, seed=config.seed)
    grid_c = sorted(set([1.0] + list(config.c)))
    rows = []
    for i, tau in enumerate(config.tau):
        thresholds = thresholds_for(config, graph, tau)
        scored = {}
        for c in grid_c:
            spec = ProblemSpec(
                kind=ProblemKind.IM_CA, target=target, thresholds=thresholds, k=k,
                strategy=Strategy.BTG, c=c, theta=config.theta, seed=config.seed,
            )
            report = solve_im_ca(graph, spec, index=index)
            evaluation, _ = evaluate_seeds(
                graph, thresholds, target, report.seeds,
                runs=config.eval_runs, eval_seed=config.eval_seed, stream=(i,),
            )
            scored[c] = evaluation.rho_hat
        for c in grid_c:
            rows.append({
                "tau": f"{tau:g}", "c": f"{c:g}", "k": k,
                "rho_eval": scored[c], "gain_vs_c1": scored[c] - scored[1.0],
            })
        logger.info(f"tau={tau:g}: rho_hat by c {scored}")
    return rows
