import sys
import json
import logging
import argparse
from contextlib import contextmanager

import numpy as np

from src.app.models.problem_models import Estimator, ProblemKind, ProblemSpec, Strategy
from src.app.services.baseline_service import (
    Ranking,
    coverage_greedy,
    pagerank,
    random_ranking,
    rank_by_degree,
)
from src.app.services.core_service.problem_service import open_problem
from src.app.services.experiment_service import (
    CSV_COLUMNS,
    TUNE_COLUMNS,
    evaluate_seeds,
    load_config,
    run_experiment,
    tune_c,
)
from src.app.services.graph_service import (
    assign_probabilities,
    generate_random_graph,
    load_edge_list_file,
    parse_prob_model,
    probability_summary,
    write_edge_list,
)
from src.app.services.rr_service import build_index
from src.app.services.solver_service import solve, solve_full_coverage
from src.app.utils.exceptions import CaError, InfeasibleError
from src.app.utils.reports import write_ranking, write_rows, write_run_report
from src.config import (
    DEFAULT_EPSILON,
    DEFAULT_EVAL_RUNS,
    DEFAULT_THETA,
    PAGERANK_RESTART,
    PAGERANK_TOL,
    RR_MEMORY_BUDGET,
    setup_logging,
)
from src.database.rr_snapshot import load_snapshot, save_snapshot

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as f:
            yield f


def _graph_args(parser):
    parser.add_argument("graph", help="edge list: 'u v' or 'u v p' per line")
    parser.add_argument("--undirected", action="store_true", help="add both arcs for every line")
    parser.add_argument("--prob-model", help="constant:<p>, weighted_cascade or trivalency[:<seed>]")
    parser.add_argument("--prob-seed", type=int, default=0)
    parser.add_argument("--tau", type=float, default=1.0, help="uniform threshold")
    parser.add_argument("--threshold-file", help="'node tau' lines overriding --tau")
    parser.add_argument("--target-file", help="target set U; all nodes when omitted")
    parser.add_argument("--out", help="output file, stdout by default")


def _open(args):
    return open_problem(
        args.graph, not args.undirected, args.prob_model, args.prob_seed,
        args.tau, args.threshold_file, args.target_file,
    )


def cmd_gen_graph(args):
    graph = generate_random_graph(args.n, args.avg_degree, seed=args.seed)
    if args.prob_model:
        graph = assign_probabilities(graph, parse_prob_model(args.prob_model), rng_seed=args.seed)
    with _output(args.out) as out:
        if args.prob_model:
            write_edge_list(graph, out)
        else:
            for u, v, _ in graph.edges():
                out.write(f"{graph.label(u)} {graph.label(v)}\n")
    return EXIT_OK


def cmd_gen_probs(args):
    graph = load_edge_list_file(args.graph, directed=not args.undirected)
    graph = assign_probabilities(graph, parse_prob_model(args.model), rng_seed=args.seed)
    summary = probability_summary(graph)
    logger.info(f"Probability summary: mean={summary['mean']:.4g} std={summary['std']:.4g} edges={summary['edges']}")
    with _output(args.out) as out:
        write_edge_list(graph, out)
    return EXIT_OK


def _index_for(args, graph, thresholds, target):
    if args.load_index:
        return load_snapshot(args.load_index, thresholds, target=target, theta=args.theta, seed=args.seed)
    if args.save_index:
        index = build_index(
            graph, target, thresholds, args.theta, seed=args.seed,
            memory_budget=args.memory_budget, progress=True,
        )
        save_snapshot(index, args.save_index)
        return index
    return None


def cmd_solve(args):
    graph, thresholds, target = _open(args)
    candidates = None
    if args.candidates:
        candidates = [graph.node(token) for token in args.candidates.split(",")]
    kind = ProblemKind.IM_CA if args.problem == "im-ca" else ProblemKind.SM_CA
    eta = target.size if args.problem == "full-coverage" else args.eta
    spec = ProblemSpec(
        kind=kind, target=target, thresholds=thresholds, k=args.k, eta=eta,
        strategy=Strategy(args.strategy), c=args.c, theta=args.theta, seed=args.seed,
        epsilon=args.epsilon, estimator=Estimator(args.estimator), runs=args.runs,
        candidates=candidates, memory_budget=args.memory_budget,
    )
    index = _index_for(args, graph, thresholds, target)
    try:
        if args.problem == "full-coverage":
            report = solve_full_coverage(graph, spec, index=index)
        else:
            report = solve(graph, spec, index=index, progress=True)
    except InfeasibleError as e:
        logger.error(f"Infeasible: {e} (achieved {e.achieved})")
        if e.report is not None:
            with _output(args.out) as out:
                write_run_report(e.report, out)
        return EXIT_INFEASIBLE
    if args.eval_runs:
        eval_seed = args.seed if args.eval_seed is None else args.eval_seed
        report.evaluation, _ = evaluate_seeds(graph, thresholds, target, report.seeds, args.eval_runs, eval_seed)
    with _output(args.out) as out:
        write_run_report(report, out)
    return EXIT_OK


def cmd_baseline(args):
    graph, thresholds, target = _open(args)
    if args.name == "coverage-greedy":
        index = build_index(graph, target, thresholds, args.theta, seed=args.seed, progress=True)
        seeds = coverage_greedy(index, args.k or graph.n)
        ranking = Ranking("coverage-greedy", np.asarray(seeds, dtype=np.int64))
    elif args.name == "degree":
        ranking = rank_by_degree(graph)
    elif args.name == "pagerank":
        ranking = pagerank(graph, restart=args.restart, tol=args.tol)
    else:
        ranking = random_ranking(graph, args.seed)
    if args.k and args.name != "coverage-greedy":
        ranking = Ranking(ranking.name, ranking.order[:args.k], ranking.scores)
    with _output(args.out) as out:
        write_ranking(ranking, graph, out)
    return EXIT_OK


def cmd_eval(args):
    graph, thresholds, target = _open(args)
    seeds = [graph.node(token) for token in args.seeds.split(",") if token]
    summary, probs = evaluate_seeds(graph, thresholds, target, seeds, args.runs, args.eval_seed)
    with _output(args.out) as out:
        out.write(json.dumps(summary.model_dump(), sort_keys=True) + "\n")
        for u in range(graph.n):
            out.write(f"{graph.label(u)} {probs[u]:.6f}\n")
    return EXIT_OK


def _sweep_overrides(args):
    return {
        "graph": args.graph,
        "kind": args.kind,
        "budgets": args.k or args.eta,
        "tau": args.tau,
        "c": args.c,
        "algorithms": args.algorithms,
        "theta": args.theta,
        "eval_runs": args.runs,
        "seed": args.seed,
        "eval_seed": args.eval_seed,
        "target_file": args.target_file,
        "threshold_file": args.threshold_file,
        "prob_model": args.prob_model,
        "output": args.out,
        "jobs": args.jobs,
    }


def cmd_sweep(args):
    config = load_config(args.config, _sweep_overrides(args))
    rows = run_experiment(config)
    with _output(config.output) as out:
        write_rows(rows, out, CSV_COLUMNS)
    return EXIT_OK


def cmd_tune_c(args):
    config = load_config(args.config, _sweep_overrides(args))
    rows = tune_c(config)
    with _output(config.output) as out:
        write_rows(rows, out, TUNE_COLUMNS)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="cumulative-activation", description="Seed selection under cumulative activation")
    parser.add_argument("--log-level", default=None)
    parser.add_argument("--log-file", default=None, help="empty string disables the log file")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("gen-graph", help="synthetic directed graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--avg-degree", type=float, default=6.0)
    p.add_argument("--prob-model")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_gen_graph)

    p = commands.add_parser("gen-probs", help="assign edge probabilities")
    p.add_argument("graph")
    p.add_argument("--model", required=True)
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_gen_probs)

    p = commands.add_parser("solve", help="greedy IM-CA, SM-CA or full coverage")
    p.add_argument("problem", choices=["im-ca", "sm-ca", "full-coverage"])
    _graph_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--eta", type=int)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.ADG.value)
    p.add_argument("--c", type=float)
    p.add_argument("--theta", type=int, default=DEFAULT_THETA)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--estimator", choices=[e.value for e in Estimator], default=Estimator.RR_INDEX.value)
    p.add_argument("--runs", type=int, default=1000, help="live-edge samples for the monte-carlo estimator")
    p.add_argument("--candidates", help="comma separated nodes allowed as seeds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--memory-budget", type=int, default=RR_MEMORY_BUDGET)
    p.add_argument("--save-index")
    p.add_argument("--load-index")
    p.add_argument("--eval-runs", type=int)
    p.add_argument("--eval-seed", type=int)
    p.set_defaults(handler=cmd_solve)

    p = commands.add_parser("baseline", help="baseline seed ranking")
    p.add_argument("name", choices=["coverage-greedy", "degree", "pagerank", "random"])
    _graph_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--theta", type=int, default=DEFAULT_THETA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restart", type=float, default=PAGERANK_RESTART)
    p.add_argument("--tol", type=float, default=PAGERANK_TOL)
    p.set_defaults(handler=cmd_baseline)

    p = commands.add_parser("eval", help="Monte-Carlo evaluation of a seed set")
    _graph_args(p)
    p.add_argument("--seeds", required=True, help="comma separated nodes")
    p.add_argument("--runs", type=int, default=DEFAULT_EVAL_RUNS)
    p.add_argument("--eval-seed", type=int, default=0)
    p.set_defaults(handler=cmd_eval)

    for name, handler in (("sweep", cmd_sweep), ("tune-c", cmd_tune_c)):
        p = commands.add_parser(name, help="parameter grid from a key=value config file")
        p.add_argument("--config")
        p.add_argument("--graph")
        p.add_argument("--kind", choices=[k.value for k in ProblemKind])
        p.add_argument("--k", help="comma separated budgets")
        p.add_argument("--eta", help="comma separated requirements")
        p.add_argument("--tau", help="comma separated thresholds")
        p.add_argument("--c", help="comma separated multipliers")
        p.add_argument("--algorithms")
        p.add_argument("--theta", type=int)
        p.add_argument("--runs", type=int, help="evaluation runs")
        p.add_argument("--seed", type=int)
        p.add_argument("--eval-seed", type=int)
        p.add_argument("--target-file")
        p.add_argument("--threshold-file")
        p.add_argument("--prob-model")
        p.add_argument("--jobs", type=int)
        p.add_argument("--out")
        p.set_defaults(handler=handler)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_file)
    try:
        return args.handler(args)
    except InfeasibleError as e:
        logger.error(f"Infeasible: {e}")
        return EXIT_INFEASIBLE
    except (CaError, ValueError, KeyError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_INVALID
    except Exception as e:
        logger.exception(f"{args.command} failed: {e}")
        return EXIT_ERROR
