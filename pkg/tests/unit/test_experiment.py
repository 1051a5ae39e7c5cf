import importlib

import numpy as np
import pytest

from conftest import fixture_path, random_graph
from src.app.models.graph_models import TargetSet, Thresholds
from src.app.models.problem_models import ProblemKind
from src.app.services.graph_service import write_edge_list
from src.app.services.cascade_service import activation_counts
from src.app.services.experiment_service import (
    CSV_COLUMNS,
    boundary_targets,
    evaluate_seeds,
    load_config,
    run_experiment,
    tune_c,
)
from src.app.utils.exceptions import ConfigError
from src.config import DEFAULT_C_IM, DEFAULT_C_SM


def _config(tmp_path, text, **overrides):
    path = tmp_path / "sweep.env"
    path.write_text(text)
    return load_config(str(path), overrides)


def _star_config(tmp_path, **overrides):
    text = (
        f"GRAPH={fixture_path('star.txt')}\n"
        "BUDGETS=1,2\n"
        "ALGORITHMS=adg,degree\n"
        "THETA=4\n"
        "EVAL_RUNS=50\n"
        "SEED=3\n"
    )
    return _config(tmp_path, text, **overrides)


def test_load_config(tmp_path):
    config = _star_config(tmp_path, budgets="2,1,2", tau="1,0.5")
    assert config.budgets == [1, 2]
    assert config.tau == [1.0, 0.5]
    assert config.algorithms == ["adg", "degree"]
    assert config.eval_seed == 3
    assert config.kind == ProblemKind.IM_CA


def test_empty_algorithm_list(tmp_path):
    with pytest.raises(ConfigError, match="nothing to run"):
        _config(tmp_path, f"GRAPH={fixture_path('star.txt')}\nBUDGETS=1\nALGORITHMS=\n")


@pytest.mark.parametrize("overrides", [
    {"algorithms": "adg,celf"},
    {"tau": "0"},
    {"c": "0.5"},
    {"graph": "missing.txt"},
    {"prob_model": "uniform"},
])
def test_invalid_config(tmp_path, overrides):
    with pytest.raises(ConfigError):
        _star_config(tmp_path, **overrides)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.env"))


def test_star_sweep(tmp_path):
    rows = run_experiment(_star_config(tmp_path))
    assert [(r["algorithm"], r["budget_or_eta"], r["seeds"], r["rho_eval"]) for r in rows] == [
        ("ADG-IM-CA", 1, "a", 3),
        ("ADG-IM-CA", 2, "a b", 4),
        ("DEGREE", 1, "a", 3),
        ("DEGREE", 2, "a b", 4),
    ]
    assert all(r["status"] == "ok" for r in rows)
    assert all(set(r) == set(CSV_COLUMNS) for r in rows)
    assert rows[0]["tau"] == "1"
    assert rows[0]["master_seed"] == 3


def test_sm_ca_sweep(tmp_path):
    config = _star_config(tmp_path, kind="sm-ca", budgets="3,4", algorithms="btg,coverage-greedy,random", c="1")
    rows = run_experiment(config)
    by_name = {(r["algorithm"], r["budget_or_eta"]): r for r in rows}
    assert by_name[("BTG-SM-CA", 3)]["seeds"] == "a"
    assert by_name[("BTG-SM-CA", 4)]["seeds"] == "a b"
    assert by_name[("BTG-SM-CA", 4)]["c"] == "1"
    assert by_name[("COVERAGE-GREEDY", 4)]["seeds"] == "a b"
    assert by_name[("RANDOM", 4)]["status"] == "ok"
    assert by_name[("RANDOM", 4)]["rho_eval"] == 4


def test_budget_above_limit(tmp_path):
    with pytest.raises(ConfigError):
        run_experiment(_star_config(tmp_path, budgets="5"))


def test_sweep_is_reproducible(tmp_path):
    config = _star_config(
        tmp_path, graph=fixture_path("fanin3.txt"), tau="0.5,1", algorithms="adg,btg,pagerank", c="1,2",
        theta=200, eval_runs=500,
    )
    first = run_experiment(config)
    second = run_experiment(config)
    strip = lambda rows: [{k: v for k, v in r.items() if k != "runtime_ms"} for r in rows]
    assert strip(first) == strip(second)
    assert [r["tau"] for r in first[:4]] == ["0.5"] * 4
    parallel = run_experiment(config.model_copy(update={"jobs": 2}))
    assert strip(parallel) == strip(first)


def test_tune_c(tmp_path):
    rows = tune_c(_star_config(tmp_path, c="2,3"), k=2)
    assert [(r["c"], r["rho_eval"], r["gain_vs_c1"]) for r in rows] == [("1", 4, 0), ("2", 4, 0), ("3", 4, 0)]


def test_evaluation_uses_its_own_stream():
    graph = random_graph(np.random.default_rng(5), 20, 60)
    thresholds = Thresholds.uniform(graph.n, 0.5)
    target = TargetSet.all_nodes(graph.n)
    one, probs = evaluate_seeds(graph, thresholds, target, [0, 1, 2], runs=400, eval_seed=8)
    two, again = evaluate_seeds(graph, thresholds, target, [0, 1, 2], runs=400, eval_seed=8)
    assert one == two
    assert np.array_equal(probs, again)
    solver = activation_counts(graph, [0, 1, 2], runs=400, seed=8).probs
    assert not np.array_equal(probs, solver)
    assert one.eval_seed == 8


def test_boundary_targets(fanin3_example):
    graph, thresholds, target = fanin3_example
    assert boundary_targets(graph, thresholds, target, [0, 2, 3]) == [graph.node("u")]
    assert boundary_targets(graph, thresholds, target, [0, 2]) == []
    assert boundary_targets(graph, thresholds, TargetSet.all_nodes(graph.n), [0]) == []


def test_c_defaults_follow_the_problem_kind(tmp_path):
    assert _star_config(tmp_path).c == [DEFAULT_C_IM]
    config = _star_config(tmp_path, kind="sm-ca", budgets="3", algorithms="btg")
    assert config.c == [DEFAULT_C_SM]
    rows = run_experiment(config)
    assert [r["c"] for r in rows] == [f"{DEFAULT_C_SM:g}"]
    assert _star_config(tmp_path, kind="sm-ca", c="2").c == [2.0]


@pytest.mark.parametrize("thresholds, targets", [
    ("x 0\ny 1.5\n", None),
    ("y 1.5\n", None),
    (None, ""),
])
def test_invalid_thresholds_or_targets(tmp_path, thresholds, targets):
    overrides = {}
    if thresholds is not None:
        path = tmp_path / "tau.txt"
        path.write_text(thresholds)
        overrides["threshold_file"] = str(path)
    if targets is not None:
        path = tmp_path / "target.txt"
        path.write_text(targets)
        overrides["target_file"] = str(path)
    config = _star_config(tmp_path, **overrides)
    with pytest.raises(ConfigError, match="invalid experiment input"):
        run_experiment(config)
    with pytest.raises(ConfigError, match="invalid experiment input"):
        tune_c(config, k=1)


def test_evaluation_streams_are_keyed_by_grid_point():
    graph = random_graph(np.random.default_rng(5), 20, 60)
    thresholds = Thresholds.uniform(graph.n, 0.5)
    target = TargetSet.all_nodes(graph.n)
    plain = evaluate_seeds(graph, thresholds, target, [0, 1, 2], runs=400, eval_seed=8)[1]
    first = evaluate_seeds(graph, thresholds, target, [0, 1, 2], runs=400, eval_seed=8, stream=(0,))[1]
    second = evaluate_seeds(graph, thresholds, target, [0, 1, 2], runs=400, eval_seed=8, stream=(1,))[1]
    assert not np.array_equal(first, second)
    assert not np.array_equal(plain, first)
    again = evaluate_seeds(graph, thresholds, target, [0, 1, 2], runs=400, eval_seed=8, stream=(1,))[1]
    assert np.array_equal(second, again)


def test_sweep_points_draw_disjoint_cascades(tmp_path, monkeypatch):
    graph_path = tmp_path / "graph.txt"
    with open(graph_path, "w") as f:
        write_edge_list(random_graph(np.random.default_rng(5), 20, 60), f)
    sweep = importlib.import_module("src.app.services.experiment_service.run_experiment")
    seen = []
    real = sweep.evaluate_seeds

    def recording(*args, **kwargs):
        summary, probs = real(*args, **kwargs)
        seen.append((kwargs["stream"], tuple(probs)))
        return summary, probs

    monkeypatch.setattr(sweep, "evaluate_seeds", recording)
    config = _star_config(tmp_path, graph=str(graph_path), tau="0.5,0.5", budgets="3", algorithms="degree", eval_runs=300)
    rows = run_experiment(config)
    assert len(rows) == 2
    assert [stream for stream, _ in seen] == [(0,), (1,)]
    assert seen[0][1] != seen[1][1]
