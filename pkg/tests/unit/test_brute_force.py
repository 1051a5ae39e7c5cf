import numpy as np
import pytest

from src.app.models.graph_models import Graph, TargetSet, Thresholds
from src.app.models.problem_models import ProblemKind, ProblemSpec
from src.app.services.oracle_service import brute_force_optimal
from src.app.utils.exceptions import OracleCapExceeded


def _spec(graph, kind, tau=1.0, target=None, **kwargs):
    thresholds = tau if isinstance(tau, Thresholds) else Thresholds.uniform(graph.n, tau)
    target = target or TargetSet.all_nodes(graph.n)
    return ProblemSpec(kind=kind, target=target, thresholds=thresholds, **kwargs)


def test_star_im_ca(star):
    result = brute_force_optimal(star, _spec(star, ProblemKind.IM_CA, k=1))
    assert result.seeds == (0,)
    assert result.objective == 3


def test_star_sm_ca(star):
    result = brute_force_optimal(star, _spec(star, ProblemKind.SM_CA, eta=4))
    assert result.seeds == (0, 3)
    assert result.feasible


def test_fanin3_needs_all_sources(fanin3_example):
    graph, thresholds, target = fanin3_example
    spec = _spec(graph, ProblemKind.SM_CA, tau=thresholds, target=target, eta=1, candidates=[0, 2, 3])
    result = brute_force_optimal(graph, spec)
    assert result.seeds == (0, 2, 3)
    assert result.size == 3


def test_fanin3_target_itself_is_cheapest(fanin3_example):
    graph, thresholds, target = fanin3_example
    spec = _spec(graph, ProblemKind.SM_CA, tau=thresholds, target=target, eta=1)
    assert brute_force_optimal(graph, spec).seeds == (graph.node("u"),)


def test_infeasible_sm_ca(fanin3):
    target = TargetSet.from_nodes(fanin3.n, [fanin3.node("u")])
    spec = _spec(fanin3, ProblemKind.SM_CA, target=target, eta=1, candidates=[0, 2, 3])
    result = brute_force_optimal(fanin3, spec)
    assert not result.feasible
    assert result.objective == 0


def test_node_cap():
    graph = Graph.from_edges(13, [0], [1], [0.5])
    with pytest.raises(OracleCapExceeded):
        brute_force_optimal(graph, _spec(graph, ProblemKind.IM_CA, k=1))


def test_k_above_candidates(star):
    with pytest.raises(ValueError):
        brute_force_optimal(star, _spec(star, ProblemKind.IM_CA, k=2, candidates=[0]))
