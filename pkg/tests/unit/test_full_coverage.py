import numpy as np
import pytest

from src.app.models.graph_models import Graph, TargetSet, Thresholds
from src.app.models.problem_models import Estimator, ProblemKind, ProblemSpec
from src.app.services.solver_service import solve_full_coverage
from src.app.services.solver_service.full_coverage import LazyQueue, TruncatedSum, make_objective
from src.app.services.rr_service import build_index
from src.app.utils.exceptions import IndexMismatchError, InfeasibleError


def _spec(graph, tau=1.0, target=None, **kwargs):
    thresholds = tau if isinstance(tau, Thresholds) else Thresholds.uniform(graph.n, tau)
    target = target or TargetSet.all_nodes(graph.n)
    return ProblemSpec(kind=ProblemKind.SM_CA, target=target, thresholds=thresholds, eta=target.size, **kwargs)


@pytest.mark.parametrize("estimator, extra", [
    (Estimator.EXACT, {}),
    (Estimator.RR_INDEX, {"theta": 4}),
    (Estimator.MONTE_CARLO, {"runs": 50}),
])
def test_star_picks_a_then_b(star, estimator, extra):
    report = solve_full_coverage(star, _spec(star, estimator=estimator, **extra))
    assert report.seeds == [0, 3]
    assert report.estimated_value == pytest.approx(4.0)
    assert report.estimated_active == 4
    assert [s.inc for s in report.steps] == pytest.approx([3.0, 1.0])
    assert report.algorithm == "GREEDY-FULL"


def test_step_flags_are_plain_bools(star, recwarn):
    report = solve_full_coverage(star, _spec(star, estimator=Estimator.RR_INDEX, theta=4))
    assert all(type(s.low_signal) is bool for s in report.steps)
    assert not [w for w in recwarn if issubclass(w.category, DeprecationWarning) and "bool" in str(w.message)]


def test_prebuilt_index_must_match_targets(star):
    index = build_index(star, TargetSet.all_nodes(star.n), Thresholds.uniform(star.n, 1.0), 4)
    only_b = TargetSet.from_nodes(star.n, [star.node("b")])
    with pytest.raises(IndexMismatchError):
        solve_full_coverage(star, _spec(star, target=only_b, estimator=Estimator.RR_INDEX, theta=4), index=index)


def test_lazy_matches_naive(fanin3):
    tau = np.full(fanin3.n, 0.9)
    spec = _spec(fanin3, tau=Thresholds(tau), estimator=Estimator.EXACT, epsilon=0.01)
    lazy = solve_full_coverage(fanin3, spec)
    naive = solve_full_coverage(fanin3, spec, lazy=False)
    assert lazy.seeds == naive.seeds
    assert lazy.estimated_value == pytest.approx(naive.estimated_value)


def test_single_node():
    graph = Graph.from_edges(1, [], [], [])
    report = solve_full_coverage(graph, _spec(graph, estimator=Estimator.EXACT))
    assert report.seeds == [0]


def test_infeasible_with_restricted_candidates(fanin3):
    spec = _spec(fanin3, estimator=Estimator.EXACT, candidates=[0, 2, 3])
    with pytest.raises(InfeasibleError) as err:
        solve_full_coverage(fanin3, spec)
    report = err.value.report
    assert sorted(report.seeds) == [0, 2, 3]
    assert report.estimated_value == pytest.approx(3.875)
    assert err.value.achieved == 3


def test_epsilon_stops_early(fanin3):
    spec = _spec(fanin3, estimator=Estimator.EXACT, epsilon=0.2, candidates=[0, 2, 3])
    report = solve_full_coverage(fanin3, spec)
    assert len(report.seeds) == 3


def test_truncated_sum_and_queue(star):
    spec = _spec(star, estimator=Estimator.EXACT)
    f = TruncatedSum(make_objective(star, spec), spec)
    assert f([]) == 0.0
    assert f([0]) == pytest.approx(3.0)
    queue = LazyQueue(f, range(star.n))
    node, gain = queue.pick([], 0.0, 0)
    assert (node, gain) == (0, 3.0)
    assert f.active([0]) == 3
