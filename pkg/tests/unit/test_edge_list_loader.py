import io

import numpy as np
import pytest

from conftest import fixture_path
from src.app.services.graph_service import (
    generate_random_graph,
    load_edge_list,
    load_edge_list_file,
    load_target_set,
    load_thresholds,
    write_edge_list,
)
from src.app.utils.exceptions import GraphFormatError


def test_single_edge():
    graph = load_edge_list("0 1 1.0")
    assert graph.n == 2
    assert graph.m == 1
    assert list(graph.edges()) == [(0, 1, 1.0)]


def test_fanin3_file(fanin3):
    assert fanin3.n == 4
    assert fanin3.m == 3
    assert fanin3.labels == ("a", "u", "b", "c")
    sources, probs = fanin3.in_neighbors(fanin3.node("u"))
    assert sorted(fanin3.label(v) for v in sources) == ["a", "b", "c"]
    assert np.allclose(probs, 0.5)


def test_probability_out_of_range():
    with pytest.raises(GraphFormatError, match="out of range"):
        load_edge_list("0 1 1.5")


def test_malformed_line_reports_line_number():
    with pytest.raises(GraphFormatError) as err:
        load_edge_list("a b 0.5\n# comment\na\n")
    assert err.value.line_number == 3
    assert str(err.value).startswith("line 3:")


def test_duplicate_arc_rejected():
    with pytest.raises(GraphFormatError, match="duplicate arc"):
        load_edge_list("a b 0.5\na b 0.7\n")


def test_undirected_reverse_line_is_a_duplicate():
    with pytest.raises(GraphFormatError, match="duplicate arc"):
        load_edge_list("a b 0.5\nb a 0.5\n", directed=False)


def test_self_loop_rejected():
    with pytest.raises(GraphFormatError, match="self-loop"):
        load_edge_list("a a 0.5")


def test_empty_input():
    with pytest.raises(GraphFormatError, match="empty input"):
        load_edge_list("# nothing here\n\n")


def test_mixed_columns_rejected():
    with pytest.raises(GraphFormatError, match="mixed"):
        load_edge_list("a b 0.5\nb c\n")


def test_two_columns_leave_probabilities_unassigned():
    graph = load_edge_list("a b\nb c\n")
    assert not graph.has_probabilities


def test_undirected_adds_both_arcs():
    graph = load_edge_list("a b 0.3", directed=False)
    assert sorted(graph.edges()) == [(0, 1, 0.3), (1, 0, 0.3)]


def test_loading_is_deterministic():
    text = "z y 0.1\ny x 0.2\nz x 0.3\n"
    first, second = load_edge_list(text), load_edge_list(text)
    assert first.labels == second.labels == ("z", "y", "x")
    assert np.array_equal(first.out_dst, second.out_dst)
    assert np.array_equal(first.in_src, second.in_src)
    assert np.array_equal(first.out_prob, second.out_prob)


def test_write_then_load_keeps_edges(star):
    buffer = io.StringIO()
    write_edge_list(star, buffer)
    again = load_edge_list(buffer.getvalue())
    assert sorted((star.label(u), star.label(v), p) for u, v, p in star.edges()) == sorted(
        (again.label(u), again.label(v), p) for u, v, p in again.edges()
    )


def test_thresholds_override_base(fanin3):
    thresholds = load_thresholds("u 0.875\n", fanin3, base_tau=1.0)
    assert thresholds.tau[fanin3.node("u")] == 0.875
    assert thresholds.tau[fanin3.node("a")] == 1.0


def test_thresholds_unknown_node(fanin3):
    with pytest.raises(GraphFormatError, match="unknown node"):
        load_thresholds("nobody 0.5\n", fanin3)


def test_target_set(fanin3):
    target = load_target_set("u\n", fanin3)
    assert target.size == 1
    assert fanin3.node("u") in target


def test_generate_random_graph():
    graph = generate_random_graph(200, 3.0, seed=5)
    assert graph.m == 600
    src = graph.edge_src
    assert not np.any(src == graph.out_dst)
    assert len(set(zip(src.tolist(), graph.out_dst.tolist()))) == graph.m
    again = generate_random_graph(200, 3.0, seed=5)
    assert np.array_equal(graph.out_dst, again.out_dst)


def test_fixture_files_load():
    for name in ("fanin3.txt", "chain2.txt", "star.txt", "two_components.txt"):
        assert load_edge_list_file(fixture_path(name)).has_probabilities
