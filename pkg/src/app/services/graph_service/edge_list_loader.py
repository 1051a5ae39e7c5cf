import math
import logging

import numpy as np

from src.app.models.graph_models import Graph, TargetSet, Thresholds
from src.app.utils.exceptions import GraphFormatError
from src.app.utils.helpers import STREAM_SYNTHETIC, substream

logger = logging.getLogger(__name__)


def _lines(source):
    if isinstance(source, str):
        return source.splitlines()
    return source


def load_edge_list(source, directed=True):
    """
    Parses an edge list into a Graph with dense ids.

    Each non-comment line is "u v" or "u v p". Tokens are remapped to 0..n-1 in
    order of first appearance, which keeps loading deterministic.

    Args:
        source: Text stream, iterable of lines, or the whole text as a string.
        directed (bool): When False every line yields both arcs with the same p.

    Returns:
        Graph
    """
    label_index = {}
    labels = []
    src, dst, prob = [], [], []
    seen = set()
    columns = None

    def node_id(token):
        if token not in label_index:
            label_index[token] = len(labels)
            labels.append(token)
        return label_index[token]

    def add_arc(u, v, p, line_number):
        if (u, v) in seen:
            raise GraphFormatError(
                f"duplicate arc {labels[u]} -> {labels[v]}", line_number
            )
        seen.add((u, v))
        src.append(u)
        dst.append(v)
        prob.append(p)

    for line_number, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"expected 'u v' or 'u v p', got '{line}'", line_number)
        if columns is None:
            columns = len(parts)
        elif columns != len(parts):
            raise GraphFormatError("mixed two- and three-column lines", line_number)

        p = math.nan
        if len(parts) == 3:
            try:
                p = float(parts[2])
            except ValueError:
                raise GraphFormatError(f"probability '{parts[2]}' is not a number", line_number) from None
            if not 0.0 <= p <= 1.0:
                raise GraphFormatError(f"probability {p} out of range [0, 1]", line_number)

        if parts[0] == parts[1]:
            raise GraphFormatError(f"self-loop on '{parts[0]}'", line_number)
        u = node_id(parts[0])
        v = node_id(parts[1])
        add_arc(u, v, p, line_number)
        if not directed:
            add_arc(v, u, p, line_number)

    if not src:
        raise GraphFormatError("empty input: no edges found")

    graph = Graph.from_edges(len(labels), src, dst, prob, directed=directed, labels=labels)
    logger.info(f"Loaded graph with n={graph.n}, m={graph.m}, directed={directed}")
    return graph


def load_edge_list_file(path, directed=True):
    with open(path, "r") as f:
        return load_edge_list(f, directed=directed)


def write_edge_list(graph, stream):
    """Writes 'u v p' lines using the original node tokens."""
    for u, v, p in graph.edges():
        stream.write(f"{graph.label(u)} {graph.label(v)} {p!r}\n")


def load_thresholds(source, graph, base_tau=1.0):
    """
    Reads 'node tau' lines. Nodes not listed keep base_tau.

    Range violations are left for validate() to report.
    """
    tau = np.full(graph.n, float(base_tau))
    for line_number, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'node tau', got '{line}'", line_number)
        if parts[0] not in graph.label_index:
            raise GraphFormatError(f"unknown node '{parts[0]}'", line_number)
        try:
            tau[graph.node(parts[0])] = float(parts[1])
        except ValueError:
            raise GraphFormatError(f"threshold '{parts[1]}' is not a number", line_number) from None
    return Thresholds(tau)


def load_target_set(source, graph):
    """Reads whitespace-separated node tokens forming the target set U."""
    nodes = []
    for line_number, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        for token in line.split():
            if token not in graph.label_index:
                raise GraphFormatError(f"unknown node '{token}'", line_number)
            nodes.append(graph.node(token))
    return TargetSet.from_nodes(graph.n, nodes)


def generate_random_graph(n, avg_out_degree, seed=0):
    """
    Directed random graph with about n * avg_out_degree distinct arcs,
    uniform endpoints and no self loops. Probabilities are left unassigned.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    target_m = min(int(round(n * avg_out_degree)), n * (n - 1))
    rng = substream(seed, STREAM_SYNTHETIC)
    keys = np.empty(0, dtype=np.int64)
    while keys.shape[0] < target_m:
        draw = int((target_m - keys.shape[0]) * 1.2) + 16
        u = rng.integers(0, n, size=draw)
        v = rng.integers(0, n, size=draw)
        fresh = (u * n + v)[u != v]
        combined = np.concatenate((keys, fresh))
        _, first = np.unique(combined, return_index=True)
        keys = combined[np.sort(first)]
    keys = keys[:target_m]
    graph = Graph.from_edges(n, keys // n, keys % n)
    logger.info(f"Generated random graph with n={n}, m={graph.m}")
    return graph
