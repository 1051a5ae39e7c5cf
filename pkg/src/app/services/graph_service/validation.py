import numpy as np

from src.app.models.graph_models import ValidationReport


def _edge_multiset(src, dst, prob):
    order = np.lexsort((prob, dst, src))
    return src[order], dst[order], prob[order]


def validate(graph, thresholds=None, target=None):
    """
    Checks every type invariant and collects the violations.

    Returns:
        ValidationReport: empty findings means valid.
    """
    report = ValidationReport()
    n = graph.n

    if graph.out_ptr.shape[0] != n + 1 or graph.in_ptr.shape[0] != n + 1:
        report.add("adjacency pointers do not cover 0..n-1")
    else:
        if graph.out_ptr[-1] != graph.out_dst.shape[0]:
            report.add("out-adjacency pointer end does not match edge count")
        if graph.in_ptr[-1] != graph.in_src.shape[0]:
            report.add("in-adjacency pointer end does not match edge count")

    for name, ids in (("out-adjacency", graph.out_dst), ("in-adjacency", graph.in_src)):
        if ids.size and (ids.min() < 0 or ids.max() >= n):
            report.add(f"{name} references a node outside 0..{n - 1}")

    structural_ok = report.ok

    prob = graph.out_prob
    if np.isnan(prob).any():
        report.add(f"{int(np.isnan(prob).sum())} edges have no probability assigned")
    finite = prob[~np.isnan(prob)]
    if finite.size and ((finite < 0).any() or (finite > 1).any()):
        report.add("edge probability must be in [0,1]")

    if structural_ok:
        out_set = _edge_multiset(graph.edge_src, graph.out_dst, np.nan_to_num(graph.out_prob, nan=-1.0))
        in_dst = np.repeat(np.arange(n, dtype=np.int64), np.diff(graph.in_ptr))
        in_set = _edge_multiset(graph.in_src, in_dst, np.nan_to_num(graph.in_prob, nan=-1.0))
        if graph.in_src.shape[0] != graph.out_dst.shape[0] or not all(
            np.array_equal(a, b) for a, b in zip(out_set, in_set)
        ):
            report.add("in-adjacency is not the transpose of out-adjacency")

    if thresholds is not None:
        tau = thresholds.tau
        if tau.shape[0] != n:
            report.add(f"threshold count {tau.shape[0]} does not match node count {n}")
        bad = np.flatnonzero(~((tau > 0) & (tau <= 1)))
        if bad.size:
            report.add(
                f"threshold must be in (0,1]: {bad.size} nodes violate it, first is "
                f"{graph.label(int(bad[0])) if bad[0] < n else int(bad[0])}"
            )

    if target is not None:
        if target.mask.shape[0] != n:
            report.add(f"target mask length {target.mask.shape[0]} does not match node count {n}")
        elif target.size == 0:
            report.add("target set must be nonempty")

    return report
