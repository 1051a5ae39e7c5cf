import logging

import numpy as np

from src.app.models.graph_models import (
    ConstantModel,
    TRIVALENCY_CHOICES,
    TrivalencyModel,
    WeightedCascadeModel,
)
from src.app.utils.exceptions import ProbabilityModelError
from src.app.utils.helpers import STREAM_TRIVALENCY, substream

logger = logging.getLogger(__name__)


def _weighted_cascade(graph, model):
    src = graph.edge_src
    dst = graph.out_dst
    if model.activity_counts is None:
        d = graph.in_degree.astype(np.float64)
    else:
        d = np.zeros(graph.n)
        for token, count in model.activity_counts.items():
            d[graph.node(token)] = float(count)
    if model.collab_counts is None:
        c = np.ones(graph.m)
    else:
        c = np.ones(graph.m)
        lookup = {
            (graph.node(a), graph.node(b)): float(count)
            for (a, b), count in model.collab_counts.items()
        }
        for e in range(graph.m):
            c[e] = lookup.get((int(src[e]), int(dst[e])), 1.0)

    denom = d[dst]
    if np.any(denom <= 0):
        bad = int(dst[np.argmax(denom <= 0)])
        raise ProbabilityModelError(
            f"d({graph.label(bad)}) = 0 but the node has incoming edges"
        )
    prob = c / denom
    if np.any(prob > 1.0) or np.any(prob < 0.0):
        bad = int(np.argmax((prob > 1.0) | (prob < 0.0)))
        raise ProbabilityModelError(
            f"c/d gives p={prob[bad]} on edge {graph.label(int(src[bad]))} -> "
            f"{graph.label(int(dst[bad]))}, outside [0, 1]"
        )
    return prob


def assign_probabilities(graph, model, rng_seed=0):
    """
    Returns a copy of graph whose edges carry probabilities from model.

    Args:
        graph (Graph): Any graph; existing probabilities are replaced.
        model: ConstantModel, WeightedCascadeModel or TrivalencyModel.
        rng_seed (int): Seed for trivalency when the model has none.
    """
    if graph.m == 0:
        raise ProbabilityModelError("graph has no edges")

    if isinstance(model, ConstantModel):
        prob = np.full(graph.m, model.p)
    elif isinstance(model, WeightedCascadeModel):
        prob = _weighted_cascade(graph, model)
    elif isinstance(model, TrivalencyModel):
        seed = model.seed if model.seed is not None else rng_seed
        rng = substream(seed, STREAM_TRIVALENCY)
        prob = np.asarray(TRIVALENCY_CHOICES)[rng.integers(0, len(TRIVALENCY_CHOICES), size=graph.m)]
    else:
        raise ProbabilityModelError(f"unknown probability model {model!r}")

    logger.info(f"Assigned {model.kind} probabilities to {graph.m} edges")
    return graph.with_probabilities(prob)


def probability_summary(graph):
    """Mean and standard deviation of the edge probabilities."""
    prob = graph.out_prob
    return {"mean": float(np.mean(prob)), "std": float(np.std(prob)), "edges": graph.m}


def parse_prob_model(text):
    """
    Reads the short form used by configs and the CLI:
    'constant:<p>', 'weighted_cascade' (or 'wc') and 'trivalency[:<seed>]'.
    """
    name, _, arg = str(text).strip().partition(":")
    name = name.lower().replace("-", "_")
    try:
        if name == "constant":
            return ConstantModel(p=float(arg))
        if name in ("weighted_cascade", "wc"):
            return WeightedCascadeModel()
        if name == "trivalency":
            return TrivalencyModel(seed=int(arg) if arg else None)
    except ValueError as e:
        raise ProbabilityModelError(f"bad probability model '{text}': {e}") from e
    raise ProbabilityModelError(f"unknown probability model '{text}'")
