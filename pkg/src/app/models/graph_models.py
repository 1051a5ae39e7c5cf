from dataclasses import dataclass, field
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator

TRIVALENCY_CHOICES = (0.1, 0.01, 0.001)


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Directed graph in compressed sparse row form, both directions.

    Edge ids are positions in the out-adjacency arrays. in_edge maps every
    in-adjacency position back to its edge id.
    """
    n: int
    out_ptr: np.ndarray
    out_dst: np.ndarray
    out_prob: np.ndarray
    in_ptr: np.ndarray
    in_src: np.ndarray
    in_prob: np.ndarray
    in_edge: np.ndarray
    directed: bool = True
    labels: Tuple[str, ...] = ()
    label_index: Dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_edges(cls, n, src, dst, prob=None, directed=True, labels=None):
        """
        Builds both adjacencies from parallel edge arrays.

        Args:
            n (int): Node count; ids are 0..n-1.
            src, dst (array-like): Arc endpoints.
            prob (array-like): Per-arc probability, NaN when not assigned yet.
            directed (bool): Whether the source file was directed.
            labels (sequence): Original token per dense id.
        """
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if prob is None:
            prob = np.full(src.shape[0], np.nan)
        prob = np.asarray(prob, dtype=np.float64)

        order = np.lexsort((dst, src))
        src, dst, prob = src[order], dst[order], prob[order]
        out_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=out_ptr[1:])

        in_order = np.lexsort((src, dst))
        in_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(dst, minlength=n), out=in_ptr[1:])

        if labels is None:
            labels = tuple(str(i) for i in range(n))
        labels = tuple(labels)
        return cls(
            n=int(n),
            out_ptr=out_ptr,
            out_dst=dst,
            out_prob=prob,
            in_ptr=in_ptr,
            in_src=src[in_order],
            in_prob=prob[in_order],
            in_edge=in_order.astype(np.int64),
            directed=directed,
            labels=labels,
            label_index={label: i for i, label in enumerate(labels)},
        )

    @property
    def m(self):
        return int(self.out_dst.shape[0])

    @property
    def edge_src(self):
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.out_ptr))

    @property
    def out_degree(self):
        return np.diff(self.out_ptr)

    @property
    def in_degree(self):
        return np.diff(self.in_ptr)

    @property
    def has_probabilities(self):
        return not bool(np.isnan(self.out_prob).any())

    def out_neighbors(self, u):
        lo, hi = self.out_ptr[u], self.out_ptr[u + 1]
        return self.out_dst[lo:hi], self.out_prob[lo:hi]

    def in_neighbors(self, u):
        lo, hi = self.in_ptr[u], self.in_ptr[u + 1]
        return self.in_src[lo:hi], self.in_prob[lo:hi]

    def edges(self):
        """Yields (u, v, p) in edge-id order."""
        src = self.edge_src
        for e in range(self.m):
            yield int(src[e]), int(self.out_dst[e]), float(self.out_prob[e])

    def with_probabilities(self, prob):
        """Returns a copy carrying new per-edge probabilities (edge-id order)."""
        prob = np.asarray(prob, dtype=np.float64)
        return Graph(
            n=self.n,
            out_ptr=self.out_ptr,
            out_dst=self.out_dst,
            out_prob=prob,
            in_ptr=self.in_ptr,
            in_src=self.in_src,
            in_prob=prob[self.in_edge],
            in_edge=self.in_edge,
            directed=self.directed,
            labels=self.labels,
            label_index=self.label_index,
        )

    def node(self, label):
        """Dense id of an original token."""
        try:
            return self.label_index[str(label)]
        except KeyError:
            raise KeyError(f"unknown node '{label}'") from None

    def label(self, node):
        return self.labels[node]


@dataclass(frozen=True, eq=False)
class Thresholds:
    tau: np.ndarray

    @classmethod
    def uniform(cls, n, tau):
        return cls(np.full(n, float(tau)))

    def __len__(self):
        return int(self.tau.shape[0])

    def total(self, target=None):
        if target is None:
            return float(self.tau.sum())
        return float(self.tau[target.mask].sum())


@dataclass(frozen=True, eq=False)
class TargetSet:
    mask: np.ndarray

    @classmethod
    def all_nodes(cls, n):
        return cls(np.ones(n, dtype=bool))

    @classmethod
    def from_nodes(cls, n, nodes):
        mask = np.zeros(n, dtype=bool)
        nodes = np.asarray(list(nodes), dtype=np.int64)
        if nodes.size and (nodes.min() < 0 or nodes.max() >= n):
            raise ValueError(f"target node outside 0..{n - 1}")
        mask[nodes] = True
        return cls(mask)

    @property
    def size(self):
        return int(self.mask.sum())

    @property
    def nodes(self):
        return np.flatnonzero(self.mask)

    def __contains__(self, u):
        return 0 <= u < self.mask.shape[0] and bool(self.mask[u])


@dataclass
class ValidationReport:
    findings: List[str] = field(default_factory=list)

    @property
    def ok(self):
        return not self.findings

    def add(self, message):
        self.findings.append(message)


class ConstantModel(BaseModel):
    kind: Literal["constant"] = "constant"
    p: float = Field(ge=0.0, le=1.0)


class WeightedCascadeModel(BaseModel):
    """
    p_uv = c(u, v) / d(v). Without explicit counts d(v) is the in-degree of v
    and c(u, v) is 1. Counts are keyed by original node tokens.
    """
    kind: Literal["weighted_cascade"] = "weighted_cascade"
    activity_counts: Optional[Dict[str, float]] = None
    collab_counts: Optional[Dict[Tuple[str, str], float]] = None


class TrivalencyModel(BaseModel):
    kind: Literal["trivalency"] = "trivalency"
    seed: Optional[int] = None
    choices: Tuple[float, ...] = TRIVALENCY_CHOICES

    @field_validator("choices")
    @classmethod
    def only_stated_levels(cls, value):
        if tuple(value) != TRIVALENCY_CHOICES:
            raise ValueError(f"trivalency draws from {TRIVALENCY_CHOICES} only")
        return tuple(value)


ProbModel = Annotated[
    Union[ConstantModel, WeightedCascadeModel, TrivalencyModel],
    Field(discriminator="kind"),
]
