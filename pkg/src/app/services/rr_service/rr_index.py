import math
import logging

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from src.app.utils.exceptions import MemoryBudgetExceeded
from src.app.utils.helpers import STREAM_RR, gather_ranges, requirement, substream
from src.config import RR_MEMORY_BUDGET

logger = logging.getLogger(__name__)

# owner, pointer, alive flag per set; member id, inverted entry, pair slot per entry
BYTES_PER_SET = 8 + 8 + 1
BYTES_PER_ENTRY = 4 + 8 + 8 + 24


class RRSampler:
    """Reverse live-edge traversals for one graph, reusing an epoch-stamped mask."""

    def __init__(self, graph):
        self._ptr = graph.in_ptr.tolist()
        self._src = graph.in_src
        self._prob = graph.in_prob
        self._stamp = [0] * graph.n
        self._epoch = 0

    def sample(self, root, rng):
        """
        Nodes that reach root in a lazily sampled live-edge graph.

        Incoming edges of a node are flipped when the node is first reached,
        so every edge gets at most one coin per RR set.
        """
        self._epoch += 1
        epoch = self._epoch
        stamp = self._stamp
        ptr = self._ptr
        stamp[root] = epoch
        nodes = [root]
        i = 0
        while i < len(nodes):
            w = nodes[i]
            i += 1
            lo, hi = ptr[w], ptr[w + 1]
            if lo == hi:
                continue
            live = self._src[lo:hi][rng.random(hi - lo) < self._prob[lo:hi]]
            for v in live.tolist():
                if stamp[v] != epoch:
                    stamp[v] = epoch
                    nodes.append(v)
        return nodes


def generate_rr_set(graph, root, rng):
    """One RR set for root; always contains root."""
    if not 0 <= root < graph.n:
        raise ValueError(f"root {root} outside 0..{graph.n - 1}")
    return set(RRSampler(graph).sample(int(root), rng))


def required_theta(n, eps):
    """Smallest theta with theta >= ln(2n) / (2 eps^2)."""
    if n < 1 or eps <= 0:
        raise ValueError("need n >= 1 and eps > 0")
    return max(1, math.ceil(math.log(2.0 * n) / (2.0 * eps * eps)))


class RRIndex:
    """
    theta RR sets per target node with the bookkeeping the greedy loop needs.

    Sets are numbered owner by owner: the sets of target u are
    first_set[u] .. first_set[u] + theta - 1, stored as sorted id runs in
    members[set_ptr[s]:set_ptr[s + 1]]. inv_sets lists, per node, every set
    containing it; alive tells which of them are still live.

    Every (member v, owner u) pair that occurs gets one slot in the pair
    table, whose pair_count is overlap(v, R_u) over live sets.
    """

    def __init__(self, n, theta, seed, owners, set_ptr, members, thresholds):
        self.n = int(n)
        self.theta = int(theta)
        self.seed = int(seed)
        self.owner = np.asarray(owners, dtype=np.int64)
        self.set_ptr = np.asarray(set_ptr, dtype=np.int64)
        self.members = np.asarray(members, dtype=np.int32)
        self.tau = np.asarray(thresholds.tau, dtype=np.float64)

        num_sets = self.owner.shape[0]
        self.target_mask = np.zeros(self.n, dtype=bool)
        self.target_mask[self.owner] = True
        self.first_set = np.full(self.n, -1, dtype=np.int64)
        starts = np.flatnonzero(np.r_[True, self.owner[1:] != self.owner[:-1]]) if num_sets else []
        self.first_set[self.owner[starts]] = starts

        lengths = np.diff(self.set_ptr)
        self.entry_set = np.repeat(np.arange(num_sets, dtype=np.int64), lengths)
        order = np.argsort(self.members, kind="stable")
        self.inv_sets = self.entry_set[order]
        self.inv_ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.members, minlength=self.n), out=self.inv_ptr[1:])

        keys = self.members.astype(np.int64) * self.n + self.owner[self.entry_set]
        uniq, self.entry_pair = np.unique(keys, return_inverse=True)
        self.entry_pair = self.entry_pair.reshape(-1)
        self.pair_keys = uniq
        self.pair_v = uniq // self.n
        self.pair_u = uniq % self.n

        self.req_initial = np.where(self.target_mask, requirement(self.tau, self.theta), 0)
        self.reset()

    def reset(self):
        """Restores the fresh state: every set live, nothing selected."""
        num_sets = self.owner.shape[0]
        self.alive = np.ones(num_sets, dtype=bool)
        self.pair_count = np.bincount(self.entry_pair, minlength=self.pair_keys.shape[0]).astype(np.int64)
        self.req = self.req_initial.copy()
        self.removed = np.zeros(self.n, dtype=np.int64)
        self.selected = np.zeros(self.n, dtype=bool)

    def copy(self):
        """Independent mutable state over shared immutable set storage."""
        clone = object.__new__(RRIndex)
        clone.__dict__.update(self.__dict__)
        for name in ("alive", "pair_count", "req", "removed", "selected"):
            setattr(clone, name, getattr(self, name).copy())
        return clone

    def mismatches(self, target, theta=None, seed=None):
        """
        Reasons this index cannot serve a problem over target with the given
        theta and seed; None skips a check. Empty means it fits.
        """
        reasons = []
        if target.mask.shape[0] != self.n:
            reasons.append(f"index has n={self.n}, target mask covers {target.mask.shape[0]} nodes")
        elif not np.array_equal(self.target_mask, target.mask):
            reasons.append(
                f"index holds sets for {int(self.target_mask.sum())} targets, "
                f"the problem has a different target set of {target.size}"
            )
        if theta is not None and int(theta) != self.theta:
            reasons.append(f"index has theta={self.theta}, the problem asks for {theta}")
        if seed is not None and int(seed) != self.seed:
            reasons.append(f"index was built with seed={self.seed}, the problem asks for {seed}")
        return reasons

    def with_thresholds(self, thresholds):
        """Fresh index over the same sets with requirements for new thresholds."""
        if len(thresholds) != self.n:
            raise ValueError(f"thresholds cover {len(thresholds)} nodes, index has n={self.n}")
        clone = self.copy()
        clone.tau = np.asarray(thresholds.tau, dtype=np.float64)
        clone.req_initial = np.where(clone.target_mask, requirement(clone.tau, clone.theta), 0)
        clone.reset()
        return clone

    @property
    def num_sets(self):
        return int(self.owner.shape[0])

    def rr_sets(self, u):
        """All theta sets of u, live or not, as sorted arrays."""
        start = self.first_set[u]
        if start < 0:
            return []
        return [self.members[self.set_ptr[s]:self.set_ptr[s + 1]] for s in range(start, start + self.theta)]

    def sets_containing(self, v, live_only=True):
        sets = self.inv_sets[self.inv_ptr[v]:self.inv_ptr[v + 1]]
        if live_only:
            sets = sets[self.alive[sets]]
        return sets

    def live_count(self, u):
        start = self.first_set[u]
        if start < 0:
            return 0
        return int(self.alive[start:start + self.theta].sum())

    def coverage_counts(self, seeds):
        """Per owner, how many of its theta sets (live or removed) contain a seed."""
        hit = np.zeros(self.num_sets, dtype=bool)
        for s in seeds:
            hit[self.sets_containing(int(s), live_only=False)] = True
        return np.bincount(self.owner[hit], minlength=self.n)

    def coverage_fraction(self, u, seeds):
        """
        Fraction of R_u overlapping seeds, over the original theta sets.
        Removed sets still count: they were removed because a seed hit them.
        """
        if not (0 <= u < self.n and self.target_mask[u]):
            raise ValueError(f"node {u} is not in the target set")
        start = self.first_set[u]
        hit = set()
        for s in seeds:
            sets = self.sets_containing(int(s), live_only=False)
            hit.update(sets[(sets >= start) & (sets < start + self.theta)].tolist())
        return len(hit) / self.theta

    def overlap(self, v, u):
        """Number of live sets of R_u containing v."""
        key = int(v) * self.n + int(u)
        slot = np.searchsorted(self.pair_keys, key)
        if slot < self.pair_keys.shape[0] and self.pair_keys[slot] == key:
            return int(self.pair_count[slot])
        return 0

    def remove_hit_sets(self, x):
        """
        Marks x selected and removes every live set containing it.

        Returns:
            numpy.ndarray: rem(u), the number of sets removed from each R_u.
        """
        self.selected[x] = True
        sets = self.sets_containing(int(x))
        if sets.size == 0:
            return np.zeros(self.n, dtype=np.int64)
        self.alive[sets] = False
        rem = np.bincount(self.owner[sets], minlength=self.n)
        self.req -= rem
        self.removed += rem
        entries = gather_ranges(self.set_ptr, sets)
        self.pair_count -= np.bincount(self.entry_pair[entries], minlength=self.pair_count.shape[0])
        return rem

    @property
    def active_mask(self):
        """Targets whose requirement is met: estimated cumulative activation."""
        return self.target_mask & (self.req <= 0)

    @property
    def estimated_active(self):
        return int(np.count_nonzero(self.active_mask))

    def rebuilt_pair_count(self):
        """overlap counts recomputed from the live sets alone."""
        live_entries = self.alive[self.entry_set]
        return np.bincount(self.entry_pair[live_entries], minlength=self.pair_keys.shape[0])

    def is_consistent(self):
        if not np.array_equal(self.rebuilt_pair_count(), self.pair_count):
            return False
        removed = np.bincount(self.owner[~self.alive], minlength=self.n)
        return bool(np.array_equal(self.req + removed, self.req_initial)
                    and np.array_equal(removed, self.removed))


def _estimate_bytes(graph, target, theta):
    mean_in = graph.m / max(graph.n, 1)
    mean_p = float(np.mean(graph.out_prob)) if graph.m else 0.0
    expected_size = 1.0 + mean_in * mean_p
    sets = target.size * theta
    return int(sets * (BYTES_PER_SET + expected_size * BYTES_PER_ENTRY))


def _sample_roots(graph, roots, theta, seed):
    sampler = RRSampler(graph)
    lengths = []
    members = []
    in_degree = graph.in_degree
    for u in roots:
        u = int(u)
        if in_degree[u] == 0:
            lengths.extend([1] * theta)
            members.extend([u] * theta)
            continue
        rng = substream(seed, STREAM_RR, u)
        for _ in range(theta):
            nodes = sampler.sample(u, rng)
            lengths.append(len(nodes))
            members.extend(nodes)
    return np.asarray(lengths, dtype=np.int64), np.asarray(members, dtype=np.int32)


def build_index(graph, target, thresholds, theta, seed=0, memory_budget=RR_MEMORY_BUDGET,
                n_jobs=1, chunk_size=2048, progress=False):
    """
    Generates theta RR sets for every target node and indexes them.

    Root u always draws from substream (seed, u), so the index does not depend
    on generation order or n_jobs.

    Raises:
        MemoryBudgetExceeded: when the expected or actual size passes memory_budget.
    """
    if theta < 1:
        raise ValueError("theta must be at least 1")
    estimate_bytes = _estimate_bytes(graph, target, theta)
    if estimate_bytes > memory_budget:
        raise MemoryBudgetExceeded(estimate_bytes, memory_budget)

    roots = target.nodes
    chunks = [roots[i:i + chunk_size] for i in range(0, roots.shape[0], chunk_size)]
    if n_jobs == 1:
        parts = []
        used = 0
        for chunk in tqdm(chunks, desc="RR sets", disable=not progress):
            lengths, members = _sample_roots(graph, chunk, theta, seed)
            used += lengths.shape[0] * BYTES_PER_SET + members.shape[0] * BYTES_PER_ENTRY
            if used > memory_budget:
                raise MemoryBudgetExceeded(used, memory_budget)
            parts.append((lengths, members))
    else:
        parts = Parallel(n_jobs=n_jobs)(
            delayed(_sample_roots)(graph, chunk, theta, seed) for chunk in chunks
        )
        used = sum(l.shape[0] * BYTES_PER_SET + m.shape[0] * BYTES_PER_ENTRY for l, m in parts)
        if used > memory_budget:
            raise MemoryBudgetExceeded(used, memory_budget)

    lengths = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, dtype=np.int64)
    members = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0, dtype=np.int32)
    owners = np.repeat(roots, theta)
    set_ptr = np.zeros(lengths.shape[0] + 1, dtype=np.int64)
    np.cumsum(lengths, out=set_ptr[1:])

    # sort members inside each set
    entry_set = np.repeat(np.arange(lengths.shape[0]), lengths)
    members = members[np.lexsort((members, entry_set))]

    index = RRIndex(graph.n, theta, seed, owners, set_ptr, members, thresholds)
    logger.info(
        f"Built RR index: {index.num_sets} sets over {target.size} targets, "
        f"{members.shape[0]} entries, theta={theta}"
    )
    return index
