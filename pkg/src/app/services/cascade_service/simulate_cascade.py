from collections import deque


class CascadeSimulator:
    """
    Forward independent-cascade runs over one graph.

    The visited mask is reused between runs: a node counts as visited when its
    stamp equals the current epoch, so no O(n) reset happens per run.
    """

    def __init__(self, graph):
        self.graph = graph
        self._ptr = graph.out_ptr.tolist()
        self._dst = graph.out_dst
        self._prob = graph.out_prob
        self._stamp = [0] * graph.n
        self._epoch = 0

    def run(self, seeds, rng):
        """
        One cascade from seeds.

        Returns:
            list: active nodes in activation order, seeds first.
        """
        self._epoch += 1
        epoch = self._epoch
        stamp = self._stamp
        ptr = self._ptr
        active = []
        queue = deque()
        for s in seeds:
            s = int(s)
            if stamp[s] != epoch:
                stamp[s] = epoch
                active.append(s)
                queue.append(s)
        while queue:
            u = queue.popleft()
            lo, hi = ptr[u], ptr[u + 1]
            if lo == hi:
                continue
            # every out-edge of u gets exactly one coin
            hits = self._dst[lo:hi][rng.random(hi - lo) < self._prob[lo:hi]]
            for v in hits.tolist():
                if stamp[v] != epoch:
                    stamp[v] = epoch
                    active.append(v)
                    queue.append(v)
        return active


def simulate_cascade(graph, seeds, rng):
    """Runs a single cascade and returns the set of activated nodes."""
    return set(CascadeSimulator(graph).run(seeds, rng))
