"""Integer residual-graph kernels for max-flow and min-cost flow.

Private module.  All capacities, costs and balances here are plain
integers; the public wrappers in :mod:`qmct.staticflow` scale rational
data to a common denominator before calling in and unscale results on
the way out.  A capacity of ``None`` means uncapacitated; it is only
ever compared against, never used in arithmetic.
"""

from __future__ import annotations

import heapq
from collections import deque

from .errors import InternalCheckError

INF = float("inf")


class Residual:
    """Paired-edge residual graph.

    Edge ``2k`` is the forward copy of input arc ``k`` (when built via
    :func:`build`), edge ``2k+1`` its reverse.  ``rem[e]`` is the
    remaining capacity (``None`` = unbounded) and ``rem[e ^ 1]`` of a
    forward edge equals the flow currently on it.
    """

    __slots__ = ("n", "to", "rem", "cost", "adj")

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.rem: list[int | None] = []
        self.cost: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add(self, u: int, v: int, cap: int | None, cost: int = 0) -> int:
        e = len(self.to)
        self.to.append(v)
        self.rem.append(cap)
        self.cost.append(cost)
        self.adj[u].append(e)
        self.to.append(u)
        self.rem.append(0)
        self.cost.append(-cost)
        self.adj[v].append(e + 1)
        return e

    def flow(self, e: int) -> int:
        f = self.rem[e ^ 1]
        assert f is not None
        return f

    def push(self, e: int, amount: int) -> None:
        if self.rem[e] is not None:
            self.rem[e] -= amount
        rev = self.rem[e ^ 1]
        self.rem[e ^ 1] = amount if rev is None else rev + amount


def build(n: int, tails, heads, caps, costs=None) -> Residual:
    g = Residual(n)
    if costs is None:
        for u, v, c in zip(tails, heads, caps):
            g.add(u, v, c)
    else:
        for u, v, c, w in zip(tails, heads, caps, costs):
            g.add(u, v, c, w)
    return g


def _bfs_augment(g: Residual, s: int, t: int) -> tuple[int, set[int]]:
    """One Edmonds-Karp augmentation; returns (pushed, visited)."""
    parent_edge = [-1] * g.n
    visited = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        if u == t:
            break
        for e in g.adj[u]:
            rem = g.rem[e]
            if rem != 0:
                v = g.to[e]
                if v not in visited:
                    visited.add(v)
                    parent_edge[v] = e
                    queue.append(v)
    if t not in visited:
        return 0, visited
    bottleneck = None
    v = t
    while v != s:
        e = parent_edge[v]
        rem = g.rem[e]
        if rem is not None and (bottleneck is None or rem < bottleneck):
            bottleneck = rem
        v = g.to[e ^ 1]
    if bottleneck is None:
        raise InternalCheckError("augmenting path with no finite capacity")
    v = t
    while v != s:
        e = parent_edge[v]
        g.push(e, bottleneck)
        v = g.to[e ^ 1]
    return bottleneck, visited


def max_flow(g: Residual, s: int, t: int) -> tuple[int, set[int]]:
    """Maximum s-t flow; returns (value, residual-reachable node set).

    The returned node set is the source side of a minimum cut.
    """
    value = 0
    while True:
        pushed, visited = _bfs_augment(g, s, t)
        if pushed == 0:
            return value, visited
        value += pushed


def _initial_potentials(g: Residual) -> list[int]:
    """Label-correcting pass from an implicit zero-cost root to all nodes.

    Produces potentials with non-negative reduced cost on every edge of
    positive remaining capacity.  Raises if relaxation fails to settle
    (a negative cycle, which validation should have excluded).
    """
    pi = [0] * g.n
    in_queue = [True] * g.n
    relax_count = [0] * g.n
    queue = deque(range(g.n))
    while queue:
        u = queue.popleft()
        in_queue[u] = False
        base = pi[u]
        for e in g.adj[u]:
            if g.rem[e] != 0:
                v = g.to[e]
                d = base + g.cost[e]
                if d < pi[v]:
                    pi[v] = d
                    relax_count[v] += 1
                    if relax_count[v] > g.n + 1:
                        raise InternalCheckError("negative cycle during potential init")
                    if not in_queue[v]:
                        in_queue[v] = True
                        queue.append(v)
    return pi


def _dijkstra(g: Residual, s: int, t: int, pi: list[int]):
    """Shortest reduced-cost distances from s; returns (dist, parent_edge)."""
    dist: list[int | float] = [INF] * g.n
    parent_edge = [-1] * g.n
    dist[s] = 0
    heap = [(0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        if u == t:
            break
        base = d + pi[u]
        for e in g.adj[u]:
            if g.rem[e] != 0:
                v = g.to[e]
                nd = base + g.cost[e] - pi[v]
                if nd < dist[v]:
                    dist[v] = nd
                    parent_edge[v] = e
                    heapq.heappush(heap, (nd, v))
    return dist, parent_edge


def min_cost_flow(g: Residual, s: int, t: int, target: int):
    """Successive shortest paths with potentials from s to t.

    Pushes as much flow as possible up to ``target``.  Returns
    ``(routed, pi, reachable)`` where ``pi`` are potentials satisfying
    ``cost[e] + pi[u] - pi[v] >= 0`` for every residual edge ``(u, v)``
    with remaining capacity, and ``reachable`` is the residual-reachable
    set from ``s`` when routing stopped short (else None).
    """
    pi = _initial_potentials(g)
    routed = 0
    while routed < target:
        dist, parent_edge = _dijkstra(g, s, t, pi)
        if dist[t] == INF:
            reachable = {v for v in range(g.n) if dist[v] < INF}
            return routed, pi, reachable
        cap_at = dist[t]
        for v in range(g.n):
            d = dist[v]
            pi[v] += cap_at if d > cap_at else d
        bottleneck = target - routed
        v = t
        while v != s:
            e = parent_edge[v]
            rem = g.rem[e]
            if rem is not None and rem < bottleneck:
                bottleneck = rem
            v = g.to[e ^ 1]
        v = t
        while v != s:
            e = parent_edge[v]
            g.push(e, bottleneck)
            v = g.to[e ^ 1]
        routed += bottleneck
    return routed, pi, None


def wire_balances(g: Residual, balances: list[int]) -> tuple[int, int, int]:
    """Attach a super source/sink for the given node balances.

    Must be called after all regular edges are added so that edge ids of
    regular arcs stay aligned with input order.  Returns
    ``(super_source, super_sink, total_supply)``.  The graph must have
    been built with two spare node slots (``n = num_nodes + 2``).
    """
    s = g.n - 2
    t = g.n - 1
    total = 0
    for v, b in enumerate(balances):
        if b > 0:
            g.add(s, v, b)
            total += b
        elif b < 0:
            g.add(v, t, -b)
    return s, t, total
