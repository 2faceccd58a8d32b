"""Integral min-cost flow with edge lower bounds.

Primal-dual method: Dijkstra on reduced costs keeps node potentials, then a
Dinic-style blocking flow saturates the zero-reduced-cost subgraph before the
potentials are refreshed.  Costs must be non-negative integers; capacities and
supplies are integers.
"""

from __future__ import annotations

import heapq
from collections import deque

from .errors import Infeasible

INF = float("inf")


class _Residual:
    def __init__(self, n):
        self.n = n
        self.adj = [[] for _ in range(n)]
        self.to = []
        self.cap = []
        self.cost = []

    def add(self, u, v, cap, cost):
        e = len(self.to)
        self.to += [v, u]
        self.cap += [cap, 0]
        self.cost += [cost, -cost]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e


def min_cost_flow(n_nodes, tails, heads, lower, upper, cost, supply):
    """Solve ``min sum cost*x`` s.t. ``lower <= x <= upper`` and conservation.

    ``supply[i]`` is outflow minus inflow required at node ``i``.  Returns the
    list of edge flows.  Raises :class:`Infeasible` when no flow satisfies the
    constraints.
    """
    m = len(tails)
    if any(c < 0 for c in cost):
        raise ValueError("costs must be non-negative")
    if sum(supply) != 0:
        raise Infeasible("supplies do not balance")
    b = list(supply)
    for k in range(m):
        if lower[k] > upper[k]:
            raise Infeasible(f"edge {k}: lower bound above capacity")
        b[tails[k]] -= lower[k]
        b[heads[k]] += lower[k]

    S, T = n_nodes, n_nodes + 1
    g = _Residual(n_nodes + 2)
    ids = [g.add(tails[k], heads[k], upper[k] - lower[k], cost[k]) for k in range(m)]
    required = 0
    for i, s in enumerate(b):
        if s > 0:
            g.add(S, i, s, 0)
            required += s
        elif s < 0:
            g.add(i, T, -s, 0)

    pot = [0] * g.n
    sent = 0
    while sent < required:
        dist = _dijkstra(g, S, pot)
        if dist[T] == INF:
            raise Infeasible("supplies cannot be routed")
        reach_max = max(d for d in dist if d < INF)
        for v in range(g.n):
            pot[v] += dist[v] if dist[v] < INF else reach_max
        while True:
            level = _levels(g, S, pot)
            if level[T] < 0:
                break
            pushed = _blocking_flow(g, S, T, pot, level, required - sent)
            if not pushed:
                break
            sent += pushed
            if sent >= required:
                break
    return [lower[k] + g.cap[ids[k] + 1] for k in range(m)]


def _dijkstra(g, s, pot):
    dist = [INF] * g.n
    dist[s] = 0
    heap = [(0, s)]
    to, cap, cost, adj = g.to, g.cap, g.cost, g.adj
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        pu = pot[u]
        for e in adj[u]:
            if cap[e] > 0:
                v = to[e]
                nd = d + cost[e] + pu - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
    return dist


def _admissible(g, e, u, pot):
    return g.cap[e] > 0 and g.cost[e] + pot[u] - pot[g.to[e]] == 0


def _levels(g, s, pot):
    level = [-1] * g.n
    level[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        for e in g.adj[u]:
            v = g.to[e]
            if level[v] < 0 and _admissible(g, e, u, pot):
                level[v] = level[u] + 1
                q.append(v)
    return level


def _blocking_flow(g, s, t, pot, level, limit):
    """Augment unit-by-bottleneck along level-graph paths; iterative DFS."""
    it = [0] * g.n
    total = 0
    to, cap, adj = g.to, g.cap, g.adj
    while total < limit:
        path = []  # edge ids
        u = s
        while u != t:
            advanced = False
            while it[u] < len(adj[u]):
                e = adj[u][it[u]]
                v = to[e]
                if level[v] == level[u] + 1 and _admissible(g, e, u, pot):
                    path.append(e)
                    u = v
                    advanced = True
                    break
                it[u] += 1
            if not advanced:
                if u == s:
                    return total
                level[u] = -1  # dead end
                e = path.pop()
                u = to[e ^ 1]
                it[u] += 1
        push = min(min(cap[e] for e in path), limit - total)
        for e in path:
            cap[e] -= push
            cap[e ^ 1] += push
        total += push
    return total
