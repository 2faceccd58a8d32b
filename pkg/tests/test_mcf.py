import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uamsim.errors import Infeasible
from uamsim.mcf import min_cost_flow


def random_instance(seed, n=7, m=18):
    rng = np.random.default_rng(seed)
    tails = rng.integers(0, n, m)
    heads = (tails + rng.integers(1, n, m)) % n
    upper = rng.integers(1, 6, m)
    lower = np.where(rng.random(m) < 0.2, rng.integers(0, 2, m), 0)
    lower = np.minimum(lower, upper)
    cost = rng.integers(0, 10, m)
    supply = np.zeros(n, dtype=int)
    for _ in range(int(rng.integers(1, 6))):
        a, b = rng.choice(n, 2, replace=False)
        supply[a] += 1
        supply[b] -= 1
    return [list(map(int, x)) for x in (tails, heads, lower, upper, cost, supply)]


def networkx_cost(n, tails, heads, lower, upper, cost, supply):
    """Optimal cost via network simplex, lower bounds shifted out by hand."""
    g = nx.MultiDiGraph()
    demand = [-s for s in supply]
    base = 0
    for k in range(len(tails)):
        demand[tails[k]] += lower[k]
        demand[heads[k]] -= lower[k]
        base += lower[k] * cost[k]
    for i in range(n):
        g.add_node(i, demand=demand[i])
    for k in range(len(tails)):
        g.add_edge(tails[k], heads[k], capacity=upper[k] - lower[k], weight=cost[k])
    try:
        return base + nx.min_cost_flow_cost(g)
    except nx.NetworkXUnfeasible:
        return None


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matches_network_simplex(seed):
    tails, heads, lower, upper, cost, supply = random_instance(seed)
    n = len(supply)
    expected = networkx_cost(n, tails, heads, lower, upper, cost, supply)
    if expected is None:
        with pytest.raises(Infeasible):
            min_cost_flow(n, tails, heads, lower, upper, cost, supply)
        return
    flows = min_cost_flow(n, tails, heads, lower, upper, cost, supply)
    assert sum(f * c for f, c in zip(flows, cost)) == expected
    net = [0] * n
    for k, f in enumerate(flows):
        assert lower[k] <= f <= upper[k]
        net[tails[k]] += f
        net[heads[k]] -= f
    assert net == supply


def test_negative_cost_rejected():
    with pytest.raises(ValueError):
        min_cost_flow(2, [0], [1], [0], [1], [-1], [1, -1])
