"""Seeded random instance generation.

Instances are deterministic per seed, always pass validation, and are
routable by construction: tentative supplies and demands are projected
onto what the pair-reachability structure can actually carry, and
terminals that end up with nothing are demoted to intermediate nodes.
"""

from __future__ import annotations

import random
from collections import deque
from fractions import Fraction

from .network import Arc, Network
from .staticflow import FlowProblem, max_flow


def _reachable_from(num_nodes: int, arcs: list[tuple[int, int]], start: int) -> set[int]:
    adj: list[list[int]] = [[] for _ in range(num_nodes)]
    for u, v in arcs:
        adj[u].append(v)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def generate(
    seed: int,
    nodes: int = 5,
    terminals: int = 2,
    tau_max: int = 3,
    cap_max: int = 3,
    cost_max: int = 3,
    density: float = 0.55,
    half_balance_prob: float = 0.25,
    negative_costs: bool = False,
) -> Network:
    """Generate a valid, routable instance; identical output per seed.

    ``terminals`` caps the number of sources and of sinks (each side
    gets between one and that many).  Capacities are integers in
    [1, cap_max], transit times integers in [0, tau_max], costs integers
    in [0, cost_max].  With ``negative_costs`` a random node potential is
    folded into the costs, which produces negative coefficients but can
    never create a negative cycle.  Balances may be half-integral with
    probability ``half_balance_prob`` per terminal.
    """
    if nodes < 2:
        raise ValueError("need at least two nodes")
    rng = random.Random(seed)
    names = [f"n{i}" for i in range(nodes)]
    per_side = max(1, min(terminals, nodes // 2))
    k_src = rng.randint(1, per_side)
    k_snk = rng.randint(1, per_side)
    picked = rng.sample(range(nodes), k_src + k_snk)
    source_ids = sorted(picked[:k_src])
    sink_ids = sorted(picked[k_src:])

    target_arcs = max(nodes - 1, round(density * nodes * (nodes - 1) / 2))
    endpoints: list[tuple[int, int]] = []
    for _ in range(target_arcs):
        u = rng.randrange(nodes)
        v = rng.randrange(nodes)
        if u != v:
            endpoints.append((u, v))

    # Repair: every source must reach a sink, every sink must be reached.
    for s in source_ids:
        if not (_reachable_from(nodes, endpoints, s) & set(sink_ids)):
            endpoints.append((s, rng.choice(sink_ids)))
    reached = set()
    for s in source_ids:
        reached |= _reachable_from(nodes, endpoints, s)
    for t in sink_ids:
        if t not in reached:
            endpoints.append((rng.choice(source_ids), t))

    potential = [rng.randint(0, cost_max) if negative_costs else 0 for _ in range(nodes)]
    arcs = []
    for u, v in endpoints:
        cost = rng.randint(0, cost_max) + potential[u] - potential[v]
        arcs.append(
            Arc.of(
                names[u],
                names[v],
                rng.randint(1, cap_max),
                rng.randint(0, tau_max),
                cost,
            )
        )

    def tentative() -> Fraction:
        if rng.random() < half_balance_prob:
            return Fraction(rng.randint(1, 2 * cap_max), 2)
        return Fraction(rng.randint(1, cap_max))

    supplies = {s: tentative() for s in source_ids}
    demands = {t: tentative() for t in sink_ids}

    # Project tentative balances onto the pair-reachability structure so
    # the final instance is guaranteed routable.
    pair_arcs: list[tuple[int, int, None]] = []
    for i, s in enumerate(source_ids):
        reach = _reachable_from(nodes, endpoints, s)
        for j, t in enumerate(sink_ids):
            if t in reach:
                pair_arcs.append((i, k_src + j, None))
    super_source = k_src + k_snk
    super_sink = super_source + 1
    wiring = [(super_source, i, supplies[s]) for i, s in enumerate(source_ids)]
    wiring += [(k_src + j, super_sink, demands[t]) for j, t in enumerate(sink_ids)]
    problem = FlowProblem.of(super_sink + 1, pair_arcs + wiring)
    result = max_flow(problem, super_source, super_sink)

    balances: dict[str, Fraction] = {}
    offset = len(pair_arcs)
    for i, s in enumerate(source_ids):
        amount = result.flow.values[offset + i]
        if amount > 0:
            balances[names[s]] = amount
    for j, t in enumerate(sink_ids):
        amount = result.flow.values[offset + k_src + j]
        if amount > 0:
            balances[names[t]] = -amount

    return Network.of(names, arcs, balances)
