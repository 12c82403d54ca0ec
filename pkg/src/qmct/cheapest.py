"""Cheapest-path labels and cheapest-path subnetworks.

Arc costs may be negative as long as the network is conservative, so all
labeling is label-correcting (Bellman-Ford) rather than Dijkstra.
Unreachable nodes are represented by absence from the label map, never
by a sentinel value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InternalCheckError, NoPathError
from .network import Network, NodeId

FROM_SOURCE = "from-source"
TO_SINK = "to-sink"


@dataclass(frozen=True)
class CostLabels:
    """Cheapest-path costs from (or to) a fixed endpoint.

    ``values`` holds one entry per reachable node; nodes absent from the
    map are unreachable.  ``direction`` says whether costs are measured
    from the origin outwards or towards the target.
    """

    origin: NodeId
    direction: str
    values: Mapping[NodeId, Fraction]

    def __contains__(self, node: NodeId) -> bool:
        return node in self.values

    def __getitem__(self, node: NodeId) -> Fraction:
        return self.values[node]


def bellman_ford(
    num_nodes: int,
    arcs: Sequence[tuple[int, int, Fraction]],
    start: int,
) -> list[Fraction | None]:
    """Cheapest-path costs from ``start``; None marks unreachable nodes.

    Runs at most ``num_nodes - 1`` relaxation rounds plus one detection
    round; a relaxation in the detection round means a negative cycle is
    reachable, which callers are expected to have excluded.
    """
    dist: list[Fraction | None] = [None] * num_nodes
    dist[start] = Fraction(0)
    for _ in range(max(num_nodes - 1, 0)):
        changed = False
        for tail, head, cost in arcs:
            base = dist[tail]
            if base is None:
                continue
            d = base + cost
            old = dist[head]
            if old is None or d < old:
                dist[head] = d
                changed = True
        if not changed:
            break
    else:
        for tail, head, cost in arcs:
            base = dist[tail]
            if base is not None:
                old = dist[head]
                if old is None or base + cost < old:
                    raise InternalCheckError("negative cycle reached during labeling")
    return dist


def _indexed_arcs(network: Network) -> list[tuple[int, int, Fraction]]:
    idx = network.node_index
    return [(idx(a.tail), idx(a.head), a.cost) for a in network.arcs]


def cheapest_from(network: Network, source: NodeId) -> CostLabels:
    """Cost of a cheapest path from ``source`` to every reachable node."""
    dist = bellman_ford(len(network.nodes), _indexed_arcs(network), network.node_index(source))
    values = {v: d for v, d in zip(network.nodes, dist) if d is not None}
    return CostLabels(source, FROM_SOURCE, values)


def cheapest_to(network: Network, sink: NodeId) -> CostLabels:
    """Cost of a cheapest path from every node to ``sink`` (reversed labeling)."""
    idx = network.node_index
    reversed_arcs = [(idx(a.head), idx(a.tail), a.cost) for a in network.arcs]
    dist = bellman_ford(len(network.nodes), reversed_arcs, idx(sink))
    values = {v: d for v, d in zip(network.nodes, dist) if d is not None}
    return CostLabels(sink, TO_SINK, values)


def subnetwork_arcs(
    network: Network,
    forward: CostLabels,
    backward: CostLabels,
    optimum: Fraction,
) -> frozenset[int]:
    """Arcs whose forward label + cost + backward label meets ``optimum`` exactly."""
    selected = []
    for i, arc in enumerate(network.arcs):
        if arc.tail in forward and arc.head in backward:
            if forward[arc.tail] + arc.cost + backward[arc.head] == optimum:
                selected.append(i)
    return frozenset(selected)


def cheapest_paths_subnetwork(network: Network, source: NodeId, sink: NodeId) -> frozenset[int]:
    """Indices of all arcs lying on at least one cheapest source-sink path."""
    forward = cheapest_from(network, source)
    if sink not in forward:
        raise NoPathError(f"no path from {source!r} to {sink!r}")
    backward = cheapest_to(network, sink)
    return subnetwork_arcs(network, forward, backward, forward[sink])


def pair_costs(network: Network) -> dict[tuple[NodeId, NodeId], Fraction]:
    """Cheapest-path cost for every source-sink pair connected by a path.

    Pairs with no connecting path are absent from the result.
    """
    sinks = network.sinks
    costs: dict[tuple[NodeId, NodeId], Fraction] = {}
    for s in network.sources:
        labels = cheapest_from(network, s)
        for t in sinks:
            if t in labels:
                costs[(s, t)] = labels[t]
    return costs
