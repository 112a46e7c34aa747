"""Acyclic single-source multigraph networks and unit-capacity max-flow."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Hashable, List, Sequence, Tuple

from .fields import FieldSpec

Node = Hashable


class CycleDetected(ValueError):
    """The edge set admits no topological order."""


class Network:
    """Directed acyclic multigraph with one source and unit-capacity edges.

    Real edges get ids 0..len(edges)-1 (their position in the edge list).
    The r imaginary links from the implicit upstream source carry the
    reserved ids -1..-r and all enter `source`.
    """

    __slots__ = ("nodes", "edges", "source", "sinks", "rate", "field",
                 "in_edges", "out_edges")

    def __init__(self, nodes: Sequence[Node], edges: Sequence[Tuple[Node, Node]],
                 source: Node, sinks: Sequence[Node], rate: int, field: FieldSpec):
        nodes = tuple(nodes)
        node_set = set(nodes)
        if len(node_set) != len(nodes):
            raise ValueError("duplicate node ids")
        edges = tuple((t, h) for t, h in edges)
        for t, h in edges:
            if t not in node_set or h not in node_set:
                raise ValueError(f"edge endpoint not a node: {(t, h)}")
        if source not in node_set:
            raise ValueError("source is not a node")
        for s in sinks:
            if s not in node_set:
                raise ValueError(f"sink is not a node: {s}")
        if rate < 1:
            raise ValueError("rate must be >= 1")
        if any(h == source for _, h in edges):
            raise ValueError("source must have no incoming real edges")
        self.nodes = nodes
        self.edges = edges
        self.source = source
        self.sinks = tuple(sinks)
        self.rate = rate
        self.field = field
        self.in_edges: Dict[Node, List[int]] = {n: [] for n in nodes}
        self.out_edges: Dict[Node, List[int]] = {n: [] for n in nodes}
        for e, (t, h) in enumerate(edges):
            self.out_edges[t].append(e)
            self.in_edges[h].append(e)
        # imaginary links, ascending id
        self.in_edges[source] = list(range(-rate, 0))

    def imaginary_ids(self) -> List[int]:
        return list(range(-self.rate, 0))

    def tail(self, e: int) -> Node:
        return self.edges[e][0]

    def head(self, e: int) -> Node:
        return self.edges[e][1]


def topo_order(net: Network) -> List[Node]:
    """Kahn's algorithm over real edges; ties broken by node-list position."""
    indeg = {n: 0 for n in net.nodes}
    for _, h in net.edges:
        indeg[h] += 1
    order_index = {n: i for i, n in enumerate(net.nodes)}
    ready = sorted((n for n in net.nodes if indeg[n] == 0), key=order_index.__getitem__)
    queue = deque(ready)
    out: List[Node] = []
    while queue:
        n = queue.popleft()
        out.append(n)
        freed = []
        for e in net.out_edges[n]:
            h = net.head(e)
            indeg[h] -= 1
            if indeg[h] == 0:
                freed.append(h)
        for h in sorted(set(freed), key=order_index.__getitem__):
            queue.append(h)
    if len(out) != len(net.nodes):
        raise CycleDetected("graph has a directed cycle")
    return out


@dataclass(frozen=True)
class FlowResult:
    value: int
    paths: Tuple[Tuple[int, ...], ...]


def max_flow(net: Network, t: Node) -> FlowResult:
    """Maximum number of edge-disjoint source->t paths, with the paths.

    Shortest augmenting paths over the unit-capacity residual graph; edge
    ids are scanned in ascending order so the result is deterministic.
    """
    if t == net.source:
        raise ValueError("sink must differ from the source")
    if t not in net.in_edges:
        raise ValueError(f"unknown node: {t}")
    flow = [0] * len(net.edges)
    while True:
        # BFS for a shortest residual path
        parent: Dict[Node, Tuple[int, bool]] = {}  # node -> (edge, used forward)
        seen = {net.source}
        queue = deque([net.source])
        found = False
        while queue and not found:
            u = queue.popleft()
            for e in net.out_edges[u]:
                h = net.head(e)
                if flow[e] == 0 and h not in seen:
                    seen.add(h)
                    parent[h] = (e, True)
                    if h == t:
                        found = True
                        break
                    queue.append(h)
            if found:
                break
            for e in net.in_edges[u]:
                if e < 0:
                    continue
                tl = net.tail(e)
                if flow[e] == 1 and tl not in seen:
                    seen.add(tl)
                    parent[tl] = (e, False)
                    queue.append(tl)
        if not found:
            break
        n = t
        while n != net.source:
            e, fwd = parent[n]
            if fwd:
                flow[e] = 1
                n = net.tail(e)
            else:
                flow[e] = 0
                n = net.head(e)
    # decompose the flow into edge-disjoint paths
    used = [False] * len(net.edges)
    paths: List[Tuple[int, ...]] = []
    while True:
        path: List[int] = []
        n = net.source
        while n != t:
            nxt = None
            for e in net.out_edges[n]:
                if flow[e] == 1 and not used[e]:
                    nxt = e
                    break
            if nxt is None:
                break
            used[nxt] = True
            path.append(nxt)
            n = net.head(nxt)
        if n == t and path:
            paths.append(tuple(path))
        else:
            break
    return FlowResult(value=len(paths), paths=tuple(paths))
