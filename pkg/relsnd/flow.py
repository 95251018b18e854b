"""Max-flow / min-cut and min-cost flow on undirected multigraphs.

Both solvers work in exact rationals. An undirected edge of capacity c admits
a net flow anywhere in [-c, c]; the sign is taken relative to the edge's
(u, v) orientation.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from relsnd.errors import InfeasibleError, InvalidArgumentError
from relsnd.graph import Multigraph, as_rational, cut_edges

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FlowResult:
    value: Fraction
    net_flow: dict[int, Fraction]  # positive = from e.u to e.v
    source_side: frozenset[int]
    complete: bool = True  # False when stopped at a cutoff; source_side is then not a min cut

    @property
    def flow_per_edge(self) -> dict[int, Fraction]:
        return {eid: abs(f) for eid, f in self.net_flow.items()}

    def cut(self, g: Multigraph) -> frozenset[int]:
        """δ(source_side), the minimum cut closest to the source set."""
        return cut_edges(g, self.source_side)


@dataclass(frozen=True, eq=False)
class MinCostFlowResult:
    cost: Fraction
    edge_flow: dict[int, int] = field(default_factory=dict)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.edge_flow)


def _terminal_sets(g: Multigraph, xs: Iterable[int], ys: Iterable[int]):
    xs, ys = frozenset(xs), frozenset(ys)
    if not xs or not ys:
        raise InvalidArgumentError("source and sink sets must be nonempty")
    if xs & ys:
        raise InvalidArgumentError(f"source and sink sets intersect at {sorted(xs & ys)}")
    for x in xs | ys:
        if not 0 <= x < g.node_count:
            raise InvalidArgumentError(f"node {x} not in graph")
    return xs, ys


def max_flow_min_cut(
    g: Multigraph,
    capacity: Mapping[int, Fraction],
    xs: Iterable[int],
    ys: Iterable[int],
    cutoff: Fraction | None = None,
) -> FlowResult:
    """Maximum X→Y flow by shortest augmenting paths.

    X and Y behave as if each were contracted: edges inside X or inside Y carry
    no flow. `source_side` is the residual-reachable set from X, i.e. the
    minimum cut closest to X. With a cutoff the search stops once the flow
    value reaches it.
    """
    xs, ys = _terminal_sets(g, xs, ys)
    cap = {}
    for e in g.edges:
        c = as_rational(capacity[e.id])
        if c < 0:
            raise InvalidArgumentError(f"negative capacity on edge {e.id}")
        cap[e.id] = c
    flow = {e.id: Fraction(0) for e in g.edges}
    value = Fraction(0)

    def internal(e) -> bool:
        return (e.u in xs and e.v in xs) or (e.u in ys and e.v in ys)

    def residual(e, a) -> Fraction:
        return cap[e.id] - flow[e.id] if a == e.u else cap[e.id] + flow[e.id]

    while True:
        parent = {x: None for x in sorted(xs)}
        queue = deque(sorted(xs))
        reached = None
        while queue and reached is None:
            a = queue.popleft()
            for e in g.incident(a):
                if internal(e):
                    continue
                b = e.other(a)
                if b in parent or residual(e, a) <= 0:
                    continue
                parent[b] = (a, e)
                if b in ys:
                    reached = b
                    break
                queue.append(b)
        if reached is None:
            return FlowResult(value, flow, frozenset(parent))

        path = []
        b = reached
        while parent[b] is not None:
            a, e = parent[b]
            path.append((a, e))
            b = a
        delta = min(residual(e, a) for a, e in path)
        if cutoff is not None:
            delta = min(delta, cutoff - value)
        for a, e in path:
            flow[e.id] += delta if a == e.u else -delta
        value += delta
        if cutoff is not None and value >= cutoff:
            return FlowResult(value, flow, frozenset(parent), complete=False)


def edge_connectivity(g: Multigraph, u: int, v: int, cutoff: int | None = None) -> int:
    """Number of edge-disjoint u–v paths, capped at `cutoff` when given."""
    ones = {e.id: 1 for e in g.edges}
    res = max_flow_min_cut(g, ones, {u}, {v}, cutoff=None if cutoff is None else Fraction(cutoff))
    return int(res.value)


@dataclass(slots=True)
class _Arc:
    to: int
    cap: int
    cost: Fraction
    rev: int
    eid: int
    forward: bool  # True for an arc of the original network, False for its residual twin


def min_cost_flow(
    g: Multigraph,
    cost: Mapping[int, Fraction],
    capacity: Mapping[int, int],
    src: int,
    sink: int,
    amount: int,
) -> MinCostFlowResult:
    """Integral min-cost flow of exactly `amount` units by successive shortest paths.

    Each undirected edge becomes two opposite arcs; opposite flows on the same
    edge are cancelled in the reported result.
    """
    if amount < 0:
        raise InvalidArgumentError("flow amount must be nonnegative")
    _terminal_sets(g, {src}, {sink})
    if amount == 0:
        return MinCostFlowResult(Fraction(0), {})

    arcs: list[list[_Arc]] = [[] for _ in g.nodes]

    def add_arc(a, b, c, w, eid):
        arcs[a].append(_Arc(b, c, w, len(arcs[b]), eid, True))
        arcs[b].append(_Arc(a, 0, -w, len(arcs[a]) - 1, eid, False))

    for e in g.edges:
        w = as_rational(cost[e.id])
        if w < 0:
            raise InvalidArgumentError(f"negative cost on edge {e.id}")
        c = int(capacity[e.id])
        if c < 0:
            raise InvalidArgumentError(f"negative capacity on edge {e.id}")
        add_arc(e.u, e.v, c, w, e.id)
        add_arc(e.v, e.u, c, w, e.id)

    sent = 0
    while sent < amount:
        dist: list[Fraction | None] = [None] * g.node_count
        prev: list[tuple[int, int] | None] = [None] * g.node_count
        dist[src] = Fraction(0)
        queue = deque([src])
        queued = {src}
        while queue:
            a = queue.popleft()
            queued.discard(a)
            for i, arc in enumerate(arcs[a]):
                if arc.cap <= 0:
                    continue
                nd = dist[a] + arc.cost
                if dist[arc.to] is None or nd < dist[arc.to]:
                    dist[arc.to] = nd
                    prev[arc.to] = (a, i)
                    if arc.to not in queued:
                        queue.append(arc.to)
                        queued.add(arc.to)
        if dist[sink] is None:
            best = max_flow_min_cut(g, capacity, {src}, {sink}).value
            raise InfeasibleError(
                f"cannot route {amount} units from {src} to {sink}; at most {best} possible",
                max_value=best,
            )
        push = amount - sent
        b = sink
        while b != src:
            a, i = prev[b]
            push = min(push, arcs[a][i].cap)
            b = a
        b = sink
        while b != src:
            a, i = prev[b]
            arc = arcs[a][i]
            arc.cap -= push
            arcs[arc.to][arc.rev].cap += push
            b = a
        sent += push
        log.debug("min-cost flow: pushed %d along path of cost %s", push, dist[sink])

    net: dict[int, int] = {}
    for a in g.nodes:
        for arc in arcs[a]:
            if not arc.forward:
                continue
            used = arcs[arc.to][arc.rev].cap
            if used:
                e = g.edge(arc.eid)
                net[arc.eid] = net.get(arc.eid, 0) + (used if a == e.u else -used)
    edge_flow = {eid: abs(f) for eid, f in sorted(net.items()) if f}
    total = sum((as_rational(cost[eid]) * f for eid, f in edge_flow.items()), Fraction(0))
    return MinCostFlowResult(total, edge_flow)
