"""Primal-dual Steiner forest.

Moats grow uniformly around every component that still holds a terminal
separated from its mate. An edge is bought when the moats on its two ends
pay for it; afterwards edges are dropped in reverse purchase order whenever
the pairs stay connected without them.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from networkx.utils import UnionFind

from relsnd.errors import InvalidArgumentError, ResourceLimitError
from relsnd.graph import Multigraph, component_labels

log = logging.getLogger(__name__)

OPT_MAX_EDGES = 16


@dataclass(frozen=True)
class SteinerInstance:
    g: Multigraph
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        for a, b in pairs:
            if not (0 <= a < self.g.node_count and 0 <= b < self.g.node_count):
                raise InvalidArgumentError(f"pair ({a}, {b}) has a node outside the graph")
        object.__setattr__(self, "pairs", pairs)


def connects_pairs(g: Multigraph, edges: Iterable[int], pairs: Iterable[tuple[int, int]]) -> bool:
    labels = component_labels(g.restrict(edges))
    return all(labels[a] == labels[b] for a, b in pairs)


def steiner_forest(inst: SteinerInstance) -> frozenset[int]:
    g = inst.g
    pairs = [(a, b) for a, b in inst.pairs if a != b]
    if not pairs:
        return frozenset()
    labels = component_labels(g)
    for a, b in pairs:
        if labels[a] != labels[b]:
            raise InvalidArgumentError(f"pair ({a}, {b}) is disconnected in the graph")

    uf = UnionFind(g.nodes)
    load = [Fraction(0)] * g.node_count
    bought: list[int] = []

    def active_roots() -> set:
        return {uf[a] for a, b in pairs if uf[a] != uf[b]} | {uf[b] for a, b in pairs if uf[a] != uf[b]}

    active = active_roots()
    while active:
        best = None
        for e in g.edges:
            ru, rv = uf[e.u], uf[e.v]
            if ru == rv:
                continue
            rate = (ru in active) + (rv in active)
            if not rate:
                continue
            when = (e.weight - load[e.u] - load[e.v]) / rate
            key = (when, e.id)
            if best is None or key < best:
                best = key
        if best is None:
            raise InvalidArgumentError("active moats have no edge to grow along")
        delta, eid = best
        for v in g.nodes:
            if uf[v] in active:
                load[v] += delta
        e = g.edge(eid)
        uf.union(e.u, e.v)
        bought.append(eid)
        active = active_roots()
        log.debug("moat event at +%s: bought edge %d", delta, eid)

    kept = list(bought)
    for eid in reversed(bought):
        trial = [x for x in kept if x != eid]
        if connects_pairs(g, trial, pairs):
            kept = trial
    return frozenset(kept)


def steiner_forest_opt(inst: SteinerInstance, max_edges: int = OPT_MAX_EDGES) -> tuple[Fraction, frozenset[int]]:
    """Cheapest edge set connecting every pair, by subset enumeration."""
    g = inst.g
    if len(g.edges) > max_edges:
        raise ResourceLimitError(f"{len(g.edges)} edges exceed the enumeration limit of {max_edges}")
    ids = sorted(g.edge_ids)
    best = None
    for size in range(len(ids) + 1):
        for subset in combinations(ids, size):
            cost = g.weight_of(subset)
            if best is not None and (cost, subset) >= best:
                continue
            if connects_pairs(g, subset, inst.pairs):
                best = (cost, subset)
    if best is None:
        raise InvalidArgumentError("some pair is disconnected in the graph")
    return best[0], frozenset(best[1])
