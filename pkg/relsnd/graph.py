"""Undirected multigraph with stable edge ids.

Every algorithm in the package works on `Multigraph`. Nodes are the integers
0..node_count-1; edges carry an id that survives restriction, induction and
contraction, so an edge set computed on a derived graph is already an edge set
of the original graph. Weights are exact `Fraction`s.
"""

from __future__ import annotations

from collections import defaultdict, deque
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import networkx as nx
from networkx.utils import UnionFind

from relsnd.errors import InvalidArgumentError


def as_rational(value) -> Fraction:
    """Convert an int, Fraction or "p/q" string to a Fraction. Floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidArgumentError(f"refusing inexact weight {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidArgumentError(f"not a rational: {value!r}") from exc


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "weight", as_rational(self.weight))

    def other(self, node: int) -> int:
        return self.v if node == self.u else self.u


@dataclass(frozen=True)
class Multigraph:
    node_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.node_count < 0:
            raise InvalidArgumentError("node_count must be nonnegative")
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise InvalidArgumentError(f"duplicate edge id {e.id}")
            seen.add(e.id)
            if not (0 <= e.u < self.node_count and 0 <= e.v < self.node_count):
                raise InvalidArgumentError(f"edge {e.id} has an endpoint outside 0..{self.node_count - 1}")
            if e.u == e.v:
                raise InvalidArgumentError(f"edge {e.id} is a self-loop")
            if e.weight < 0:
                raise InvalidArgumentError(f"edge {e.id} has negative weight {e.weight}")

    @classmethod
    def from_edges(cls, node_count: int, pairs: Iterable[tuple]) -> Multigraph:
        """Build a graph from (u, v) or (u, v, w) tuples; ids follow input order."""
        edges = []
        for i, p in enumerate(pairs):
            u, v, *rest = p
            edges.append(Edge(i, u, v, rest[0] if rest else 1))
        return cls(node_count, tuple(edges))

    @cached_property
    def _by_id(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _incidence(self) -> tuple[tuple[Edge, ...], ...]:
        inc = [[] for _ in range(self.node_count)]
        for e in self.edges:
            inc[e.u].append(e)
            inc[e.v].append(e)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def edge_ids(self) -> frozenset[int]:
        return frozenset(self._by_id)

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    def edge(self, eid: int) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise InvalidArgumentError(f"unknown edge id {eid}") from None

    def incident(self, node: int) -> tuple[Edge, ...]:
        return self._incidence[node]

    def degree(self, node: int) -> int:
        return len(self._incidence[node])

    def weight_of(self, ids: Iterable[int]) -> Fraction:
        return sum((self.edge(i).weight for i in ids), Fraction(0))

    def is_uniform(self) -> bool:
        """True when every edge has the same weight."""
        return len({e.weight for e in self.edges}) <= 1

    def restrict(self, ids: Iterable[int]) -> Multigraph:
        """Spanning subgraph keeping only the given edge ids."""
        keep = set(ids)
        return Multigraph(self.node_count, tuple(e for e in self.edges if e.id in keep))

    def without(self, ids: Iterable[int]) -> Multigraph:
        drop = set(ids)
        return Multigraph(self.node_count, tuple(e for e in self.edges if e.id not in drop))

    def to_networkx(self) -> nx.MultiGraph:
        """networkx view keyed by edge id."""
        g = nx.MultiGraph()
        g.add_nodes_from(self.nodes)
        for e in self.edges:
            g.add_edge(e.u, e.v, key=e.id, weight=e.weight)
        return g


@dataclass(frozen=True)
class CutSide:
    """A node set S together with its boundary δ(S)."""
    nodes: frozenset[int]
    boundary: frozenset[int]

    @classmethod
    def of(cls, g: Multigraph, nodes: Iterable[int]) -> CutSide:
        s = frozenset(nodes)
        return cls(s, cut_edges(g, s))


@dataclass(frozen=True)
class ComponentTree:
    """2-edge-connected components linked by the bridges of G."""
    components: tuple[frozenset[int], ...]
    tree_edges: frozenset[int]
    component_of: tuple[int, ...]
    links: tuple[tuple[int, int, int], ...]  # (bridge id, component, component)

    @cached_property
    def _adjacency(self) -> dict[int, list[tuple[int, int]]]:
        adj = defaultdict(list)
        for eid, a, b in self.links:
            adj[a].append((b, eid))
            adj[b].append((a, eid))
        return adj

    def tree_path(self, a: int, b: int) -> list[int] | None:
        """Bridge ids on the tree path between components a and b, or None if disconnected."""
        if a == b:
            return []
        parent = {a: None}
        queue = deque([a])
        while queue:
            c = queue.popleft()
            if c == b:
                break
            for nxt, eid in sorted(self._adjacency[c]):
                if nxt not in parent:
                    parent[nxt] = (c, eid)
                    queue.append(nxt)
        if b not in parent:
            return None
        path = []
        c = b
        while parent[c] is not None:
            c, eid = parent[c]
            path.append(eid)
        path.reverse()
        return path


def _node_set(g: Multigraph, s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    bad = [x for x in s if not 0 <= x < g.node_count]
    if bad:
        raise InvalidArgumentError(f"nodes {sorted(bad)} not in graph with {g.node_count} nodes")
    return s


def cut_edges(g: Multigraph, s: Iterable[int]) -> frozenset[int]:
    """δ_G(S): ids of edges with exactly one endpoint in S."""
    s = _node_set(g, s)
    if not s or len(s) == g.node_count:
        raise InvalidArgumentError("cut side must be nonempty and proper")
    return frozenset(e.id for e in g.edges if (e.u in s) != (e.v in s))


def contraction_map(node_count: int, s: Iterable[int]) -> list[int]:
    """Node relabeling used by `contract`.

    Members of s share the label of their smallest member's slot; other nodes
    keep their relative order.
    """
    s = frozenset(s)
    mapping = []
    super_label = None
    nxt = 0
    for x in range(node_count):
        if x in s:
            if super_label is None:
                super_label = nxt
                nxt += 1
            mapping.append(super_label)
        else:
            mapping.append(nxt)
            nxt += 1
    return mapping


def contract(g: Multigraph, s: Iterable[int]) -> tuple[Multigraph, int]:
    """Merge the nodes of s into one supernode; returns (graph, supernode)."""
    s = _node_set(g, s)
    if not s:
        raise InvalidArgumentError("cannot contract an empty node set")
    mapping = contraction_map(g.node_count, s)
    edges = tuple(
        Edge(e.id, mapping[e.u], mapping[e.v], e.weight)
        for e in g.edges
        if not (e.u in s and e.v in s)
    )
    return Multigraph(max(mapping) + 1 if mapping else 0, edges), mapping[min(s)]


def induced_subgraph(g: Multigraph, s: Iterable[int]) -> Multigraph:
    """G[S]; node i of the result is the i-th smallest member of S."""
    order = sorted(_node_set(g, s))
    index = {x: i for i, x in enumerate(order)}
    edges = tuple(
        Edge(e.id, index[e.u], index[e.v], e.weight)
        for e in g.edges
        if e.u in index and e.v in index
    )
    return Multigraph(len(order), edges)


def component_labels(g: Multigraph, removed: Iterable[int] = ()) -> tuple[int, ...]:
    """Canonical component label per node of G minus the removed edge ids.

    A node's label is the smallest node in its component, so two labelings
    describe the same partition exactly when they are equal.
    """
    removed = set(removed)
    uf = UnionFind(g.nodes)
    for e in g.edges:
        if e.id not in removed:
            uf.union(e.u, e.v)
    first = {}
    labels = []
    for x in g.nodes:
        root = uf[x]
        labels.append(first.setdefault(root, x))
    return tuple(labels)


def connected_components(g: Multigraph) -> list[frozenset[int]]:
    comps = nx.connected_components(g.to_networkx())
    return sorted((frozenset(c) for c in comps), key=min)


def bridges_and_2ecc(g: Multigraph) -> ComponentTree:
    """Bridges of G and the 2-edge-connected components left after removing them."""
    multi = g.to_networkx()
    simple = nx.Graph(multi)
    bridge_ids = set()
    for u, v in nx.bridges(simple):
        keys = list(multi[u][v])
        if len(keys) == 1:
            bridge_ids.add(keys[0])

    rest = g.without(bridge_ids)
    components = connected_components(rest)
    component_of = [0] * g.node_count
    for i, comp in enumerate(components):
        for x in comp:
            component_of[x] = i
    links = tuple(
        sorted((eid, component_of[g.edge(eid).u], component_of[g.edge(eid).v]) for eid in bridge_ids)
    )
    return ComponentTree(tuple(components), frozenset(bridge_ids), tuple(component_of), links)
