"""Reduction of relative network design to 2-edge-connected pieces.

Removing the bridges of G leaves a forest of 2-edge-connected components.
A demand between two components turns into one demand inside every component
its tree path crosses, running between the bridge endpoints where the path
enters and leaves. The bridges themselves are bought whenever some demand
crosses them.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from itertools import combinations

from relsnd.errors import InvalidArgumentError
from relsnd.graph import ComponentTree, Multigraph, bridges_and_2ecc, induced_subgraph

log = logging.getLogger(__name__)

Pair = frozenset[int]


def _pair(u: int, v: int) -> Pair:
    if u == v:
        raise InvalidArgumentError(f"demand endpoints coincide at {u}")
    return frozenset((u, v))


@dataclass
class DemandFunction:
    """Symmetric demand r(u, v) stored sparsely; absent pairs have demand 0."""
    values: dict[Pair, int] = field(default_factory=dict)

    @classmethod
    def from_demands(cls, demands: Iterable[tuple[int, int, int]]) -> DemandFunction:
        r = cls()
        for s, t, k in demands:
            if s != t:
                r.raise_to(s, t, k)
        return r

    def __getitem__(self, pair: tuple[int, int]) -> int:
        u, v = pair
        return self.values.get(frozenset((u, v)), 0) if u != v else 0

    def raise_to(self, u: int, v: int, k: int) -> None:
        if k < 0:
            raise InvalidArgumentError(f"negative demand {k} for ({u}, {v})")
        if k == 0:
            return
        key = _pair(u, v)
        self.values[key] = max(self.values.get(key, 0), k)

    def items(self) -> Iterator[tuple[int, int, int]]:
        """(u, v, k) with u < v, in sorted order."""
        for key in sorted(self.values, key=sorted):
            u, v = sorted(key)
            yield u, v, self.values[key]

    @property
    def max_value(self) -> int:
        return max(self.values.values(), default=0)


@dataclass(frozen=True)
class TerminalPairs:
    """P_t: pairs (u, v) all of whose paths use a bridge at terminal t."""
    g: Multigraph
    tree: ComponentTree
    terminal: int

    def __contains__(self, pair: tuple[int, int]) -> bool:
        u, v = pair
        a, b = self.tree.component_of[u], self.tree.component_of[v]
        if a == b:
            return False
        path = self.tree.tree_path(a, b)
        if path is None:
            return False
        return any(self.terminal in (self.g.edge(eid).u, self.g.edge(eid).v) for eid in path)

    def enumerate(self) -> list[tuple[int, int]]:
        """Explicit pair list; quadratic in the node count."""
        return [(u, v) for u, v in combinations(self.g.nodes, 2) if (u, v) in self]


def terminals_and_pt(g: Multigraph) -> tuple[frozenset[int], dict[int, TerminalPairs]]:
    tree = bridges_and_2ecc(g)
    terminals = frozenset(x for eid in tree.tree_edges for x in (g.edge(eid).u, g.edge(eid).v))
    return terminals, {t: TerminalPairs(g, tree, t) for t in sorted(terminals)}


@dataclass(frozen=True)
class ReducedInstance:
    component_tree: ComponentTree
    lifted: DemandFunction
    cross_component_ones: frozenset[Pair]

    def component_demands(self, index: int) -> list[tuple[int, int, int]]:
        """Lifted demands with both endpoints in component `index`, original node labels."""
        comp = self.component_tree.components[index]
        return [(u, v, k) for u, v, k in self.lifted.items() if u in comp and v in comp]


def lift_demands(g: Multigraph, r: DemandFunction) -> ReducedInstance:
    """r_R: demands inside components plus unit demands across bridges.

    A cross demand (x, y, k) contributes k to the pair of nodes where its tree
    path enters and leaves each component on the way; pairs in different
    connected components of G need nothing.
    """
    tree = bridges_and_2ecc(g)
    lifted = DemandFunction()
    cross = set()
    for x, y, k in r.items():
        cx, cy = tree.component_of[x], tree.component_of[y]
        if cx == cy:
            lifted.raise_to(x, y, k)
            continue
        path = tree.tree_path(cx, cy)
        if path is None:
            continue
        lifted.raise_to(x, y, 1)
        cross.add(_pair(x, y))
        entry, current = x, cx
        for eid in path:
            e = g.edge(eid)
            exit_, nxt = (e.u, e.v) if tree.component_of[e.u] == current else (e.v, e.u)
            if entry != exit_:
                lifted.raise_to(entry, exit_, k)
            entry, current = nxt, tree.component_of[nxt]
        if entry != y:
            lifted.raise_to(entry, y, k)
    log.debug("lifted %d demands to %d, %d crossing bridges", len(r.values), len(lifted.values), len(cross))
    return ReducedInstance(tree, lifted, frozenset(cross))


ComponentSolver = Callable[[Multigraph, list[tuple[int, int, int]]], Iterable[int]]


def solve_via_components(g: Multigraph, r: DemandFunction, component_solver: ComponentSolver) -> frozenset[int]:
    """Solve every component on its own lifted demands and add the crossed bridges.

    The solver sees G[C] with nodes renumbered by `induced_subgraph`; edge ids
    are those of G.
    """
    reduced = lift_demands(g, r)
    tree = reduced.component_tree
    chosen: set[int] = set()
    for i, comp in enumerate(tree.components):
        demands = reduced.component_demands(i)
        if not demands:
            continue
        order = {x: j for j, x in enumerate(sorted(comp))}
        sub = induced_subgraph(g, comp)
        local = [(order[u], order[v], k) for u, v, k in demands]
        chosen.update(component_solver(sub, local))
    for pair in reduced.cross_component_ones:
        x, y = sorted(pair)
        chosen.update(tree.tree_path(tree.component_of[x], tree.component_of[y]) or ())
    return frozenset(chosen)
