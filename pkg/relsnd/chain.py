"""The s–t 2-chain of a 2-edge-connected graph.

Starting from {s}, repeatedly cut off the closest size-2 separator towards t.
Each cut-off piece R_i is a chain component; the two separator edges S_i
join it to the next one. The chain ends when the current left boundary is
3-edge-connected to t or contains t.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from relsnd.errors import InvalidArgumentError, StructuralError
from relsnd.flow import max_flow_min_cut
from relsnd.graph import Multigraph, component_labels, cut_edges

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chain:
    components: tuple[frozenset[int], ...]
    separators: tuple[frozenset[int], ...]
    left_boundaries: tuple[frozenset[int], ...]
    right_boundaries: tuple[frozenset[int], ...]

    @property
    def p(self) -> int:
        """Index of the last component."""
        return len(self.separators)

    @property
    def separator_edges(self) -> frozenset[int]:
        return frozenset().union(*self.separators)


def _inside(g: Multigraph, nodes: frozenset[int]) -> Multigraph:
    """Spanning subgraph keeping the edges with both endpoints in `nodes`."""
    return g.restrict(e.id for e in g.edges if e.u in nodes and e.v in nodes)


def closest_important_separator_2(
    g: Multigraph, xs: Iterable[int], t: int
) -> tuple[frozenset[int], frozenset[int]] | None:
    """(S, R) for the size-2 X–t cut closest to X, or None if X and t are 3-edge-connected."""
    xs = frozenset(xs)
    if t in xs:
        raise InvalidArgumentError(f"target {t} lies in the source set")
    ones = {e.id: Fraction(1) for e in g.edges}
    res = max_flow_min_cut(g, ones, xs, {t}, cutoff=Fraction(3))
    if not res.complete:
        return None
    if res.value <= 1:
        raise StructuralError(f"input not 2-connected between {sorted(xs)} and {t}: min cut {res.value}")
    return cut_edges(g, res.source_side), res.source_side


def build_chain(g: Multigraph, s: int, t: int) -> Chain | None:
    if s == t:
        raise InvalidArgumentError("s and t must differ")
    components, separators, lefts, rights = [], [], [], []
    remaining = frozenset(g.nodes)
    left = frozenset({s})
    while t not in left:
        found = closest_important_separator_2(_inside(g, remaining), left, t)
        if found is None:
            break
        sep, reach = found
        right = frozenset(x for eid in sep for x in (g.edge(eid).u, g.edge(eid).v) if x in reach)
        components.append(reach)
        separators.append(sep)
        lefts.append(left)
        rights.append(right)
        remaining = remaining - reach
        left = frozenset(x for eid in sep for x in (g.edge(eid).u, g.edge(eid).v) if x not in reach)
        log.debug("chain component %d: %s, separator %s", len(components) - 1, sorted(reach), sorted(sep))
    if not components:
        return None
    components.append(remaining)
    lefts.append(left)
    rights.append(frozenset({t}))
    return Chain(tuple(components), tuple(separators), tuple(lefts), tuple(rights))


@dataclass(frozen=True)
class StructureReport:
    ok: bool
    violations: tuple[str, ...] = field(default_factory=tuple)


def _reaches(labels: tuple[int, ...], sources: frozenset[int], target: int) -> bool:
    return any(labels[x] == labels[target] for x in sources)


def check_structure(g: Multigraph, h: Iterable[int], chain: Chain) -> StructureReport:
    """Test H against the per-component conditions that characterize (s, t, 3) feasibility.

    Boundaries that share a node make the flow condition and the demands with
    an endpoint inside the shared set vacuous.
    """
    h = frozenset(h)
    violations = []
    for eid in sorted(chain.separator_edges - h):
        violations.append(f"separator edge {eid} absent")

    for i, comp in enumerate(chain.components):
        left, right = chain.left_boundaries[i], chain.right_boundaries[i]
        g_i = _inside(g, comp)
        h_i = g_i.restrict(e.id for e in g_i.edges if e.id in h)

        if not left & right:
            ones = {e.id: Fraction(1) for e in h_i.edges}
            flow = max_flow_min_cut(h_i, ones, left, right, cutoff=Fraction(3)).value
            if flow < 3:
                violations.append(f"component {i}: only {flow} edge-disjoint boundary paths")

        demands = [(left, v) for v in sorted(right) if v not in left]
        demands += [(right, v) for v in sorted(left) if v not in right]
        if demands:
            for faults in [()] + [(e.id,) for e in g_i.edges]:
                g_labels = component_labels(g_i, faults)
                h_labels = component_labels(h_i, faults)
                for side, v in demands:
                    if _reaches(g_labels, side, v) and not _reaches(h_labels, side, v):
                        violations.append(
                            f"component {i}: {sorted(side)} cut from {v} after faults {list(faults)}"
                        )

        g_labels = component_labels(g_i)
        h_labels = component_labels(h_i)
        for u in sorted(left):
            for v in sorted(right):
                if g_labels[u] == g_labels[v] and h_labels[u] != h_labels[v]:
                    violations.append(f"component {i}: {u} and {v} disconnected")
    return StructureReport(not violations, tuple(violations))


def reach_from(g: Multigraph, xs: Iterable[int], removed: Iterable[int] = ()) -> frozenset[int]:
    labels = component_labels(g, removed)
    roots = {labels[x] for x in xs}
    return frozenset(v for v in g.nodes if labels[v] in roots)


def is_important_separator(g: Multigraph, xs: Iterable[int], t: int, sep: Iterable[int]) -> bool:
    """Brute-force check: S separates, is minimal, and no cut of size ≤ |S| reaches strictly less."""
    xs, sep = frozenset(xs), frozenset(sep)
    reach = reach_from(g, xs, sep)
    if t in reach:
        return False
    for size in range(len(sep)):
        for sub in combinations(sorted(sep), size):
            if t not in reach_from(g, xs, sub):
                return False
    ids = sorted(g.edge_ids)
    for size in range(len(sep) + 1):
        for other in combinations(ids, size):
            other_reach = reach_from(g, xs, other)
            if t not in other_reach and other_reach < reach:
                return False
    return True
