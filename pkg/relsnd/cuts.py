"""Cut requirements for fault-tolerant subgraphs.

`F` is the set of edges lying in some cut of size at most k; every feasible
subgraph contains it. For F' ⊇ F the residual requirement of a cut S is

    f_F'(S) = min(k, |δ_G(S)|) - |δ_G(S) ∩ F'|

always measured in the original graph G. Cuts whose whole boundary lies in F'
are empty cuts; their rows are vacuous.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from relsnd.errors import InternalLogicError, InvalidArgumentError, ResourceLimitError
from relsnd.flow import edge_connectivity, max_flow_min_cut
from relsnd.graph import CutSide, Edge, Multigraph, cut_edges

log = logging.getLogger(__name__)

LWS_MAX_NODES = 12


@dataclass(frozen=True)
class ForcedSet:
    k: int
    edges: frozenset[int]


def forced_edges(g: Multigraph, k: int) -> ForcedSet:
    """F: edges whose endpoints have local edge connectivity at most k."""
    if k < 1:
        raise InvalidArgumentError(f"k must be at least 1, got {k}")
    memo: dict[tuple[int, int], int] = {}
    forced = set()
    for e in g.edges:
        pair = (min(e.u, e.v), max(e.u, e.v))
        if pair not in memo:
            memo[pair] = edge_connectivity(g, e.u, e.v, cutoff=k + 1)
        if memo[pair] <= k:
            forced.add(e.id)
    log.debug("forced set for k=%d: %d of %d edges", k, len(forced), len(g.edges))
    return ForcedSet(k, frozenset(forced))


@dataclass(frozen=True)
class CutRequirement:
    g: Multigraph
    k: int
    forced_superset: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "forced_superset", frozenset(self.forced_superset))
        if self.k < 1:
            raise InvalidArgumentError(f"k must be at least 1, got {self.k}")
        unknown = self.forced_superset - self.g.edge_ids
        if unknown:
            raise InvalidArgumentError(f"forced edges {sorted(unknown)} are not in the graph")

    @classmethod
    def initial(cls, g: Multigraph, k: int) -> CutRequirement:
        """The requirement with F' = F."""
        return cls(g, k, forced_edges(g, k).edges)

    def with_forced(self, extra: Iterable[int]) -> CutRequirement:
        return CutRequirement(self.g, self.k, self.forced_superset | frozenset(extra))

    @property
    def free_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.g.edges if e.id not in self.forced_superset)


def _boundary(g: Multigraph, s) -> frozenset[int]:
    if isinstance(s, CutSide):
        return s.boundary
    return cut_edges(g, s)


def f_value(req: CutRequirement, s: CutSide | Iterable[int]) -> int:
    boundary = _boundary(req.g, s)
    return min(req.k, len(boundary)) - len(boundary & req.forced_superset)


def is_empty_cut(req: CutRequirement, s: CutSide | Iterable[int]) -> bool:
    return _boundary(req.g, s) <= req.forced_superset


def _extended_weights(g: Multigraph, forced: frozenset[int], x: Mapping[int, Fraction]) -> dict:
    return {e.id: Fraction(1) if e.id in forced else Fraction(x.get(e.id, 0)) for e in g.edges}


def separate_kefts(req: CutRequirement, x: Mapping[int, Fraction]) -> CutSide | None:
    """First violated row of LP(F') at x, scanning ordered node pairs.

    x is indexed by edge id over E∖F'. Each pair's minimum cut is the one
    closest to the first node; pairs whose cut already reaches k are skipped.
    """
    g = req.g
    weights = _extended_weights(g, req.forced_superset, x)
    k = Fraction(req.k)
    for u in g.nodes:
        for v in g.nodes:
            if u == v:
                continue
            res = max_flow_min_cut(g, weights, {u}, {v}, cutoff=k)
            if not res.complete:
                continue
            side = CutSide.of(g, res.source_side)
            # value = |δ∩F'| + Σ x, so the row is violated iff value < min(k, |δ|)
            if res.value < min(req.k, len(side.boundary)):
                return side
    return None


def snd_requirement(demands: Iterable[tuple[int, int, int]], nodes: Iterable[int]) -> int:
    """f(S) for classical SND: the largest demand separated by S."""
    s = frozenset(nodes)
    return max((k for a, b, k in demands if (a in s) != (b in s)), default=0)


def check_snd_demands(g: Multigraph, demands: Iterable[tuple[int, int, int]]) -> None:
    for a, b, k in demands:
        if a == b or k <= 0:
            continue
        if edge_connectivity(g, a, b, cutoff=k) < k:
            raise InvalidArgumentError(f"demand ({a}, {b}, {k}) exceeds the connectivity of the graph")


def separate_snd(
    g: Multigraph,
    demands: Iterable[tuple[int, int, int]],
    forced: Iterable[int],
    x: Mapping[int, Fraction],
    checked: bool = False,
) -> CutSide | None:
    """First demand whose minimum cut under x (1 on F') falls short.

    Pass `checked=True` when the demands were already validated with
    `check_snd_demands`.
    """
    demands = [tuple(d) for d in demands]
    if not checked:
        check_snd_demands(g, demands)
    forced = frozenset(forced)
    weights = _extended_weights(g, forced, x)
    for a, b, k in demands:
        if a == b or k <= 0:
            continue
        res = max_flow_min_cut(g, weights, {a}, {b}, cutoff=Fraction(k))
        if res.complete and res.value < k:
            return CutSide.of(g, res.source_side)
    return None


def all_cut_sides(g: Multigraph) -> Iterator[frozenset[int]]:
    """Every cut once: the proper subsets containing node 0."""
    n = g.node_count
    for mask in range(1 << (n - 1)):
        s = frozenset([0] + [i + 1 for i in range(n - 1) if mask >> i & 1])
        if len(s) < n:
            yield s


def brute_force_violated_row(req: CutRequirement, x: Mapping[int, Fraction]) -> CutSide | None:
    """Reference oracle: first violated row over all cuts."""
    for s in all_cut_sides(req.g):
        side = CutSide.of(req.g, s)
        lhs = sum((Fraction(x.get(e, 0)) for e in side.boundary - req.forced_superset), Fraction(0))
        if lhs < f_value(req, side):
            return side
    return None


def lws_check(req: CutRequirement, max_nodes: int = LWS_MAX_NODES) -> tuple[frozenset[int], frozenset[int]] | None:
    """Search for nonempty cuts A, B where f_F' fails both uncrossing inequalities.

    Also asserts that for nonempty cuts A, B either both differences or both
    of intersection and union are nonempty cuts. Requires F' ⊇ F.
    """
    g = req.g
    n = g.node_count
    if n > max_nodes:
        raise ResourceLimitError(f"lws_check enumerates 2^{n} sets; limit is {max_nodes} nodes")
    missing = forced_edges(g, req.k).edges - req.forced_superset
    if missing:
        raise InvalidArgumentError(f"F' must contain the forced edges; missing {sorted(missing)}")

    full = (1 << n) - 1
    edges = [(1 << e.u, 1 << e.v, e.id in req.forced_superset) for e in g.edges]
    f = [0] * (full + 1)
    nonempty = [False] * (full + 1)
    for mask in range(1, full):
        size = forced = 0
        for bu, bv, is_forced in edges:
            if bool(mask & bu) != bool(mask & bv):
                size += 1
                forced += is_forced
        f[mask] = min(req.k, size) - forced
        nonempty[mask] = size > forced

    candidates = [m for m in range(1, full) if nonempty[m]]
    for i, a in enumerate(candidates):
        for b in candidates[i:]:
            diff = nonempty[a & ~b] and nonempty[b & ~a]
            cross = nonempty[a & b] and nonempty[a | b]
            if not (diff or cross):
                raise InternalLogicError(
                    f"nonempty cuts {_members(a)} and {_members(b)} uncross into empty cuts"
                )
            lhs = f[a] + f[b]
            if lhs > f[a & ~b] + f[b & ~a] and lhs > f[a & b] + f[a | b]:
                return _members(a), _members(b)
    return None


def _members(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


# --- Cut profiles ---

ONLY_A = "A-B"
ONLY_B = "B-A"
BOTH = "A&B"
OUTSIDE = "out"
REGIONS = (ONLY_A, ONLY_B, BOTH, OUTSIDE)

NAMED_SETS = {
    "A": frozenset({ONLY_A, BOTH}),
    "B": frozenset({ONLY_B, BOTH}),
    "A-B": frozenset({ONLY_A}),
    "B-A": frozenset({ONLY_B}),
    "A&B": frozenset({BOTH}),
    "A|B": frozenset({ONLY_A, ONLY_B, BOTH}),
}


@dataclass(frozen=True)
class ProfileReport:
    values: dict[str, int]
    a_empty: bool
    b_empty: bool

    @property
    def pair_sum(self) -> int:
        return self.values["A"] + self.values["B"]

    @property
    def difference_sum(self) -> int:
        return self.values["A-B"] + self.values["B-A"]

    @property
    def cross_sum(self) -> int:
        return self.values["A&B"] + self.values["A|B"]

    @property
    def weakly_supermodular(self) -> bool:
        return self.pair_sum <= self.difference_sum or self.pair_sum <= self.cross_sum

    @property
    def locally_weakly_supermodular(self) -> bool:
        """Only pairs of nonempty cuts are constrained."""
        return self.a_empty or self.b_empty or self.weakly_supermodular


@dataclass(frozen=True)
class AbstractCutProfile:
    """Edge counts between the four regions cut out by two sets A and B.

    The rest of the graph is assumed dense enough that the only cuts of size
    at most k are unions of regions.
    """
    only_a_out: int
    only_b_out: int
    both_out: int
    only_a_only_b: int
    only_a_both: int
    only_b_both: int

    def __post_init__(self):
        if min(self.pair_counts.values()) < 0:
            raise InvalidArgumentError("region pair counts must be nonnegative")

    @property
    def pair_counts(self) -> dict[frozenset[str], int]:
        return {
            frozenset({ONLY_A, OUTSIDE}): self.only_a_out,
            frozenset({ONLY_B, OUTSIDE}): self.only_b_out,
            frozenset({BOTH, OUTSIDE}): self.both_out,
            frozenset({ONLY_A, ONLY_B}): self.only_a_only_b,
            frozenset({ONLY_A, BOTH}): self.only_a_both,
            frozenset({ONLY_B, BOTH}): self.only_b_both,
        }

    def crossing_pairs(self, regions: frozenset[str]) -> list[frozenset[str]]:
        return [p for p in self.pair_counts if len(p & regions) == 1]

    def cut_size(self, regions: Iterable[str]) -> int:
        regions = frozenset(regions)
        return sum(self.pair_counts[p] for p in self.crossing_pairs(regions))

    def unions(self) -> list[frozenset[str]]:
        """All fourteen nonempty proper unions of regions."""
        return [
            frozenset(c)
            for r in range(1, len(REGIONS))
            for c in combinations(REGIONS, r)
        ]

    def small_unions(self, k: int) -> list[frozenset[str]]:
        return [u for u in self.unions() if self.cut_size(u) <= k]

    def forced_pairs(self, k: int) -> frozenset[frozenset[str]]:
        """Region pairs whose edges sit on some cut of size at most k."""
        return frozenset(p for u in self.small_unions(k) for p in self.crossing_pairs(u))

    def f_forced(self, k: int, regions: Iterable[str]) -> int:
        regions = frozenset(regions)
        forced = self.forced_pairs(k)
        in_forced = sum(self.pair_counts[p] for p in self.crossing_pairs(regions) if p in forced)
        return min(k, self.cut_size(regions)) - in_forced

    def f_plain(self, k: int, regions: Iterable[str]) -> int:
        return min(k, self.cut_size(regions))

    def is_empty(self, k: int, regions: Iterable[str]) -> bool:
        forced = self.forced_pairs(k)
        return all(p in forced or self.pair_counts[p] == 0 for p in self.crossing_pairs(frozenset(regions)))

    def report(self, k: int, forced: bool = True) -> ProfileReport:
        """f on A, B and their four uncrossings.

        With forced=False the plain min(k, |δ|) is used and no cut is empty.
        """
        evaluate = self.f_forced if forced else self.f_plain
        values = {name: evaluate(k, regions) for name, regions in NAMED_SETS.items()}
        if forced:
            return ProfileReport(values, self.is_empty(k, NAMED_SETS["A"]), self.is_empty(k, NAMED_SETS["B"]))
        return ProfileReport(values, False, False)


@dataclass(frozen=True)
class RealizedProfile:
    graph: Multigraph
    regions: dict[str, frozenset[int]]
    forced: frozenset[int] = field(default_factory=frozenset)

    def node_set(self, name: str) -> frozenset[int]:
        return frozenset().union(*(self.regions[r] for r in NAMED_SETS[name]))


def realize_profile(profile: AbstractCutProfile, k: int, region_size: int = 1) -> RealizedProfile:
    """Concrete multigraph whose small cuts are exactly the profile's unions.

    Every node pair inside a region carries k + 1 parallel edges, so any cut
    splitting a region has more than k edges and only unions of regions can be
    small. Cross edges between two regions are spread round-robin over node
    pairs. `forced` is the edge set the profile predicts for F.
    """
    if region_size < 1:
        raise InvalidArgumentError("region_size must be positive")
    if k < 1:
        raise InvalidArgumentError(f"k must be at least 1, got {k}")
    regions = {
        name: frozenset(range(i * region_size, (i + 1) * region_size)) for i, name in enumerate(REGIONS)
    }
    pairs: list[tuple[int, int]] = []
    for name in REGIONS:
        for u, v in combinations(sorted(regions[name]), 2):
            pairs.extend([(u, v)] * (k + 1))
    forced_pairs = profile.forced_pairs(k)
    forced = set()
    for pair, count in profile.pair_counts.items():
        r1, r2 = sorted(pair, key=REGIONS.index)
        left, right = sorted(regions[r1]), sorted(regions[r2])
        for i in range(count):
            u = left[i % region_size]
            v = right[(i // region_size + i) % region_size]
            if pair in forced_pairs:
                forced.add(len(pairs))
            pairs.append((u, v))
    g = Multigraph.from_edges(region_size * len(REGIONS), pairs)
    return RealizedProfile(g, regions, frozenset(forced))
