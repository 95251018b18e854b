"""Ground truth by enumeration: fault-set verification, exact optima, random
instances and the approximation-ratio harness.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from relsnd import fixtures
from relsnd.errors import InvalidArgumentError, ResourceLimitError
from relsnd.graph import Multigraph, component_labels
from relsnd.instance import Demand, Instance, kefts_demands
from relsnd.solver import build_registry

log = logging.getLogger(__name__)

DEFAULT_VERIFY_BUDGET = 10_000_000
DEFAULT_OPT_MAX_EDGES = 18


@dataclass(frozen=True)
class Violation:
    demand_index: int
    demand: Demand
    faults: tuple[int, ...]
    witness: tuple[int, int]  # connected in G∖F, separated in H∖F

    def replay(self, g: Multigraph, h: Iterable[int]) -> bool:
        """Recompute both labelings and confirm the discrepancy."""
        u, v = self.witness
        g_labels = component_labels(g, self.faults)
        h_labels = component_labels(g.restrict(h), self.faults)
        return g_labels[u] == g_labels[v] and h_labels[u] != h_labels[v]

    def to_dict(self) -> dict:
        return {
            "demand_index": self.demand_index,
            "demand": list(self.demand),
            "faults": list(self.faults),
            "witness": list(self.witness),
        }


def _fault_sets(ids: Sequence[int], below: int) -> Iterator[tuple[int, ...]]:
    """All F with |F| < below, by size then lexicographically."""
    for size in range(below):
        yield from combinations(ids, size)


def fault_set_count(m: int, below: int) -> int:
    return sum(comb(m, size) for size in range(below))


class FaultChecker:
    """Feasibility of many candidate subgraphs against one demand set.

    Components of G∖F are computed once per fault set and reused by every
    candidate and every demand.
    """

    def __init__(self, g: Multigraph, demands: Iterable[tuple[int, int, int]], budget: int = DEFAULT_VERIFY_BUDGET):
        self.g = g
        self.demands = [Demand(*d) for d in demands]
        for d in self.demands:
            if not (0 <= d.s < g.node_count and 0 <= d.t < g.node_count):
                raise InvalidArgumentError(f"demand {tuple(d)} has a node outside the graph")
        self.ids = sorted(g.edge_ids)
        self.depth = max((d.k for d in self.demands if d.s != d.t), default=0)
        needed = fault_set_count(len(self.ids), self.depth)
        if needed > budget:
            raise ResourceLimitError(f"{needed} fault sets exceed the verification budget of {budget}")
        self._g_labels: dict[tuple[int, ...], tuple[int, ...]] = {}

    def g_labels(self, faults: tuple[int, ...]) -> tuple[int, ...]:
        labels = self._g_labels.get(faults)
        if labels is None:
            labels = self._g_labels[faults] = component_labels(self.g, faults)
        return labels

    def first_violation(self, h: Iterable[int]) -> Violation | None:
        """First violation by demand index, then |F|, then F lexicographically."""
        h_graph = self.g.restrict(h)
        best: tuple | None = None
        for faults in _fault_sets(self.ids, self.depth):
            g_labels = self.g_labels(faults)
            h_labels = None
            for i, d in enumerate(self.demands):
                if best is not None and i >= best[0]:
                    break
                if d.s == d.t or len(faults) >= d.k or g_labels[d.s] != g_labels[d.t]:
                    continue
                if h_labels is None:
                    h_labels = component_labels(h_graph, faults)
                if h_labels[d.s] != h_labels[d.t]:
                    key = (i, len(faults), faults)
                    if best is None or key < best:
                        best = key
                    break
        if best is None:
            return None
        i, _, faults = best
        d = self.demands[i]
        return Violation(i, d, faults, (d.s, d.t))

    def feasible(self, h: Iterable[int]) -> bool:
        h_graph = self.g.restrict(h)
        for faults in _fault_sets(self.ids, self.depth):
            g_labels = self.g_labels(faults)
            h_labels = None
            for d in self.demands:
                if d.s == d.t or len(faults) >= d.k or g_labels[d.s] != g_labels[d.t]:
                    continue
                if h_labels is None:
                    h_labels = component_labels(h_graph, faults)
                if h_labels[d.s] != h_labels[d.t]:
                    return False
        return True


def _check_subgraph(g: Multigraph, h: Iterable[int]) -> frozenset[int]:
    h = frozenset(h)
    unknown = h - g.edge_ids
    if unknown:
        raise InvalidArgumentError(f"edges {sorted(unknown)} are not in the graph")
    return h


def verify_rsnd(
    g: Multigraph,
    h: Iterable[int],
    demands: Iterable[tuple[int, int, int]],
    budget: int = DEFAULT_VERIFY_BUDGET,
) -> Violation | None:
    h = _check_subgraph(g, h)
    return FaultChecker(g, demands, budget).first_violation(h)


def verify_kefts(g: Multigraph, h: Iterable[int], k: int, budget: int = DEFAULT_VERIFY_BUDGET) -> Violation | None:
    """Compare the partitions of G∖F and H∖F for every |F| < k."""
    if k < 1:
        raise InvalidArgumentError(f"k must be at least 1, got {k}")
    h = _check_subgraph(g, h)
    ids = sorted(g.edge_ids)
    needed = fault_set_count(len(ids), k)
    if needed > budget:
        raise ResourceLimitError(f"{needed} fault sets exceed the verification budget of {budget}")
    h_graph = g.restrict(h)
    index = {(d.s, d.t): i for i, d in enumerate(kefts_demands(g.node_count, k))}
    for faults in _fault_sets(ids, k):
        g_labels = component_labels(g, faults)
        h_labels = component_labels(h_graph, faults)
        if g_labels != h_labels:
            # H∖F refines G∖F
            v = next(v for v in g.nodes if g_labels[v] != h_labels[v])
            u = next(u for u in g.nodes if g_labels[u] == g_labels[v] and h_labels[u] != h_labels[v])
            pair = (min(u, v), max(u, v))
            return Violation(index[pair], Demand(*pair, k), faults, pair)
    return None


def exact_opt(
    g: Multigraph,
    demands: Iterable[tuple[int, int, int]],
    max_edges: int = DEFAULT_OPT_MAX_EDGES,
    budget: int = DEFAULT_VERIFY_BUDGET,
) -> tuple[Fraction, frozenset[int]]:
    """Minimum-weight feasible subgraph; ties go to the lexicographically smallest id list.

    An edge whose removal from E breaks feasibility lies in every solution,
    so only subsets of the remaining edges are enumerated.
    """
    if len(g.edges) > max_edges:
        raise ResourceLimitError(f"{len(g.edges)} edges exceed the exact-optimum limit of {max_edges}")
    checker = FaultChecker(g, demands, budget)
    everything = frozenset(g.edge_ids)
    required = frozenset(e for e in everything if not checker.feasible(everything - {e}))
    optional = sorted(everything - required)
    base = g.weight_of(required)
    weights = [g.edge(e).weight for e in optional]
    log.debug("exact_opt: %d required, %d optional edges", len(required), len(optional))

    candidates = []
    for mask in range(1 << len(optional)):
        chosen = [optional[i] for i in range(len(optional)) if mask >> i & 1]
        cost = base + sum((weights[i] for i in range(len(optional)) if mask >> i & 1), Fraction(0))
        candidates.append((cost, tuple(sorted(required.union(chosen)))))
    candidates.sort()
    for cost, ids in candidates:
        if checker.feasible(ids):
            return cost, frozenset(ids)
    raise InvalidArgumentError("no feasible subgraph; the graph itself should be one")


# --- Instance generation ---

@dataclass(frozen=True)
class DemandSpec:
    """How gen_random picks demands: "kefts:K", "single:K" or "pairs:COUNT:MAXK"."""
    kind: str
    k: int = 2
    count: int = 1

    @classmethod
    def parse(cls, text: str) -> DemandSpec:
        parts = text.strip().split(":")
        try:
            if parts[0] in ("kefts", "single") and len(parts) == 2:
                spec = cls(parts[0], int(parts[1]))
            elif parts[0] == "pairs" and len(parts) == 3:
                spec = cls("pairs", int(parts[2]), int(parts[1]))
            else:
                raise ValueError(text)
        except ValueError:
            raise InvalidArgumentError(
                f"bad demand spec {text!r}; use kefts:K, single:K or pairs:COUNT:MAXK"
            ) from None
        if spec.k < 1 or spec.count < 1:
            raise InvalidArgumentError(f"demand spec {text!r} needs positive numbers")
        return spec

    def __str__(self) -> str:
        if self.kind == "pairs":
            return f"pairs:{self.count}:{self.k}"
        return f"{self.kind}:{self.k}"


def _random_weight(rng: random.Random, weight_range: tuple[int, int], denominator: int) -> Fraction:
    lo, hi = weight_range
    return Fraction(rng.randint(lo * denominator, hi * denominator), denominator)


def _two_connected_half(nodes: list[int], p: float, rng: random.Random) -> list[tuple[int, int]]:
    if len(nodes) == 2:
        return [(nodes[0], nodes[1]), (nodes[0], nodes[1])]
    pairs = [(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))]
    ring = {frozenset(q) for q in pairs}
    for u, v in combinations(nodes, 2):
        if frozenset((u, v)) not in ring and rng.random() < p:
            pairs.append((u, v))
    return pairs


def gen_random(
    n: int,
    edge_probability: float,
    weight_range: tuple[int, int] = (1, 1),
    demand_spec: DemandSpec | str = "kefts:2",
    seed: int = 0,
    plant_two_cut: bool = False,
    weight_denominator: int = 1,
) -> Instance:
    """Deterministic random instance for a seed.

    With plant_two_cut the nodes split into two 2-edge-connected halves joined
    by exactly two edges; single demands then run from the first half to the
    second.
    """
    if n < 1 or not 0 <= edge_probability <= 1:
        raise InvalidArgumentError("need n ≥ 1 and 0 ≤ p ≤ 1")
    if weight_range[0] < 0 or weight_range[0] > weight_range[1] or weight_denominator < 1:
        raise InvalidArgumentError(f"bad weight range {weight_range}")
    spec = DemandSpec.parse(demand_spec) if isinstance(demand_spec, str) else demand_spec
    rng = random.Random(seed)

    if plant_two_cut:
        if n < 4:
            raise InvalidArgumentError("a planted 2-cut needs at least 4 nodes")
        half = n // 2
        first, second = list(range(half)), list(range(half, n))
        pairs = _two_connected_half(first, edge_probability, rng)
        pairs += _two_connected_half(second, edge_probability, rng)
        pairs += [(rng.choice(first), rng.choice(second)) for _ in range(2)]
    else:
        first, second = list(range(n)), list(range(n))
        pairs = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < edge_probability]

    g = Multigraph.from_edges(n, [(u, v, _random_weight(rng, weight_range, weight_denominator)) for u, v in pairs])
    return Instance(g, _pick_demands(n, spec, rng, first, second))


def _pick_demands(n: int, spec: DemandSpec, rng: random.Random, first, second) -> tuple[Demand, ...]:
    if spec.kind == "kefts":
        return kefts_demands(n, spec.k)
    if n < 2:
        raise InvalidArgumentError(f"{spec.kind} demands need two nodes")
    if spec.kind == "single":
        s = rng.choice(first)
        t = rng.choice([v for v in second if v != s])
        return (Demand(s, t, spec.k),)
    return tuple(Demand(*rng.sample(range(n), 2), rng.randint(1, spec.k)) for _ in range(spec.count))


def gen_fixture(name: str, demand_spec: DemandSpec | str = "kefts:2", seed: int = 0) -> Instance:
    """A named fixture graph with demands drawn like gen_random's."""
    try:
        build = fixtures.GRAPHS[name]
    except KeyError:
        raise InvalidArgumentError(f"unknown fixture {name!r}; choose from {', '.join(fixtures.GRAPHS)}") from None
    spec = DemandSpec.parse(demand_spec) if isinstance(demand_spec, str) else demand_spec
    g = build()
    nodes = list(g.nodes)
    return Instance(g, _pick_demands(g.node_count, spec, random.Random(seed), nodes, nodes))


# --- Ratio harness ---

@dataclass(frozen=True)
class HarnessRow:
    index: int
    cost: Fraction
    opt: Fraction
    ratio: Fraction | None  # None when OPT is 0 but the solver paid something
    feasible: bool


@dataclass
class HarnessReport:
    tag: str
    rows: list[HarnessRow] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    guarantee_violations: list[int] = field(default_factory=list)

    @property
    def max_ratio(self) -> Fraction | None:
        ratios = [r.ratio for r in self.rows if r.ratio is not None]
        return max(ratios, default=None)

    @property
    def feasible_count(self) -> int:
        return sum(r.feasible for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.feasible_count == len(self.rows) and not self.guarantee_violations


def ratio_harness(
    tag: str,
    instances: Iterable[Instance],
    k: int | None = None,
    max_rounds: int = 10_000,
    opt_max_edges: int = DEFAULT_OPT_MAX_EDGES,
    budget: int = DEFAULT_VERIFY_BUDGET,
) -> HarnessReport:
    """Run one registered solver over a batch and compare with exact optima."""
    registry = build_registry()
    if tag not in registry:
        raise InvalidArgumentError(f"unknown solver {tag!r}; choose from {', '.join(registry)}")
    solver = registry[tag]
    report = HarnessReport(tag)
    for i, inst in enumerate(instances):
        g = inst.graph
        outcome = solver.handler(inst, k, max_rounds)
        try:
            feasible = FaultChecker(g, outcome.demands, budget).feasible(outcome.edges)
            opt, _ = exact_opt(g, outcome.demands, max_edges=opt_max_edges, budget=budget)
        except ResourceLimitError as exc:
            report.skipped.append(f"instance {i}: {exc}")
            continue
        cost = g.weight_of(outcome.edges)
        if opt == 0:
            ratio = Fraction(1) if cost == 0 else None
        else:
            ratio = cost / opt
        bound = solver.guarantee(k or max((d.k for d in outcome.demands), default=1))
        if ratio is None or ratio > bound:
            report.guarantee_violations.append(i)
        report.rows.append(HarnessRow(i, cost, opt, ratio, feasible))
    return report
