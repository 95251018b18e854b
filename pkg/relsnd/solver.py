"""Relative network design solvers and the registry the CLI dispatches through.

`rsnd2` handles demands up to 2 by solving classical SND inside every
2-edge-connected component. `rsnd3_single` handles one demand (s, t, 3): in
each component on the path it builds the s–t 2-chain and covers every chain
component with a min-cost 3-flow, two demand-2 instances and a Steiner
forest.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count

from relsnd.chain import build_chain
from relsnd.errors import InternalLogicError, InvalidArgumentError
from relsnd.flow import min_cost_flow
from relsnd.graph import Multigraph, component_labels, contract, contraction_map, induced_subgraph
from relsnd.instance import Demand, Instance, kefts_demands
from relsnd.lp import DEFAULT_MAX_ROUNDS
from relsnd.reduction import DemandFunction, solve_via_components
from relsnd.rounding import kefts_unweighted, kefts_weighted, snd_jain
from relsnd.steiner import SteinerInstance, steiner_forest

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubroutineCost:
    component: str
    subroutine: str
    cost: Fraction


def _as_demand_function(r: DemandFunction | Iterable[tuple[int, int, int]]) -> DemandFunction:
    return r if isinstance(r, DemandFunction) else DemandFunction.from_demands(r)


def rsnd2(
    g: Multigraph,
    r: DemandFunction | Iterable[tuple[int, int, int]],
    ledger: list[SubroutineCost] | None = None,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> frozenset[int]:
    """2-approximation for relative demands of at most 2."""
    r = _as_demand_function(r)
    if r.max_value > 2:
        raise InvalidArgumentError(f"rsnd2 handles demands up to 2, got {r.max_value}")
    counter = count()

    def component_solver(sub: Multigraph, demands: list[tuple[int, int, int]]) -> frozenset[int]:
        edges = snd_jain(sub, demands, max_rounds=max_rounds).edges
        if ledger is not None:
            ledger.append(SubroutineCost(f"component {next(counter)}", "snd", sub.weight_of(edges)))
        return edges

    return solve_via_components(g, r, component_solver)


@dataclass(frozen=True)
class FlowSubproblem:
    graph: Multigraph
    source: int
    sink: int


@dataclass(frozen=True)
class DemandSubproblem:
    graph: Multigraph
    demands: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class ComponentSubproblems:
    """What one chain component must provide, each on G[R_i] with boundaries contracted as needed."""
    flow: FlowSubproblem | None
    left_demands: DemandSubproblem
    right_demands: DemandSubproblem
    steiner: SteinerInstance


def component_subinstances(g_i: Multigraph, left: Iterable[int], right: Iterable[int]) -> ComponentSubproblems:
    left, right = frozenset(left), frozenset(right)
    if not left or not right:
        raise InvalidArgumentError("boundaries must be nonempty")

    flow = None
    if not left & right:
        once, source = contract(g_i, left)
        mapping = contraction_map(g_i.node_count, left)
        twice, sink = contract(once, {mapping[v] for v in right})
        source = contraction_map(once.node_count, {mapping[v] for v in right})[source]
        flow = FlowSubproblem(twice, source, sink)

    g_left, v_left = contract(g_i, left)
    to_left = contraction_map(g_i.node_count, left)
    left_demands = DemandSubproblem(
        g_left, tuple((v_left, to_left[u], 2) for u in sorted(right) if u not in left)
    )
    g_right, v_right = contract(g_i, right)
    to_right = contraction_map(g_i.node_count, right)
    right_demands = DemandSubproblem(
        g_right, tuple((to_right[u], v_right, 2) for u in sorted(left) if u not in right)
    )

    labels = component_labels(g_i)
    pairs = sorted(
        {(min(u, v), max(u, v)) for u in left for v in right if u != v and labels[u] == labels[v]}
    )
    return ComponentSubproblems(flow, left_demands, right_demands, SteinerInstance(g_i, tuple(pairs)))


def _cover_component(
    sub: ComponentSubproblems, label: str, ledger: list[SubroutineCost] | None, max_rounds: int
) -> frozenset[int]:
    parts: list[tuple[str, Multigraph, frozenset[int]]] = []
    if sub.flow is not None:
        fg = sub.flow.graph
        res = min_cost_flow(
            fg, {e.id: e.weight for e in fg.edges}, {e.id: 1 for e in fg.edges}, sub.flow.source, sub.flow.sink, 3
        )
        parts.append(("flow", fg, res.support))
    for name, dp in (("rsnd2-left", sub.left_demands), ("rsnd2-right", sub.right_demands)):
        if dp.demands:
            parts.append((name, dp.graph, rsnd2(dp.graph, dp.demands, max_rounds=max_rounds)))
    if sub.steiner.pairs:
        if len(sub.steiner.pairs) > 4:
            raise InternalLogicError(f"{len(sub.steiner.pairs)} Steiner pairs; boundaries allow at most 4")
        parts.append(("steiner", sub.steiner.g, steiner_forest(sub.steiner)))

    chosen: set[int] = set()
    for name, graph, edges in parts:
        chosen |= edges
        if ledger is not None:
            ledger.append(SubroutineCost(label, name, graph.weight_of(edges)))
    return frozenset(chosen)


def _single3_in_component(
    sub: Multigraph, a: int, b: int, label: str, ledger: list[SubroutineCost] | None, max_rounds: int
) -> frozenset[int]:
    chain = build_chain(sub, a, b)
    if chain is None:
        res = min_cost_flow(sub, {e.id: e.weight for e in sub.edges}, {e.id: 1 for e in sub.edges}, a, b, 3)
        if ledger is not None:
            ledger.append(SubroutineCost(label, "flow", res.cost))
        return res.support

    log.info("%s: chain with %d separators", label, chain.p)
    chosen = set(chain.separator_edges)
    if ledger is not None:
        ledger.append(SubroutineCost(label, "separators", sub.weight_of(chain.separator_edges)))
    for i, comp in enumerate(chain.components):
        order = {x: j for j, x in enumerate(sorted(comp))}
        g_i = induced_subgraph(sub, comp)
        left = {order[x] for x in chain.left_boundaries[i]}
        right = {order[x] for x in chain.right_boundaries[i]}
        chosen |= _cover_component(component_subinstances(g_i, left, right), f"{label}/R{i}", ledger, max_rounds)
    return frozenset(chosen)


def rsnd3_single(
    g: Multigraph,
    s: int,
    t: int,
    ledger: list[SubroutineCost] | None = None,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> frozenset[int]:
    """27/4-approximation for the single relative demand (s, t, 3)."""
    if s == t:
        raise InvalidArgumentError("s and t must differ")
    counter = count()

    def component_solver(sub: Multigraph, demands: list[tuple[int, int, int]]) -> frozenset[int]:
        label = f"component {next(counter)}"
        chosen: set[int] = set()
        for a, b, k in demands:
            if k != 3:
                raise InternalLogicError(f"lifted demand ({a}, {b}, {k}) inside a component; expected 3")
            chosen |= _single3_in_component(sub, a, b, label, ledger, max_rounds)
        return frozenset(chosen)

    return solve_via_components(g, DemandFunction.from_demands([(s, t, 3)]), component_solver)


# --- Registry ---

@dataclass
class SolveOutcome:
    edges: frozenset[int]
    demands: tuple[Demand, ...]  # what the output must satisfy
    trace: dict = field(default_factory=dict)


@dataclass
class SolverDef:
    """A solver the CLI and the ratio harness can dispatch to."""
    name: str
    description: str
    guarantee: Callable[[int], Fraction]
    handler: Callable[[Instance, int | None, int], SolveOutcome]
    uses_k: bool = False


def _need_k(k: int | None) -> int:
    if k is None or k < 1:
        raise InvalidArgumentError("--k must be a positive integer for k-EFTS")
    return k


def _run_kefts_weighted(inst: Instance, k: int | None, max_rounds: int) -> SolveOutcome:
    k = _need_k(k)
    res = kefts_weighted(inst.graph, k, max_rounds=max_rounds)
    return SolveOutcome(res.edges, kefts_demands(inst.graph.node_count, k), res.trace.to_dict())


def _run_kefts_unweighted(inst: Instance, k: int | None, max_rounds: int) -> SolveOutcome:
    k = _need_k(k)
    res = kefts_unweighted(inst.graph, k, max_rounds=max_rounds)
    return SolveOutcome(res.edges, kefts_demands(inst.graph.node_count, k), res.trace.to_dict())


def _run_rsnd2(inst: Instance, k: int | None, max_rounds: int) -> SolveOutcome:
    ledger: list[SubroutineCost] = []
    edges = rsnd2(inst.graph, inst.demands, ledger=ledger, max_rounds=max_rounds)
    return SolveOutcome(edges, inst.demands, {"ledger": _ledger_dict(ledger)})


def _run_rsnd3_single(inst: Instance, k: int | None, max_rounds: int) -> SolveOutcome:
    if len(inst.demands) != 1 or inst.demands[0].k != 3:
        raise InvalidArgumentError("single demand k=3 required")
    s, t, _ = inst.demands[0]
    ledger: list[SubroutineCost] = []
    edges = rsnd3_single(inst.graph, s, t, ledger=ledger, max_rounds=max_rounds)
    return SolveOutcome(edges, inst.demands, {"ledger": _ledger_dict(ledger)})


def _ledger_dict(ledger: list[SubroutineCost]) -> list[dict]:
    return [{"component": c.component, "subroutine": c.subroutine, "cost": str(c.cost)} for c in ledger]


def build_registry() -> dict[str, SolverDef]:
    defs = [
        SolverDef(
            "kefts-weighted",
            "Iterative rounding for weighted k-EFTS",
            lambda k: Fraction(2),
            _run_kefts_weighted,
            uses_k=True,
        ),
        SolverDef(
            "kefts-unweighted",
            "Single-vertex rounding for unweighted k-EFTS",
            lambda k: 1 + Fraction(4, k),
            _run_kefts_unweighted,
            uses_k=True,
        ),
        SolverDef(
            "rsnd2",
            "Relative demands up to 2 via component-wise SND rounding",
            lambda k: Fraction(2),
            _run_rsnd2,
        ),
        SolverDef(
            "rsnd3-single",
            "Single relative demand (s, t, 3) via the s-t 2-chain",
            lambda k: Fraction(27, 4),
            _run_rsnd3_single,
        ),
    ]
    return {d.name: d for d in defs}
